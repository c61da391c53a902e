extern void reach_error(void);

int main() {
  int a, b, c, d, e;
  int count = 0;
  int uint32_max = 4294967294;
  for (a = 0; a < uint32_max - 1; ++a) {
    count = count + 1;
    for (b = 0; b < uint32_max - 1; ++b) {
      count = count + 1;
      for (c = 0; c < uint32_max - 1; ++c) {
        count = count + 1;
        for (d = 0; d < uint32_max - 1; ++d) {
          count = count + 1;
          for (e = 0; e < uint32_max - 1; ++e) {
            count = count + 1;
            if (a == b && b == c && c == d && d == e && e == uint32_max - 2) {
              reach_error();
            }
          }
        }
      }
    }
  }
  return 0;
}
