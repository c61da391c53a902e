extern void reach_error(void);

int main() {
  int a = 6;
  int b = 6;
  for (a = 0; a < 6; ++a) {
    for (b = 0; b < 6; ++b) {
    }
  }
  if (!(a == 6 && b == 6)) {
    reach_error();
  }
  return 0;
}
