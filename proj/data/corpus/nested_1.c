extern void reach_error(void);

int main() {
  int a = 6;
  for (a = 0; a < 6; ++a) {
  }
  if (!(a == 6)) {
    reach_error();
  }
  return 0;
}
