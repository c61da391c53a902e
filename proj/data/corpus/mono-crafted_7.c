extern void __VERIFIER_assert(int cond);

int main() {
  int x = 1000000;
  int y = 50000;
  int z = 0;
  while (y > 0) {
    if (z == 0) {
      x = x - 2;
      y = y - 2;
    } else {
      x = x + 1;
      z = z + 1;
    }
  }
  while (z > 0) {
    z = z - 1;
    x = x - 1;
  }
  __VERIFIER_assert(x == 950000);
  return 0;
}
