extern void __VERIFIER_assert(int cond);

int main() {
  int x = 0;
  int y = 10000000;
  int z = 5000000;
  while (x < y) {
    if (x >= 5000000) {
      z++;
    }
    x++;
  }
  __VERIFIER_assert(z == x);
  return 0;
}
