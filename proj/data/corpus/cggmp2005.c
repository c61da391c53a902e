extern void __VERIFIER_assert(int cond);

int main() {
  int i = 1;
  int j = 10;
  int k = 0;
  while (j >= i) {
    i = i + 2;
    j = -1 + j;
    k = k + 1;
  }
  __VERIFIER_assert(j == 6);
  return 0;
}
