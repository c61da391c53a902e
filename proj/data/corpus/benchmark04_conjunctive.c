extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int k = __VERIFIER_nondet_int();
  int j = __VERIFIER_nondet_int();
  int n = __VERIFIER_nondet_int();
  if (n >= 1 && k >= n) {
    j = 0;
    while (j <= n - 1) {
      j++;
      k--;
    }
    __VERIFIER_assert(k >= 0);
  }
  return 0;
}
