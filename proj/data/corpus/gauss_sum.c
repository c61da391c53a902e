extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int n = __VERIFIER_nondet_int();
  int sum = 0;
  int i = 0;
  if (1 <= n && n <= 1000) {
    for (i = 1; i <= n; i++) {
      sum = sum + i;
    }
    __VERIFIER_assert(2 * sum == n * (n + 1));
  } else {
    n = 0;
    sum = 0;
  }
  return 0;
}
