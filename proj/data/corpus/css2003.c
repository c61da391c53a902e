extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int i, j, k;
  i = 1;
  j = 1;
  k = __VERIFIER_nondet_int();
  if (0 <= k && k <= 1) {
    while (i < 1000000) {
      i = i + 1;
      j = j + k;
      k = k - 1;
      __VERIFIER_assert(1 <= i + k && i + k <= 2 && i >= 1);
    }
  } else {
    i = 0;
    j = 0;
    k = 0;
  }
  j = j - i;
  return 0;
}
