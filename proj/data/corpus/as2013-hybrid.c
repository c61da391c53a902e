extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int i = 0;
  int j = 0;
  while (i <= 9) {
    j = 0;
    while (j < 10) {
      j = j + 1;
    }
    i = i + 1;
  }
  while (j > 0) {
    j = j - 1;
    i = i - 1;
  }
  __VERIFIER_assert(i == 0);
  return 0;
}
