extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int x = 0;
  int y = 0;
  int k = 0;
  int N = __VERIFIER_nondet_int();
  while (x < N) {
    x += 2;
    y += 1;
  }
  __VERIFIER_assert(x == 2 * y);
  return 0;
}
