extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int x = __VERIFIER_nondet_int();
  while (x < 100) {
    x = x + 1;
  }
  __VERIFIER_assert(x >= 100);
  return 0;
}
