extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int x = 0;
  while (__VERIFIER_nondet_int()) {
    x += 2;
  }
  __VERIFIER_assert(x >= 0);
  return 0;
}
