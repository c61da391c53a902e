extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int s = 0;
  while (__VERIFIER_nondet_int()) {
    if (s != 0) {
      ++s;
    }
    if (__VERIFIER_nondet_int()) {
      __VERIFIER_assert(s == 0);
    }
  }
  return 0;
}
