extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int n = __VERIFIER_nondet_int();
  int i = __VERIFIER_nondet_int();
  int l = __VERIFIER_nondet_int();
  i = l;
  if (l > 0) {
    while (i < n) {
      i++;
    }
    __VERIFIER_assert(l >= 1);
  }
  return 0;
}
