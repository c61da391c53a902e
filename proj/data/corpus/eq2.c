extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int w = __VERIFIER_nondet_int();
  int x = w;
  int y = w + 1;
  int z = x + 1;
  while (__VERIFIER_nondet_int()) {
    y++;
    z++;
  }
  __VERIFIER_assert(y == z);
  return 0;
}
