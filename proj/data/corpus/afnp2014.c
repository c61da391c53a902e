extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int x = 1;
  int y = 0;
  while (y < 1000 && __VERIFIER_nondet_int()) {
    x = x + y;
    y = y + 1;
  }
  __VERIFIER_assert(x >= y);
  return 0;
}
