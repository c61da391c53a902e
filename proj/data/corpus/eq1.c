extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int w = __VERIFIER_nondet_int();
  int x = w;
  int y = __VERIFIER_nondet_int();
  int z = y;
  while (__VERIFIER_nondet_int()) {
    if (__VERIFIER_nondet_int()) {
      ++w;
      ++x;
    } else {
      --y;
      --z;
    }
  }
  __VERIFIER_assert(w == x && y == z);
  return 0;
}
