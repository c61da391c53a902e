extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

int main() {
  int n = __VERIFIER_nondet_int();
  int x = n;
  int y = 0;
  int z = 0;
  while (x > 0) {
    x--;
    y++;
  }
  z = y;
  while (z > 0) {
    x++;
    z--;
  }
  __VERIFIER_assert(y + z == n);
  return 0;
}
