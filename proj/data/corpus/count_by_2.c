extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

#define LARGE_INT 1000000

int main() {
  int i = __VERIFIER_nondet_int();
  for (i = 0; i < LARGE_INT; i += 2) ;
  __VERIFIER_assert(i == LARGE_INT);
  return 0;
}
