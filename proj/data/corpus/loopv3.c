extern int __VERIFIER_nondet_int(void);
extern void __VERIFIER_assert(int cond);

#define SIZE 50000001

int main() {
  int i = 0;
  int j = 0;
  while (i < SIZE) {
    if (__VERIFIER_nondet_int()) {
      i = i + 8;
    } else {
      i = i + 4;
    }
  }
  j = i / 4;
  __VERIFIER_assert(j * 4 == i);
  return 0;
}
