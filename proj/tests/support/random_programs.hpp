#pragma once

#include "absint/domain/state.hpp"
#include "absint/imp/ast.hpp"

#include <random>
#include <string>
#include <vector>

namespace testing_support {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

struct GenOptions {
  std::vector<std::string> vars{"x", "y", "z"};
  int lit_lo = -10;
  int lit_hi = 10;
  int max_depth = 3;
  int max_block = 3;
  bool reads = true;
  bool division = true;
};

inline absint::ExprPtr random_atom(Rng& rng, const GenOptions& o) {
  int k = uniform(rng, 0, o.reads ? 9 : 8);
  if (k < 4) return absint::lit(uniform(rng, o.lit_lo, o.lit_hi));
  if (k < 9) return absint::var(o.vars[uniform(rng, 0, int(o.vars.size()) - 1)]);
  return absint::read_expr();
}

inline absint::ExprPtr random_expr(Rng& rng, const GenOptions& o, int depth) {
  if (depth <= 0 || uniform(rng, 0, 2) == 0) return random_atom(rng, o);
  int ops = o.division ? 3 : 2;
  auto op = static_cast<absint::ArithOp>(uniform(rng, 0, ops));
  return absint::binary(op, random_expr(rng, o, depth - 1),
                        random_expr(rng, o, depth - 1));
}

inline absint::BoolPtr random_guard(Rng& rng, const GenOptions& o, int depth) {
  int k = uniform(rng, 0, depth > 0 ? 9 : 5);
  if (k <= 4) {
    auto op = static_cast<absint::CmpOp>(uniform(rng, 0, 4));
    return absint::cmp(op, random_expr(rng, o, 1), random_expr(rng, o, 1));
  }
  if (k == 5) return absint::bool_const(uniform(rng, 0, 1) == 1);
  if (k <= 7) return absint::negate(random_guard(rng, o, depth - 1));
  if (k == 8)
    return absint::conj(random_guard(rng, o, depth - 1),
                        random_guard(rng, o, depth - 1));
  return absint::disj(random_guard(rng, o, depth - 1),
                      random_guard(rng, o, depth - 1));
}

inline absint::CmdPtr random_cmd(Rng& rng, const GenOptions& o, int depth);

inline absint::CmdPtr random_block(Rng& rng, const GenOptions& o, int depth) {
  std::vector<absint::CmdPtr> stmts;
  int n = uniform(rng, 1, o.max_block);
  for (int i = 0; i < n; ++i) stmts.push_back(random_cmd(rng, o, depth));
  return absint::seq(std::move(stmts));
}

inline absint::CmdPtr random_cmd(Rng& rng, const GenOptions& o, int depth) {
  int k = uniform(rng, 0, depth > 0 ? 9 : 5);
  if (k == 0) return absint::skip();
  if (k <= 5)
    return absint::assign(o.vars[uniform(rng, 0, int(o.vars.size()) - 1)],
                          random_expr(rng, o, 2));
  if (k <= 7)
    return absint::if_(random_guard(rng, o, 1), random_block(rng, o, depth - 1),
                       random_block(rng, o, depth - 1));
  return absint::while_(random_guard(rng, o, 1), random_block(rng, o, depth - 1));
}

inline absint::Interval random_interval(Rng& rng, int lo, int hi,
                                        bool infinite_bounds) {
  if (uniform(rng, 0, 9) == 0) return absint::Interval::bottom();
  int a = uniform(rng, lo, hi), b = uniform(rng, lo, hi);
  if (a > b) std::swap(a, b);
  absint::Bound l(a), h(b);
  if (infinite_bounds && uniform(rng, 0, 3) == 0) l = absint::Bound::neg_inf();
  if (infinite_bounds && uniform(rng, 0, 3) == 0) h = absint::Bound::pos_inf();
  return absint::Interval::range(l, h);
}

}  // namespace testing_support
