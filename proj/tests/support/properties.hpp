#pragma once

// Randomized law checks over the interval domain, shared by the unit tests
// and the acceptance binary. Each returns the number of violations and a
// description of the first one.

#include "absint/domain/state.hpp"
#include "absint/imp/syntax.hpp"
#include "support/random_programs.hpp"

#include <functional>
#include <optional>
#include <sstream>
#include <string>

namespace testing_support {

struct PropertyResult {
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::string first;

  void fail(const std::string& what) {
    if (violations++ == 0) first = what;
  }
};

// C truncating division; nullopt on division by zero.
inline std::optional<long long> concrete_arith(absint::ArithOp op, long long a, long long b) {
  using absint::ArithOp;
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div:
      if (b == 0) return std::nullopt;
      return a / b;
  }
  return std::nullopt;
}

inline bool concrete_cmp(absint::CmpOp op, long long a, long long b) {
  using absint::CmpOp;
  switch (op) {
    case CmpOp::lt: return a < b;
    case CmpOp::le: return a <= b;
    case CmpOp::eq: return a == b;
    case CmpOp::gt: return a > b;
    case CmpOp::ge: return a >= b;
  }
  return false;
}

inline long long finite(const absint::Bound& b) { return b.value().convert_to<long long>(); }

inline PropertyResult lattice_laws(std::uint64_t seed, std::size_t cases) {
  using namespace absint;
  Rng rng(seed);
  PropertyResult r;
  for (; r.cases < cases; ++r.cases) {
    auto a = random_interval(rng, -8, 8, true);
    auto b = random_interval(rng, -8, 8, true);
    auto c = random_interval(rng, -8, 8, true);
    bool le = leq(a, b);
    bool ok = join(a, b) == join(b, a) && meet(a, b) == meet(b, a) &&
              join(join(a, b), c) == join(a, join(b, c)) &&
              meet(meet(a, b), c) == meet(a, meet(b, c)) && join(a, a) == a && meet(a, a) == a &&
              join(a, meet(a, b)) == a && meet(a, join(a, b)) == a &&
              le == (join(a, b) == b) && le == (meet(a, b) == a);
    if (!ok) r.fail(to_string(a) + ", " + to_string(b) + ", " + to_string(c));
  }
  return r;
}

inline PropertyResult widening_covers(std::uint64_t seed, std::size_t cases) {
  using namespace absint;
  Rng rng(seed);
  PropertyResult r;
  for (; r.cases < cases; ++r.cases) {
    auto a = random_interval(rng, -8, 8, true);
    auto b = random_interval(rng, -8, 8, true);
    auto w = widen(a, b);
    if (!leq(a, w) || !leq(b, w)) r.fail(to_string(a) + " widen " + to_string(b) + " = " + to_string(w));
  }
  return r;
}

// Each bound changes at most once along any widening chain (twice counting
// both bounds).
inline PropertyResult widening_stabilizes(std::uint64_t seed, std::size_t cases) {
  using namespace absint;
  Rng rng(seed);
  PropertyResult r;
  for (; r.cases < cases; ++r.cases) {
    auto x = random_interval(rng, -8, 8, true);
    int lo_changes = 0, hi_changes = 0;
    for (int k = 0; k < 20; ++k) {
      auto y = widen(x, random_interval(rng, -100, 100, false));
      if (!x.is_bottom() && !y.is_bottom()) {
        lo_changes += !(x.lo() == y.lo());
        hi_changes += !(x.hi() == y.hi());
      }
      x = y;
    }
    if (lo_changes > 1 || hi_changes > 1)
      r.fail("chain ending in " + to_string(x) + " changed a bound twice");
  }
  return r;
}

inline PropertyResult arithmetic_sound(std::uint64_t seed, std::size_t cases) {
  using namespace absint;
  Rng rng(seed);
  PropertyResult r;
  for (; r.cases < cases; ++r.cases) {
    auto a = random_interval(rng, -8, 8, false);
    auto b = random_interval(rng, -8, 8, false);
    auto op = static_cast<ArithOp>(uniform(rng, 0, 3));
    auto res = arith(op, a, b);
    std::string what = to_string(a) + " " + symbol(op) + " " + to_string(b) + " = " + to_string(res);
    if (a.is_bottom() || b.is_bottom()) {
      if (!res.is_bottom()) r.fail(what);
      continue;
    }
    bool any = false;
    for (long long x = finite(a.lo()); x <= finite(a.hi()); ++x)
      for (long long y = finite(b.lo()); y <= finite(b.hi()); ++y)
        if (auto v = concrete_arith(op, x, y)) {
          any = true;
          if (!res.contains(*v)) {
            r.fail(what + " misses " + std::to_string(*v));
            goto next;
          }
        }
    if (!any && !res.is_bottom()) r.fail(what + " should be bottom");
  next:;
  }
  return r;
}

// Every store of s that satisfies the guard survives filtering.
inline PropertyResult filter_sound(std::uint64_t seed, std::size_t cases) {
  using namespace absint;
  Rng rng(seed);
  auto u = std::make_shared<const Universe>(Universe{"x", "y"});
  GenOptions opt;
  opt.vars = {"x", "y"};
  opt.lit_lo = -9;
  opt.lit_hi = 9;
  opt.reads = false;
  opt.division = false;
  PropertyResult r;
  for (; r.cases < cases; ++r.cases) {
    auto s = AbstractState::from(
        u, {random_interval(rng, -8, 8, false), random_interval(rng, -8, 8, false)});
    auto g = random_guard(rng, opt, 2);
    auto f = filter(s, *g);
    std::string what = render(*g) + " on " + to_string(s) + " gave " + to_string(f);
    if (!state_leq(f, s)) {
      r.fail(what + ", not below the input");
      continue;
    }
    if (s.is_bottom()) continue;
    long long x = 0, y = 0;
    std::function<long long(const Expr&)> ev = [&](const Expr& e) -> long long {
      if (auto* l = std::get_if<Expr::Lit>(&e.node)) return l->value.convert_to<long long>();
      if (auto* v = std::get_if<Expr::Var>(&e.node)) return v->name == "x" ? x : y;
      auto& b = std::get<Expr::Binary>(e.node);
      return *concrete_arith(b.op, ev(*b.lhs), ev(*b.rhs));
    };
    std::function<bool(const BoolExpr&)> holds = [&](const BoolExpr& b) -> bool {
      return std::visit(
          [&](const auto& z) -> bool {
            using T = std::decay_t<decltype(z)>;
            if constexpr (std::is_same_v<T, BoolExpr::Cmp>)
              return concrete_cmp(z.op, ev(*z.lhs), ev(*z.rhs));
            else if constexpr (std::is_same_v<T, BoolExpr::And>)
              return holds(*z.lhs) && holds(*z.rhs);
            else if constexpr (std::is_same_v<T, BoolExpr::Or>)
              return holds(*z.lhs) || holds(*z.rhs);
            else if constexpr (std::is_same_v<T, BoolExpr::Not>)
              return !holds(*z.operand);
            else
              return z.value;
          },
          b.node);
    };
    bool dropped = false;
    for (x = finite(s[0].lo()); x <= finite(s[0].hi()) && !dropped; ++x)
      for (y = finite(s[1].lo()); y <= finite(s[1].hi()) && !dropped; ++y)
        if (holds(*g) && (!f[0].contains(x) || !f[1].contains(y))) {
          r.fail(what + ", dropping x=" + std::to_string(x) + " y=" + std::to_string(y));
          dropped = true;
        }
  }
  return r;
}

}  // namespace testing_support
