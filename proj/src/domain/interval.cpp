#include "absint/domain/interval.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

namespace absint {

bool operator==(const Bound& a, const Bound& b) {
  if (a.kind_ != b.kind_) return false;
  return !a.is_finite() || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Bound& a, const Bound& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (!a.is_finite()) return std::strong_ordering::equal;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string to_string(const Bound& b) {
  if (b.is_neg_inf()) return "-inf";
  if (b.is_pos_inf()) return "inf";
  return b.value().str();
}

Interval Interval::range(Bound lo, Bound hi) {
  if (lo.is_pos_inf() || hi.is_neg_inf() || lo > hi) return bottom();
  return Interval(std::move(lo), std::move(hi));
}

bool Interval::is_top() const {
  return !bottom_ && lo_.is_neg_inf() && hi_.is_pos_inf();
}

bool Interval::contains(const Integer& v) const {
  if (bottom_) return false;
  Bound b(v);
  return lo_ <= b && b <= hi_;
}

bool operator==(const Interval& a, const Interval& b) {
  if (a.bottom_ || b.bottom_) return a.bottom_ == b.bottom_;
  return a.lo_ == b.lo_ && a.hi_ == b.hi_;
}

std::string to_string(const Interval& i, RenderStyle style) {
  if (i.is_bottom()) return style.unicode ? "⊥" : "bot";
  auto bound = [&](const Bound& b) {
    if (!style.unicode || b.is_finite()) return to_string(b);
    return std::string(b.is_neg_inf() ? "-∞" : "∞");
  };
  return "[" + bound(i.lo()) + ", " + bound(i.hi()) + "]";
}

bool leq(const Interval& a, const Interval& b) {
  if (a.is_bottom()) return true;
  if (b.is_bottom()) return false;
  return b.lo() <= a.lo() && a.hi() <= b.hi();
}

Interval join(const Interval& a, const Interval& b) {
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  return Interval::range(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval meet(const Interval& a, const Interval& b) {
  if (a.is_bottom() || b.is_bottom()) return Interval::bottom();
  return Interval::range(std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

Interval widen(const Interval& a, const Interval& b) {
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  Bound lo = b.lo() < a.lo() ? Bound::neg_inf() : a.lo();
  Bound hi = b.hi() > a.hi() ? Bound::pos_inf() : a.hi();
  return Interval::range(lo, hi);
}

namespace {

int sign(const Bound& b) {
  if (b.is_neg_inf()) return -1;
  if (b.is_pos_inf()) return 1;
  return b.value().sign();
}

Bound inf_with_sign(int s) { return s < 0 ? Bound::neg_inf() : Bound::pos_inf(); }

Bound add(const Bound& a, const Bound& b) {
  // callers never pair opposite infinities
  assert(!(a.is_neg_inf() && b.is_pos_inf()) &&
         !(a.is_pos_inf() && b.is_neg_inf()));
  if (!a.is_finite()) return a;
  if (!b.is_finite()) return b;
  return Bound(a.value() + b.value());
}

Bound negate(const Bound& b) {
  if (b.is_neg_inf()) return Bound::pos_inf();
  if (b.is_pos_inf()) return Bound::neg_inf();
  return Bound(Integer(-b.value()));
}

Bound mul(const Bound& a, const Bound& b) {
  if (a.is_finite() && b.is_finite()) return Bound(a.value() * b.value());
  int s = sign(a) * sign(b);
  if (s == 0) return Bound(0);  // 0 * inf = 0
  return inf_with_sign(s);
}

// Candidate quotients for one corner; the divisor is never 0. An
// infinite/infinite corner can approach either 0 or an infinity, so both are
// returned.
void div_candidates(const Bound& a, const Bound& b, std::vector<Bound>& out) {
  if (a.is_finite() && b.is_finite()) {
    out.emplace_back(Integer(a.value() / b.value()));  // truncates toward 0
  } else if (a.is_finite()) {
    out.emplace_back(0);
  } else if (b.is_finite()) {
    out.push_back(inf_with_sign(sign(a) * sign(b)));
  } else {
    out.emplace_back(0);
    out.push_back(inf_with_sign(sign(a) * sign(b)));
  }
}

}  // namespace

Interval arith(ArithOp op, const Interval& a, const Interval& b) {
  if (a.is_bottom() || b.is_bottom()) return Interval::bottom();
  switch (op) {
    case ArithOp::add:
      return Interval::range(add(a.lo(), b.lo()), add(a.hi(), b.hi()));
    case ArithOp::sub:
      return Interval::range(add(a.lo(), negate(b.hi())),
                             add(a.hi(), negate(b.lo())));
    case ArithOp::mul: {
      Bound c[] = {mul(a.lo(), b.lo()), mul(a.lo(), b.hi()),
                   mul(a.hi(), b.lo()), mul(a.hi(), b.hi())};
      return Interval::range(*std::min_element(std::begin(c), std::end(c)),
                             *std::max_element(std::begin(c), std::end(c)));
    }
    case ArithOp::div: {
      Bound lo = b.lo(), hi = b.hi();
      Bound zero(0);
      if (lo == zero && hi == zero) return Interval::bottom();
      if (lo < zero && zero < hi) return Interval::top();
      if (lo == zero) lo = Bound(1);
      if (hi == zero) hi = Bound(-1);
      std::vector<Bound> c;
      for (const Bound* x : {&a.lo(), &a.hi()})
        for (const Bound* y : {&lo, &hi}) div_candidates(*x, *y, c);
      return Interval::range(*std::min_element(c.begin(), c.end()),
                             *std::max_element(c.begin(), c.end()));
    }
  }
  return Interval::top();
}

}  // namespace absint
