#pragma once

#include "absint/imp/ast.hpp"

#include <compare>
#include <string>

namespace absint {

class Bound {
 public:
  enum class Kind : unsigned char { neg_inf, finite, pos_inf };

  Bound() = default;  // 0
  Bound(Integer v) : kind_(Kind::finite), value_(std::move(v)) {}  // NOLINT
  Bound(long long v) : Bound(Integer(v)) {}                        // NOLINT

  static Bound neg_inf() { return Bound(Kind::neg_inf); }
  static Bound pos_inf() { return Bound(Kind::pos_inf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }
  bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  // Only meaningful for finite bounds.
  const Integer& value() const { return value_; }

  friend bool operator==(const Bound& a, const Bound& b);
  friend std::strong_ordering operator<=>(const Bound& a, const Bound& b);

 private:
  explicit Bound(Kind k) : kind_(k) {}

  Kind kind_ = Kind::finite;
  Integer value_;
};

// "-inf", "inf" or the decimal value
std::string to_string(const Bound& b);

class Interval {
 public:
  // bottom
  Interval() = default;

  static Interval bottom() { return Interval(); }
  static Interval top() { return Interval(Bound::neg_inf(), Bound::pos_inf()); }
  static Interval constant(Integer v) { return Interval(v, v); }
  // [lo, hi]; bottom when lo > hi or the range has no integer in it.
  static Interval range(Bound lo, Bound hi);

  bool is_bottom() const { return bottom_; }
  bool is_top() const;
  const Bound& lo() const { return lo_; }
  const Bound& hi() const { return hi_; }
  bool contains(const Integer& v) const;

  friend bool operator==(const Interval& a, const Interval& b);

 private:
  Interval(Bound lo, Bound hi)
      : bottom_(false), lo_(std::move(lo)), hi_(std::move(hi)) {}

  bool bottom_ = true;
  Bound lo_;
  Bound hi_;
};

struct RenderStyle {
  bool unicode = false;  // "⊥" / "∞" instead of "bot" / "inf"
};

// "[lo, hi]" or "bot"
std::string to_string(const Interval& i, RenderStyle style = {});

bool leq(const Interval& a, const Interval& b);
Interval join(const Interval& a, const Interval& b);
Interval meet(const Interval& a, const Interval& b);
// [a,b] nabla [c,d] = [c < a ? -inf : a, d > b ? inf : b]
Interval widen(const Interval& a, const Interval& b);
Interval arith(ArithOp op, const Interval& a, const Interval& b);

}  // namespace absint
