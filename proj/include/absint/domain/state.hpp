#pragma once

#include "absint/domain/interval.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace absint {

class UnknownVariable : public std::runtime_error {
 public:
  explicit UnknownVariable(const std::string& name)
      : std::runtime_error("unknown variable '" + name + "'") {}
};

class UniverseMismatch : public std::runtime_error {
 public:
  UniverseMismatch() : std::runtime_error("abstract states over different variables") {}
};

// Total map from the universe to intervals. If any variable is bottom, every
// variable is (the state is bottom).
class AbstractState {
 public:
  AbstractState() = default;
  static AbstractState top(UniversePtr u);
  static AbstractState bottom(UniversePtr u);
  // Values in universe order; normalized.
  static AbstractState from(UniversePtr u, std::vector<Interval> values);

  const UniversePtr& universe() const { return universe_; }
  std::size_t size() const { return values_.size(); }
  bool is_bottom() const { return bottom_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  const Interval& operator[](std::size_t i) const { return values_[i]; }
  // Throws UnknownVariable.
  const Interval& get(std::string_view name) const;

  AbstractState with(std::size_t i, Interval v) const;
  AbstractState with(std::string_view name, Interval v) const;

  const std::vector<Interval>& values() const { return values_; }

  friend bool operator==(const AbstractState& a, const AbstractState& b);

 private:
  void normalize();

  UniversePtr universe_;
  std::vector<Interval> values_;
  bool bottom_ = false;
};

// "{x : [1, 4], y : bot}"
std::string to_string(const AbstractState& s, RenderStyle style = {});

bool state_leq(const AbstractState& a, const AbstractState& b);
AbstractState state_join(const AbstractState& a, const AbstractState& b);
AbstractState state_meet(const AbstractState& a, const AbstractState& b);
AbstractState state_widen(const AbstractState& a, const AbstractState& b);

Interval eval_expr(const AbstractState& s, const Expr& e);
AbstractState filter(const AbstractState& s, const BoolExpr& b);
// Assign or Skip.
AbstractState interpret_atom(const AbstractState& s, const Cmd& c);

// Negation pushed to the comparisons: !(a < b) is a >= b, !(a == b) stays a
// negated equality, De Morgan for && and ||, true/false swap.
BoolPtr negate_guard(const BoolPtr& b);

}  // namespace absint
