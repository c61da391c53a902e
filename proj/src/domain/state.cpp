#include "absint/domain/state.hpp"

namespace absint {

AbstractState AbstractState::top(UniversePtr u) {
  std::vector<Interval> v(u->size(), Interval::top());
  return from(std::move(u), std::move(v));
}

AbstractState AbstractState::bottom(UniversePtr u) {
  AbstractState s;
  s.values_.assign(u->size(), Interval::bottom());
  s.universe_ = std::move(u);
  s.bottom_ = true;
  return s;
}

AbstractState AbstractState::from(UniversePtr u, std::vector<Interval> values) {
  if (values.size() != u->size()) throw UniverseMismatch();
  AbstractState s;
  s.universe_ = std::move(u);
  s.values_ = std::move(values);
  s.normalize();
  return s;
}

void AbstractState::normalize() {
  for (const auto& v : values_) {
    if (v.is_bottom()) {
      bottom_ = true;
      break;
    }
  }
  if (bottom_)
    for (auto& v : values_) v = Interval::bottom();
}

std::optional<std::size_t> AbstractState::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < universe_->size(); ++i)
    if ((*universe_)[i] == name) return i;
  return std::nullopt;
}

const Interval& AbstractState::get(std::string_view name) const {
  auto i = index_of(name);
  if (!i) throw UnknownVariable(std::string(name));
  return values_[*i];
}

AbstractState AbstractState::with(std::size_t i, Interval v) const {
  if (bottom_) return *this;
  AbstractState s = *this;
  s.values_[i] = std::move(v);
  s.normalize();
  return s;
}

AbstractState AbstractState::with(std::string_view name, Interval v) const {
  auto i = index_of(name);
  if (!i) throw UnknownVariable(std::string(name));
  return with(*i, std::move(v));
}

bool operator==(const AbstractState& a, const AbstractState& b) {
  if (a.universe_ != b.universe_ &&
      (!a.universe_ || !b.universe_ || *a.universe_ != *b.universe_))
    return false;
  return a.bottom_ == b.bottom_ && a.values_ == b.values_;
}

std::string to_string(const AbstractState& s, RenderStyle style) {
  // with no variables "{}" would not tell bottom from top
  if (s.size() == 0 && s.is_bottom()) return style.unicode ? "⊥" : "bot";
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += (*s.universe())[i] + " : " + to_string(s[i], style);
  }
  return out + "}";
}

namespace {

void check_same(const AbstractState& a, const AbstractState& b) {
  if (a.universe() != b.universe() && *a.universe() != *b.universe())
    throw UniverseMismatch();
}

template <class F>
AbstractState pointwise(const AbstractState& a, const AbstractState& b, F f) {
  check_same(a, b);
  std::vector<Interval> v;
  v.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v.push_back(f(a[i], b[i]));
  return AbstractState::from(a.universe(), std::move(v));
}

}  // namespace

bool state_leq(const AbstractState& a, const AbstractState& b) {
  check_same(a, b);
  if (a.is_bottom()) return true;
  if (b.is_bottom()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!leq(a[i], b[i])) return false;
  return true;
}

AbstractState state_join(const AbstractState& a, const AbstractState& b) {
  check_same(a, b);
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  return pointwise(a, b, [](const Interval& x, const Interval& y) { return join(x, y); });
}

AbstractState state_meet(const AbstractState& a, const AbstractState& b) {
  check_same(a, b);
  if (a.is_bottom()) return a;
  if (b.is_bottom()) return b;
  return pointwise(a, b, [](const Interval& x, const Interval& y) { return meet(x, y); });
}

AbstractState state_widen(const AbstractState& a, const AbstractState& b) {
  check_same(a, b);
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  return pointwise(a, b, [](const Interval& x, const Interval& y) { return widen(x, y); });
}

Interval eval_expr(const AbstractState& s, const Expr& e) {
  return std::visit(
      [&](const auto& x) -> Interval {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          const Interval& v = s.get(x.name);  // unknown names throw first
          return v;
        } else if (s.is_bottom()) {
          return Interval::bottom();
        } else if constexpr (std::is_same_v<T, Expr::Lit>) {
          return Interval::constant(x.value);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return arith(x.op, eval_expr(s, *x.lhs), eval_expr(s, *x.rhs));
        } else {
          return Interval::top();
        }
      },
      e.node);
}

namespace {

CmpOp negated(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return CmpOp::ge;
    case CmpOp::le: return CmpOp::gt;
    case CmpOp::gt: return CmpOp::le;
    case CmpOp::ge: return CmpOp::lt;
    case CmpOp::eq: return CmpOp::eq;  // handled by callers
  }
  return op;
}

Bound plus(const Bound& b, int d) {
  if (!b.is_finite()) return b;
  return Bound(Integer(b.value() + d));
}

bool satisfiable(CmpOp op, const Interval& l, const Interval& r) {
  switch (op) {
    case CmpOp::lt: return l.lo() < r.hi();
    case CmpOp::le: return l.lo() <= r.hi();
    case CmpOp::eq: return !meet(l, r).is_bottom();
    case CmpOp::gt: return l.hi() > r.lo();
    case CmpOp::ge: return l.hi() >= r.lo();
  }
  return true;
}

// Values x may take so that `x op other` can hold.
Interval constraint(CmpOp op, const Interval& other) {
  switch (op) {
    case CmpOp::lt: return Interval::range(Bound::neg_inf(), plus(other.hi(), -1));
    case CmpOp::le: return Interval::range(Bound::neg_inf(), other.hi());
    case CmpOp::eq: return other;
    case CmpOp::gt: return Interval::range(plus(other.lo(), 1), Bound::pos_inf());
    case CmpOp::ge: return Interval::range(other.lo(), Bound::pos_inf());
  }
  return Interval::top();
}

AbstractState filter_cmp(const AbstractState& s, const BoolExpr::Cmp& c) {
  if (contains_read(*c.lhs) || contains_read(*c.rhs)) return s;
  Interval l = eval_expr(s, *c.lhs);
  Interval r = eval_expr(s, *c.rhs);
  if (l.is_bottom() || r.is_bottom() || !satisfiable(c.op, l, r))
    return AbstractState::bottom(s.universe());
  // Only one side is refined: the left operand when it is a variable,
  // otherwise the right one.
  if (const auto* v = std::get_if<Expr::Var>(&c.lhs->node))
    return s.with(v->name, meet(l, constraint(c.op, r)));
  if (const auto* v = std::get_if<Expr::Var>(&c.rhs->node))
    return s.with(v->name, meet(r, constraint(flip(c.op), l)));
  return s;
}

}  // namespace

BoolPtr negate_guard(const BoolPtr& b) {
  return std::visit(
      [&](const auto& x) -> BoolPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          if (x.op == CmpOp::eq) return negate(b);
          return cmp(negated(x.op), x.lhs, x.rhs);
        } else if constexpr (std::is_same_v<T, BoolExpr::And>) {
          return disj(negate_guard(x.lhs), negate_guard(x.rhs));
        } else if constexpr (std::is_same_v<T, BoolExpr::Or>) {
          return conj(negate_guard(x.lhs), negate_guard(x.rhs));
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          return x.operand;
        } else {
          return bool_const(!x.value);
        }
      },
      b->node);
}

AbstractState filter(const AbstractState& s, const BoolExpr& b) {
  if (s.is_bottom()) return s;
  return std::visit(
      [&](const auto& x) -> AbstractState {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          return filter_cmp(s, x);
        } else if constexpr (std::is_same_v<T, BoolExpr::And>) {
          return state_meet(filter(s, *x.lhs), filter(s, *x.rhs));
        } else if constexpr (std::is_same_v<T, BoolExpr::Or>) {
          return state_join(filter(s, *x.lhs), filter(s, *x.rhs));
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          const auto* c = std::get_if<BoolExpr::Cmp>(&x.operand->node);
          if (c && c->op == CmpOp::eq) {
            // !(a == b) is (a < b) || (a > b)
            return state_join(filter_cmp(s, {CmpOp::lt, c->lhs, c->rhs}),
                              filter_cmp(s, {CmpOp::gt, c->lhs, c->rhs}));
          }
          return filter(s, *negate_guard(x.operand));
        } else {
          return x.value ? s : AbstractState::bottom(s.universe());
        }
      },
      b.node);
}

AbstractState interpret_atom(const AbstractState& s, const Cmd& c) {
  if (const auto* a = std::get_if<Cmd::Assign>(&c.node)) {
    auto i = s.index_of(a->target);
    if (!i) throw UnknownVariable(a->target);
    Interval v = eval_expr(s, *a->rhs);
    return s.with(*i, std::move(v));
  }
  if (std::holds_alternative<Cmd::Skip>(c.node)) return s;
  throw std::invalid_argument("not an atomic statement");
}

}  // namespace absint
