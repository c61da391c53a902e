#include "absint/audit/concrete.hpp"

#include <algorithm>
#include <limits>

namespace absint {

bool contains(const AbstractState& s, const Store& store) {
  if (s.is_bottom()) return false;
  for (std::size_t i = 0; i < store.size(); ++i)
    if (!s[i].contains(Integer(store[i]))) return false;
  return true;
}

const char* to_string(RunEnd e) {
  switch (e) {
    case RunEnd::finished: return "finished";
    case RunEnd::blocked: return "blocked";
    case RunEnd::overflow: return "overflow";
    case RunEnd::iteration_cap: return "iteration_cap";
    case RunEnd::cycle: return "cycle";
  }
  return "?";
}

namespace {

Value to_value(const Integer& v) {
  if (v > std::numeric_limits<Value>::max() || v < std::numeric_limits<Value>::min())
    throw ConcreteUnsupported("literal " + v.str() + " does not fit in 64 bits");
  return static_cast<Value>(v);
}

void collect_literals(const Expr& e, std::vector<Value>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Lit>) {
          out.push_back(to_value(x.value));
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_literals(*x.lhs, out);
          collect_literals(*x.rhs, out);
        }
      },
      e.node);
}

void collect_literals(const BoolExpr& b, std::vector<Value>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          collect_literals(*x.lhs, out);
          collect_literals(*x.rhs, out);
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          collect_literals(*x.operand, out);
        } else if constexpr (!std::is_same_v<T, BoolExpr::Const>) {
          collect_literals(*x.lhs, out);
          collect_literals(*x.rhs, out);
        }
      },
      b.node);
}

void collect_literals(const Cmd& c, std::vector<Value>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cmd::Assign>) {
          collect_literals(*x.rhs, out);
        } else if constexpr (std::is_same_v<T, Cmd::Seq>) {
          collect_literals(*x.first, out);
          collect_literals(*x.second, out);
        } else if constexpr (std::is_same_v<T, Cmd::If>) {
          collect_literals(*x.guard, out);
          collect_literals(*x.then_branch, out);
          collect_literals(*x.else_branch, out);
        } else if constexpr (std::is_same_v<T, Cmd::While>) {
          collect_literals(*x.guard, out);
          collect_literals(*x.body, out);
        }
      },
      c.node);
}

std::int32_t var_index(const Universe& u, const std::string& name) {
  auto it = std::lower_bound(u.begin(), u.end(), name);
  if (it == u.end() || *it != name) throw UnknownVariable(name);
  return static_cast<std::int32_t>(it - u.begin());
}

}  // namespace

ConcreteProgram::ConcreteProgram(const AnnotatedProgram& p)
    : vars_(p.variables().size()), locations_(p.location_count()), universe_(&p.variables()) {
  collect_literals(*p.root(), constants_);
  std::size_t n = constants_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (constants_[i] != std::numeric_limits<Value>::min()) constants_.push_back(-constants_[i]);
  constants_.push_back(0);
  std::sort(constants_.begin(), constants_.end());
  constants_.erase(std::unique(constants_.begin(), constants_.end()), constants_.end());

  emit(IOp::record, 0);
  stmt(p, p.root());
  emit(IOp::halt);
  universe_ = nullptr;
}

void ConcreteProgram::emit(IOp op, std::int32_t a, std::int32_t b) { code_.push_back({op, a, b}); }

std::int32_t ConcreteProgram::expr(const absint::Expr& e) {
  Expr node{};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, absint::Expr::Lit>) {
          node = {Op::lit, -1, -1, to_value(x.value)};
        } else if constexpr (std::is_same_v<T, absint::Expr::Var>) {
          node = {Op::var, var_index(*universe_, x.name)};
        } else if constexpr (std::is_same_v<T, absint::Expr::Read>) {
          node = {Op::read};
        } else {
          std::int32_t a = expr(*x.lhs);
          std::int32_t b = expr(*x.rhs);
          static constexpr Op ops[] = {Op::add, Op::sub, Op::mul, Op::div};
          node = {ops[static_cast<int>(x.op)], a, b};
        }
      },
      e.node);
  exprs_.push_back(node);
  return static_cast<std::int32_t>(exprs_.size() - 1);
}

std::int32_t ConcreteProgram::guard(const BoolExpr& g) {
  Bool node{};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          std::int32_t a = expr(*x.lhs);
          std::int32_t b = expr(*x.rhs);
          static constexpr BOp ops[] = {BOp::lt, BOp::le, BOp::eq, BOp::gt, BOp::ge};
          node = {ops[static_cast<int>(x.op)], a, b};
        } else if constexpr (std::is_same_v<T, BoolExpr::And>) {
          std::int32_t a = guard(*x.lhs);
          node = {BOp::and_, a, guard(*x.rhs)};
        } else if constexpr (std::is_same_v<T, BoolExpr::Or>) {
          std::int32_t a = guard(*x.lhs);
          node = {BOp::or_, a, guard(*x.rhs)};
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          node = {BOp::not_, guard(*x.operand)};
        } else {
          node = {BOp::const_, -1, -1, x.value};
        }
      },
      g.node);
  bools_.push_back(node);
  return static_cast<std::int32_t>(bools_.size() - 1);
}

void ConcreteProgram::stmt(const AnnotatedProgram& p, const CmdPtr& c) {
  auto loc = [](Location l) { return static_cast<std::int32_t>(l.index); };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cmd::Seq>) {
          stmt(p, x.first);
          stmt(p, x.second);
        } else if constexpr (std::is_same_v<T, Cmd::Skip>) {
          emit(IOp::record, loc(p.placement(*c).after));
        } else if constexpr (std::is_same_v<T, Cmd::Assign>) {
          emit(IOp::assign, var_index(*universe_, x.target), expr(*x.rhs));
          emit(IOp::record, loc(p.placement(*c).after));
        } else if constexpr (std::is_same_v<T, Cmd::If>) {
          const auto& pl = p.placement(*c);
          auto br = code_.size();
          emit(IOp::branch_false, guard(*x.guard));
          emit(IOp::record, loc(pl.then_entry));
          stmt(p, x.then_branch);
          auto jmp = code_.size();
          emit(IOp::jump);
          code_[br].b = static_cast<std::int32_t>(code_.size());
          emit(IOp::record, loc(pl.else_entry));
          stmt(p, x.else_branch);
          code_[jmp].b = static_cast<std::int32_t>(code_.size());
          emit(IOp::record, loc(pl.after));
        } else {
          const auto& pl = p.placement(*c);
          auto top = static_cast<std::int32_t>(code_.size());
          emit(IOp::branch_false, guard(*x.guard));
          emit(IOp::record, loc(pl.head));
          stmt(p, x.body);
          emit(IOp::tick);
          emit(IOp::jump, -1, top);
          code_[top].b = static_cast<std::int32_t>(code_.size());
          emit(IOp::record, loc(pl.after));
        }
      },
      c->node);
}

// ---- inputs

SampledInputs::SampledInputs(std::uint64_t seed, const std::vector<Value>& constants)
    : rng_(seed), constants_(&constants) {}

Value SampledInputs::next() {
  static constexpr Value kBoundary[] = {
      (Value{1} << 31) - 2, (Value{1} << 31) - 1, Value{1} << 31,
      -(Value{1} << 31) - 1, -(Value{1} << 31), -(Value{1} << 31) + 1};
  std::uint64_t r = rng_();
  switch (r & 3) {
    case 0:
    case 1:
      return static_cast<Value>((r >> 2) % 33) - 16;
    case 2: {
      const auto& cs = *constants_;
      Value c = cs[(r >> 2) % cs.size()];
      Value d = static_cast<Value>((r >> 40) % 3) - 1;
      Value out;
      if (__builtin_add_overflow(c, d, &out)) return c;
      return out;
    }
    default:
      return kBoundary[(r >> 2) % 6];
  }
}

// ---- execution

namespace {

class Machine {
 public:
  Machine(const ConcreteProgram& p, InputSource& in, RunResult& res, bool keep)
      : p_(p), in_(in), res_(res), keep_(keep), store_(p.variables()) {}

  Value input() {
    Value v = in_.next();
    ++res_.consumed;
    if (keep_) res_.inputs.push_back(v);
    return v;
  }

  Store& store() { return store_; }

  // false on overflow / division by zero (reported through end_)
  bool eval(std::int32_t n, Value& out) {
    const auto& e = p_.exprs()[n];
    using Op = ConcreteProgram::Op;
    switch (e.op) {
      case Op::lit: out = e.value; return true;
      case Op::var: out = store_[e.a]; return true;
      case Op::read: out = input(); return true;
      default: break;
    }
    Value a = 0, b = 0;
    if (!eval(e.a, a) || !eval(e.b, b)) return false;
    switch (e.op) {
      case Op::add:
        if (__builtin_add_overflow(a, b, &out)) return fail(RunEnd::overflow);
        return true;
      case Op::sub:
        if (__builtin_sub_overflow(a, b, &out)) return fail(RunEnd::overflow);
        return true;
      case Op::mul:
        if (__builtin_mul_overflow(a, b, &out)) return fail(RunEnd::overflow);
        return true;
      case Op::div:
        if (b == 0) return fail(RunEnd::blocked);
        if (a == std::numeric_limits<Value>::min() && b == -1) return fail(RunEnd::overflow);
        out = a / b;  // truncates toward zero, as the interval domain does
        return true;
      default:
        return true;
    }
  }

  bool test(std::int32_t n, bool& out) {
    const auto& g = p_.bools()[n];
    using B = ConcreteProgram::BOp;
    switch (g.op) {
      case B::const_: out = g.value; return true;
      case B::not_:
        if (!test(g.a, out)) return false;
        out = !out;
        return true;
      case B::and_:
        if (!test(g.a, out)) return false;
        return !out || test(g.b, out);
      case B::or_:
        if (!test(g.a, out)) return false;
        return out || test(g.b, out);
      default: break;
    }
    Value a = 0, b = 0;
    if (!eval(g.a, a) || !eval(g.b, b)) return false;
    switch (g.op) {
      case B::lt: out = a < b; break;
      case B::le: out = a <= b; break;
      case B::eq: out = a == b; break;
      case B::gt: out = a > b; break;
      case B::ge: out = a >= b; break;
      default: break;
    }
    return true;
  }

  RunEnd end() const { return end_; }

 private:
  bool fail(RunEnd e) {
    end_ = e;
    return false;
  }

  const ConcreteProgram& p_;
  InputSource& in_;
  RunResult& res_;
  bool keep_;
  Store store_;
  RunEnd end_ = RunEnd::finished;
};

}  // namespace

namespace detail {

RunResult execute_impl(const ConcreteProgram& p, InputSource& in, RunOptions opt,
                       void (*cb)(void*, std::size_t, const Store&), void* ctx) {
  RunResult res;
  Machine m(p, in, res, opt.keep_inputs);
  Store& s = m.store();
  for (auto& v : s) v = m.input();
  // Brent-style cycle check: remember the state at power-of-two iteration
  // counts and stop when it recurs with no input consumed in between.
  std::int32_t snap_pc = -1;
  std::size_t snap_inputs = 0;
  Store snap;
  const auto& code = p.code();
  using I = ConcreteProgram::IOp;
  std::int32_t pc = 0;
  for (;;) {
    const auto& ins = code[pc];
    switch (ins.op) {
      case I::record:
        cb(ctx, static_cast<std::size_t>(ins.a), s);
        ++pc;
        break;
      case I::assign: {
        Value v = 0;
        if (!m.eval(ins.b, v)) {
          res.end = m.end();
          return res;
        }
        s[ins.a] = v;
        ++pc;
        break;
      }
      case I::branch_false: {
        bool b = false;
        if (!m.test(ins.a, b)) {
          res.end = m.end();
          return res;
        }
        pc = b ? pc + 1 : ins.b;
        break;
      }
      case I::jump:
        pc = ins.b;
        break;
      case I::tick: {
        std::size_t n = ++res.loop_iterations;
        if (n >= opt.max_loop_iterations) {
          res.end = RunEnd::iteration_cap;
          return res;
        }
        if (pc == snap_pc && res.consumed == snap_inputs && s == snap) {
          res.end = RunEnd::cycle;
          return res;
        }
        if ((n & (n - 1)) == 0) {
          snap_pc = pc;
          snap_inputs = res.consumed;
          snap = s;
        }
        ++pc;
        break;
      }
      case I::halt:
        return res;
    }
  }
}

}  // namespace detail

}  // namespace absint
