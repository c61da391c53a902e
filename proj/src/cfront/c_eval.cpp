#include "absint/cfront/c_subset.hpp"

#include <limits>
#include <unordered_map>

namespace absint {

namespace {

class Evaluator {
 public:
  Evaluator(const CTranslation& t, InputSource& in, std::size_t cap) : in_(in), cap_(cap) {
    const auto& vars = t.program.variables();
    for (std::size_t i = 0; i < vars.size(); ++i) slot_[vars[i]] = i;
    for (const auto& [s, k] : t.assign_ordinals) ordinal_[s] = k;
    store_.resize(vars.size());
    for (auto& v : store_) v = in_.next();
  }

  CRunResult run(const std::vector<CStmtPtr>& body) {
    block(body);
    return std::move(res_);
  }

 private:
  bool fail(RunEnd e) {
    res_.end = e;
    return false;
  }

  bool value(const CExpr& e, Value& out) {
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, CExpr::Lit>) {
            return literal(x.value, out);
          } else if constexpr (std::is_same_v<T, CExpr::Var>) {
            out = store_[slot_.at(x.name)];
            return true;
          } else if constexpr (std::is_same_v<T, CExpr::Nondet>) {
            out = in_.next();
            return true;
          } else if constexpr (std::is_same_v<T, CExpr::Unary>) {
            if (const auto* l = std::get_if<CExpr::Lit>(&x.operand->node)) return literal(-l->value, out);
            Value v = 0;
            if (!value(*x.operand, v)) return false;
            if (__builtin_sub_overflow(Value{0}, v, &out)) return fail(RunEnd::overflow);
            return true;
          } else {
            Value a = 0, b = 0;
            if (!value(*x.lhs, a) || !value(*x.rhs, b)) return false;
            bool over = false;
            switch (x.op[0]) {
              case '+': over = __builtin_add_overflow(a, b, &out); break;
              case '-': over = __builtin_sub_overflow(a, b, &out); break;
              case '*': over = __builtin_mul_overflow(a, b, &out); break;
              default:
                if (b == 0) return fail(RunEnd::blocked);
                if (a == std::numeric_limits<Value>::min() && b == -1) return fail(RunEnd::overflow);
                out = a / b;
            }
            return over ? fail(RunEnd::overflow) : true;
          }
        },
        e.node);
  }

  static bool literal(const Integer& v, Value& out) {
    if (v > std::numeric_limits<Value>::max() || v < std::numeric_limits<Value>::min())
      throw ConcreteUnsupported("literal " + v.str() + " exceeds 64 bits");
    out = static_cast<Value>(v);
    return true;
  }

  bool truth(const CExpr& e, bool& out) {
    if (const auto* u = std::get_if<CExpr::Unary>(&e.node); u && u->op == '!') {
      if (!truth(*u->operand, out)) return false;
      out = !out;
      return true;
    }
    if (const auto* b = std::get_if<CExpr::Binary>(&e.node)) {
      if (b->op == "&&" || b->op == "||") {
        if (!truth(*b->lhs, out)) return false;
        if (out == (b->op == "||")) return true;
        return truth(*b->rhs, out);
      }
      if (b->op.size() > 1 || b->op[0] == '<' || b->op[0] == '>') {
        Value x = 0, y = 0;
        if (!value(*b->lhs, x) || !value(*b->rhs, y)) return false;
        if (b->op == "<") out = x < y;
        else if (b->op == "<=") out = x <= y;
        else if (b->op == ">") out = x > y;
        else if (b->op == ">=") out = x >= y;
        else if (b->op == "==") out = x == y;
        else out = x != y;
        return true;
      }
    }
    Value v = 0;
    if (!value(e, v)) return false;
    out = v != 0;
    return true;
  }

  bool tick() {
    if (++res_.loop_iterations >= cap_) return fail(RunEnd::iteration_cap);
    return true;
  }

  bool block(const std::vector<CStmtPtr>& ss) {
    for (const auto& s : ss)
      if (!stmt(*s)) return false;
    return true;
  }

  bool stmt(const CStmt& s) {
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, CStmt::Assign>) {
            Value v = 0;
            if (!value(*x.rhs, v)) return false;
            store_[slot_.at(x.target)] = v;
            res_.assignments.emplace_back(ordinal_.at(&s), store_);
            return true;
          } else if constexpr (std::is_same_v<T, CStmt::If>) {
            bool c = false;
            if (!truth(*x.cond, c)) return false;
            return block(c ? x.then_branch : x.else_branch);
          } else if constexpr (std::is_same_v<T, CStmt::While>) {
            for (;;) {
              bool c = false;
              if (!truth(*x.cond, c)) return false;
              if (!c) return true;
              if (!block(x.body) || !tick()) return false;
            }
          } else if constexpr (std::is_same_v<T, CStmt::For>) {
            if (!block(x.init)) return false;
            for (;;) {
              bool c = true;
              if (x.cond && !truth(*x.cond, c)) return false;
              if (!c) return true;
              if (!block(x.body) || !block(x.step) || !tick()) return false;
            }
          } else {
            return true;
          }
        },
        s.node);
  }

  InputSource& in_;
  std::size_t cap_;
  std::unordered_map<std::string, std::size_t> slot_;
  std::unordered_map<const CStmt*, std::size_t> ordinal_;
  Store store_;
  CRunResult res_;
};

}  // namespace

CRunResult run_c(const CProgram& c, const CTranslation& t, InputSource& in,
                 std::size_t max_loop_iterations) {
  return Evaluator(t, in, max_loop_iterations).run(c.body);
}

}  // namespace absint
