#include "absint/imp/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace absint {

const char* symbol(ArithOp op) {
  switch (op) {
    case ArithOp::add: return "+";
    case ArithOp::sub: return "-";
    case ArithOp::mul: return "*";
    case ArithOp::div: return "/";
  }
  return "?";
}

const char* symbol(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::eq: return "==";
    case CmpOp::gt: return ">";
    case CmpOp::ge: return ">=";
  }
  return "?";
}

CmpOp flip(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return CmpOp::gt;
    case CmpOp::le: return CmpOp::ge;
    case CmpOp::eq: return CmpOp::eq;
    case CmpOp::gt: return CmpOp::lt;
    case CmpOp::ge: return CmpOp::le;
  }
  return op;
}

ExprPtr lit(Integer value) {
  return std::make_shared<const Expr>(Expr{Expr::Lit{std::move(value)}});
}

ExprPtr var(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty identifier");
  return std::make_shared<const Expr>(Expr{Expr::Var{std::move(name)}});
}

ExprPtr binary(ArithOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(
      Expr{Expr::Binary{op, std::move(lhs), std::move(rhs)}});
}

ExprPtr read_expr() {
  static const ExprPtr r = std::make_shared<const Expr>(Expr{Expr::Read{}});
  return r;
}

BoolPtr cmp(CmpOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const BoolExpr>(
      BoolExpr{BoolExpr::Cmp{op, std::move(lhs), std::move(rhs)}});
}

BoolPtr conj(BoolPtr lhs, BoolPtr rhs) {
  return std::make_shared<const BoolExpr>(
      BoolExpr{BoolExpr::And{std::move(lhs), std::move(rhs)}});
}

BoolPtr disj(BoolPtr lhs, BoolPtr rhs) {
  return std::make_shared<const BoolExpr>(
      BoolExpr{BoolExpr::Or{std::move(lhs), std::move(rhs)}});
}

BoolPtr negate(BoolPtr operand) {
  return std::make_shared<const BoolExpr>(
      BoolExpr{BoolExpr::Not{std::move(operand)}});
}

BoolPtr bool_const(bool value) {
  return std::make_shared<const BoolExpr>(BoolExpr{BoolExpr::Const{value}});
}

CmdPtr skip() { return std::make_shared<const Cmd>(Cmd{Cmd::Skip{}}); }

CmdPtr assign(std::string target, ExprPtr rhs) {
  if (target.empty()) throw std::invalid_argument("empty identifier");
  return std::make_shared<const Cmd>(
      Cmd{Cmd::Assign{std::move(target), std::move(rhs)}});
}

CmdPtr if_(BoolPtr guard, CmdPtr then_branch, CmdPtr else_branch) {
  return std::make_shared<const Cmd>(Cmd{Cmd::If{
      std::move(guard), std::move(then_branch), std::move(else_branch)}});
}

CmdPtr while_(BoolPtr guard, CmdPtr body) {
  return std::make_shared<const Cmd>(
      Cmd{Cmd::While{std::move(guard), std::move(body)}});
}

CmdPtr seq(std::vector<CmdPtr> stmts) {
  if (stmts.empty()) return skip();
  CmdPtr acc = stmts.back();
  for (auto it = stmts.rbegin() + 1; it != stmts.rend(); ++it)
    acc = std::make_shared<const Cmd>(Cmd{Cmd::Seq{*it, acc}});
  return acc;
}

namespace {

template <class T>
bool same_ptr(const std::shared_ptr<const T>& a,
              const std::shared_ptr<const T>& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Expr::Lit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          return x.op == y.op && same_ptr(x.lhs, y.lhs) &&
                 same_ptr(x.rhs, y.rhs);
        } else {
          return true;
        }
      },
      a.node);
}

bool operator==(const BoolExpr& a, const BoolExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          return x.op == y.op && same_ptr(x.lhs, y.lhs) &&
                 same_ptr(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, BoolExpr::And> ||
                             std::is_same_v<T, BoolExpr::Or>) {
          return same_ptr(x.lhs, y.lhs) && same_ptr(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          return same_ptr(x.operand, y.operand);
        } else {
          return x.value == y.value;
        }
      },
      a.node);
}

bool operator==(const Cmd& a, const Cmd& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Cmd::Skip>) {
          return true;
        } else if constexpr (std::is_same_v<T, Cmd::Assign>) {
          return x.target == y.target && same_ptr(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Cmd::Seq>) {
          return same_ptr(x.first, y.first) && same_ptr(x.second, y.second);
        } else if constexpr (std::is_same_v<T, Cmd::If>) {
          return same_ptr(x.guard, y.guard) &&
                 same_ptr(x.then_branch, y.then_branch) &&
                 same_ptr(x.else_branch, y.else_branch);
        } else {
          return same_ptr(x.guard, y.guard) && same_ptr(x.body, y.body);
        }
      },
      a.node);
}

bool contains_read(const Expr& e) {
  if (std::holds_alternative<Expr::Read>(e.node)) return true;
  if (const auto* b = std::get_if<Expr::Binary>(&e.node))
    return contains_read(*b->lhs) || contains_read(*b->rhs);
  return false;
}

bool contains_read(const BoolExpr& b) {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          return contains_read(*x.lhs) || contains_read(*x.rhs);
        } else if constexpr (std::is_same_v<T, BoolExpr::And> ||
                             std::is_same_v<T, BoolExpr::Or>) {
          return contains_read(*x.lhs) || contains_read(*x.rhs);
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          return contains_read(*x.operand);
        } else {
          return false;
        }
      },
      b.node);
}

namespace {

void flatten_into(const CmdPtr& c, std::vector<CmdPtr>& out) {
  if (const auto* s = std::get_if<Cmd::Seq>(&c->node)) {
    flatten_into(s->first, out);
    flatten_into(s->second, out);
  } else {
    out.push_back(c);
  }
}

}  // namespace

std::vector<CmdPtr> flatten(const CmdPtr& c) {
  std::vector<CmdPtr> out;
  flatten_into(c, out);
  return out;
}

CmdPtr canonical(const CmdPtr& c) {
  std::vector<CmdPtr> stmts;
  for (const auto& s : flatten(c)) {
    if (const auto* i = std::get_if<Cmd::If>(&s->node)) {
      stmts.push_back(
          if_(i->guard, canonical(i->then_branch), canonical(i->else_branch)));
    } else if (const auto* w = std::get_if<Cmd::While>(&s->node)) {
      stmts.push_back(while_(w->guard, canonical(w->body)));
    } else {
      stmts.push_back(s);
    }
  }
  return seq(std::move(stmts));
}

StmtCounts count_statements(const Cmd& c) {
  StmtCounts n;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        auto add = [&](const StmtCounts& m) {
          n.assigns += m.assigns;
          n.skips += m.skips;
          n.ifs += m.ifs;
          n.whiles += m.whiles;
        };
        if constexpr (std::is_same_v<T, Cmd::Skip>) {
          ++n.skips;
        } else if constexpr (std::is_same_v<T, Cmd::Assign>) {
          ++n.assigns;
        } else if constexpr (std::is_same_v<T, Cmd::Seq>) {
          add(count_statements(*x.first));
          add(count_statements(*x.second));
        } else if constexpr (std::is_same_v<T, Cmd::If>) {
          ++n.ifs;
          add(count_statements(*x.then_branch));
          add(count_statements(*x.else_branch));
        } else {
          ++n.whiles;
          add(count_statements(*x.body));
        }
      },
      c.node);
  return n;
}

void collect_variables(const Expr& e, Universe& out) {
  if (const auto* v = std::get_if<Expr::Var>(&e.node)) {
    out.push_back(v->name);
  } else if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
    collect_variables(*b->lhs, out);
    collect_variables(*b->rhs, out);
  }
}

void collect_variables(const BoolExpr& b, Universe& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          collect_variables(*x.lhs, out);
          collect_variables(*x.rhs, out);
        } else if constexpr (std::is_same_v<T, BoolExpr::And> ||
                             std::is_same_v<T, BoolExpr::Or>) {
          collect_variables(*x.lhs, out);
          collect_variables(*x.rhs, out);
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          collect_variables(*x.operand, out);
        }
      },
      b.node);
}

namespace {

void collect_cmd(const Cmd& c, Universe& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cmd::Assign>) {
          out.push_back(x.target);
          collect_variables(*x.rhs, out);
        } else if constexpr (std::is_same_v<T, Cmd::Seq>) {
          collect_cmd(*x.first, out);
          collect_cmd(*x.second, out);
        } else if constexpr (std::is_same_v<T, Cmd::If>) {
          collect_variables(*x.guard, out);
          collect_cmd(*x.then_branch, out);
          collect_cmd(*x.else_branch, out);
        } else if constexpr (std::is_same_v<T, Cmd::While>) {
          collect_variables(*x.guard, out);
          collect_cmd(*x.body, out);
        }
      },
      c.node);
}

}  // namespace

Universe collect_variables(const Cmd& c) {
  Universe out;
  collect_cmd(c, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace absint
