#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace absint {

using Integer = boost::multiprecision::cpp_int;

using Universe = std::vector<std::string>;
using UniversePtr = std::shared_ptr<const Universe>;

enum class ArithOp { add, sub, mul, div };
enum class CmpOp { lt, le, eq, gt, ge };

const char* symbol(ArithOp op);
const char* symbol(CmpOp op);

// x op y  <=>  y flip(op) x
CmpOp flip(CmpOp op);

struct Expr;
struct BoolExpr;
struct Cmd;
using ExprPtr = std::shared_ptr<const Expr>;
using BoolPtr = std::shared_ptr<const BoolExpr>;
using CmdPtr = std::shared_ptr<const Cmd>;

struct Expr {
  struct Lit {
    Integer value;
  };
  struct Var {
    std::string name;
  };
  struct Binary {
    ArithOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  struct Read {};

  std::variant<Lit, Var, Binary, Read> node;
};

struct BoolExpr {
  struct Cmp {
    CmpOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  struct And {
    BoolPtr lhs;
    BoolPtr rhs;
  };
  struct Or {
    BoolPtr lhs;
    BoolPtr rhs;
  };
  struct Not {
    BoolPtr operand;
  };
  struct Const {
    bool value;
  };

  std::variant<Cmp, And, Or, Not, Const> node;
};

struct Cmd {
  struct Skip {};
  struct Assign {
    std::string target;
    ExprPtr rhs;
  };
  struct Seq {
    CmdPtr first;
    CmdPtr second;
  };
  struct If {
    BoolPtr guard;
    CmdPtr then_branch;
    CmdPtr else_branch;
  };
  struct While {
    BoolPtr guard;
    CmdPtr body;
  };

  std::variant<Skip, Assign, Seq, If, While> node;
};

ExprPtr lit(Integer value);
ExprPtr var(std::string name);
ExprPtr binary(ArithOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr read_expr();

BoolPtr cmp(CmpOp op, ExprPtr lhs, ExprPtr rhs);
BoolPtr conj(BoolPtr lhs, BoolPtr rhs);
BoolPtr disj(BoolPtr lhs, BoolPtr rhs);
BoolPtr negate(BoolPtr operand);
BoolPtr bool_const(bool value);

CmdPtr skip();
CmdPtr assign(std::string target, ExprPtr rhs);
CmdPtr if_(BoolPtr guard, CmdPtr then_branch, CmdPtr else_branch);
CmdPtr while_(BoolPtr guard, CmdPtr body);
// Right-associated sequence of the given statements; an empty list is skip.
CmdPtr seq(std::vector<CmdPtr> stmts);

bool operator==(const Expr& a, const Expr& b);
bool operator==(const BoolExpr& a, const BoolExpr& b);
bool operator==(const Cmd& a, const Cmd& b);

bool contains_read(const Expr& e);
bool contains_read(const BoolExpr& b);

// Statement list of a Seq chain, flattened in execution order.
std::vector<CmdPtr> flatten(const CmdPtr& c);

// Rebuild a sequence so every Seq is right-associated.
CmdPtr canonical(const CmdPtr& c);

struct StmtCounts {
  std::size_t assigns = 0;
  std::size_t skips = 0;
  std::size_t ifs = 0;
  std::size_t whiles = 0;
};
StmtCounts count_statements(const Cmd& c);

// Identifiers of the program, sorted and deduplicated.
Universe collect_variables(const Cmd& c);
void collect_variables(const Expr& e, Universe& out);
void collect_variables(const BoolExpr& b, Universe& out);

}  // namespace absint
