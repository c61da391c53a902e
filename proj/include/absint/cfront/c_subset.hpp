#pragma once

#include "absint/audit/concrete.hpp"
#include "absint/imp/program.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace absint {

// Input outside the supported C subset. what() names the construct and line.
class CSubsetError : public std::runtime_error {
 public:
  CSubsetError(std::string construct, int line);
  const std::string& construct() const { return construct_; }
  int line() const { return line_; }

 private:
  std::string construct_;
  int line_;
};

struct CExpr;
using CExprPtr = std::shared_ptr<const CExpr>;

struct CExpr {
  struct Lit {
    Integer value;
  };
  struct Var {
    std::string name;
  };
  struct Nondet {};
  struct Unary {
    char op;  // '-' or '!'
    CExprPtr operand;
  };
  struct Binary {
    std::string op;  // + - * / < <= > >= == != && ||
    CExprPtr lhs, rhs;
  };
  std::variant<Lit, Var, Nondet, Unary, Binary> node;
  int line = 0;
};

struct CStmt;
using CStmtPtr = std::shared_ptr<const CStmt>;

struct CStmt {
  // x = e, x op= e, x++ and friends all land here as x = e'.
  struct Assign {
    std::string target;
    CExprPtr rhs;
  };
  struct If {
    CExprPtr cond;
    std::vector<CStmtPtr> then_branch, else_branch;
    bool has_else = false;
  };
  struct While {
    CExprPtr cond;
    std::vector<CStmtPtr> body;
  };
  struct For {
    std::vector<CStmtPtr> init;
    CExprPtr cond;  // null: no condition
    std::vector<CStmtPtr> step;
    std::vector<CStmtPtr> body;
  };
  // A call kept out of the translation: assertions, reach_error(), abort().
  struct Dropped {
    std::string call;
  };
  std::variant<Assign, If, While, For, Dropped> node;
  int line = 0;
};

struct CProgram {
  std::vector<std::string> declared;  // in declaration order
  std::vector<CStmtPtr> body;         // main's statements
};

CProgram parse_c(std::string_view text);

struct CTranslation {
  AnnotatedProgram program;
  std::vector<std::string> diagnostics;
  // C assignment -> ordinal of its IMP Assign in textual order
  std::vector<std::pair<const CStmt*, std::size_t>> assign_ordinals;
};

// __VERIFIER_nondet_int() becomes read(), an if without else gains a skip
// else-branch, for loops become init; while (cond) { body; step }, a block
// left empty by dropped calls becomes skip.
CTranslation translate_c(const CProgram& c);
CTranslation translate_c(std::string_view text);

struct CRunResult {
  RunEnd end = RunEnd::finished;
  // (assignment ordinal, store after it) for every executed assignment
  std::vector<std::pair<std::size_t, Store>> assignments;
  std::size_t loop_iterations = 0;
};

// Direct evaluation of the C program with 64-bit integers, for checking the
// translation. Variables are laid out as in t.program's universe and start
// with one input each, like ConcreteProgram.
CRunResult run_c(const CProgram& c, const CTranslation& t, InputSource& in,
                 std::size_t max_loop_iterations = 1'000'000);

}  // namespace absint
