#pragma once

#include "absint/imp/program.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace absint {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Embedded {Pk} labels disagree with the canonical placement.
class LabelMismatch : public ParseError {
 public:
  using ParseError::ParseError;
};

// Annotated or bare IMP text. Labels and directives are optional; when
// present they must agree with annotate().
AnnotatedProgram parse_imp(std::string_view text);

ExprPtr parse_expr(std::string_view text);
BoolPtr parse_guard(std::string_view text);
// "x := e" or "skip", with or without a trailing semicolon.
CmdPtr parse_atom(std::string_view text);

std::string render(const AnnotatedProgram& p);
std::string render(const Expr& e);
std::string render(const BoolExpr& b);
// One-line form of an atom ("x := x + 1", "skip").
std::string render_atom(const Cmd& c);

}  // namespace absint
