#include "absint/cfront/c_subset.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>

namespace absint {

CSubsetError::CSubsetError(std::string construct, int line)
    : std::runtime_error("line " + std::to_string(line) + ": unsupported " + construct),
      construct_(std::move(construct)),
      line_(line) {}

namespace {

struct Token {
  enum Kind { ident, number, punct, end } kind;
  std::string text;
  int line;
};

// Only "#define NAME <integer>" has an effect; other directives are ignored.
void define(const std::string& directive, int line, std::map<std::string, std::string>& defines) {
  static const std::regex object(R"(#\s*define\s+([A-Za-z_]\w*)\s+\(?\s*(-?\s*\d+)\s*\)?\s*)");
  static const std::regex any(R"(#\s*define\s+([A-Za-z_]\w*)(.*))");
  std::smatch m;
  if (std::regex_match(directive, m, object)) {
    std::string v = m[2];
    v.erase(std::remove(v.begin(), v.end(), ' '), v.end());
    defines[m[1]] = v;
  } else if (std::regex_match(directive, m, any)) {
    throw CSubsetError("macro '" + m[1].str() + "'", line);
  }
}

std::vector<Token> lex(std::string_view s) {
  static const char* puncts[] = {"<<=", ">>=", "++", "--", "+=", "-=", "*=", "/=", "%=", "&&", "||",
                                 "==",  "!=",  "<=", ">=", "<<", ">>", "->", "(",  ")",  "{",  "}",
                                 "[",   "]",   ";",  ",",  "=",  "+",  "-",  "*",  "/",  "%",  "<",
                                 ">",   "!",   "&",  "|",  "^",  "~",  "?",  ":",  "."};
  std::vector<Token> out;
  std::map<std::string, std::string> defines;
  int line = 1;
  bool line_start = true;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      line_start = true;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#' && line_start) {  // preprocessor line, with continuations
      std::size_t b = i;
      while (i < s.size() && !(s[i] == '\n' && s[i - 1] != '\\')) {
        if (s[i] == '\n') ++line;
        ++i;
      }
      define(std::string(s.substr(b, i - b)), line, defines);
      continue;
    }
    line_start = false;
    if (s.compare(i, 2, "//") == 0) {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (s.compare(i, 2, "/*") == 0) {
      auto e = s.find("*/", i + 2);
      if (e == std::string_view::npos) throw CSubsetError("unterminated comment", line);
      for (std::size_t k = i; k < e; ++k) line += s[k] == '\n';
      i = e + 2;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      std::string id(s.substr(b, i - b));
      if (auto d = defines.find(id); d != defines.end())
        out.push_back({Token::number, d->second, line});
      else
        out.push_back({Token::ident, std::move(id), line});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t b = i;
      while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Token::number, std::string(s.substr(b, i - b)), line});
      continue;
    }
    bool found = false;
    for (const char* p : puncts) {
      std::string_view pv(p);
      if (s.compare(i, pv.size(), pv) == 0) {
        out.push_back({Token::punct, std::string(pv), line});
        i += pv.size();
        found = true;
        break;
      }
    }
    if (!found) throw CSubsetError(std::string("character '") + c + "'", line);
  }
  out.push_back({Token::end, "", line});
  return out;
}

const std::set<std::string> kDropped = {"__VERIFIER_assert", "assert", "reach_error", "abort",
                                        "__VERIFIER_error"};
const std::set<std::string> kRejectedTypes = {"unsigned", "signed", "long", "short", "char",
                                              "float", "double", "_Bool", "bool", "struct",
                                              "union", "enum", "const", "volatile"};
const std::set<std::string> kRejectedStmts = {"do", "switch", "break", "continue", "goto", "case"};

class Parser {
 public:
  explicit Parser(std::vector<Token> t) : t_(std::move(t)) {}

  CProgram run() {
    bool seen_main = false;
    while (!at_end()) {
      if (accept("extern") || accept("static")) {
      }
      if (peek().text == "typedef") throw CSubsetError("typedef", peek().line);
      std::string type = base_type();
      Token name = expect_ident();
      if (!is("(")) throw CSubsetError("global variable '" + name.text + "'", name.line);
      skip_parens();
      if (accept(";")) continue;  // prototype
      if (!is("{")) throw CSubsetError("declaration of '" + name.text + "'", name.line);
      if (name.text == "main") {
        if (type != "int") throw CSubsetError(type + " main", name.line);
        seen_main = true;
        next();
        auto body = block_until_close(true);
        prog_.body = std::move(body);
      } else if (kDropped.count(name.text)) {
        skip_braces();
      } else {
        throw CSubsetError("function definition '" + name.text + "'", name.line);
      }
    }
    if (!seen_main) throw CSubsetError("program without main", peek().line);
    return std::move(prog_);
  }

 private:
  const Token& peek(std::size_t k = 0) const { return t_[std::min(pos_ + k, t_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::end; }
  bool is(const char* s) const { return peek().text == s && peek().kind != Token::number; }
  Token next() { return t_[pos_ < t_.size() - 1 ? pos_++ : pos_]; }
  bool accept(const char* s) {
    if (!is(s)) return false;
    next();
    return true;
  }
  void expect(const char* s) {
    if (!accept(s))
      throw CSubsetError(std::string("syntax: expected '") + s + "' before '" + peek().text + "'",
                         peek().line);
  }
  Token expect_ident() {
    if (peek().kind != Token::ident)
      throw CSubsetError("syntax: expected identifier before '" + peek().text + "'", peek().line);
    return next();
  }

  std::string base_type() {
    const Token& t = peek();
    if (kRejectedTypes.count(t.text)) throw CSubsetError("type '" + t.text + "'", t.line);
    if (t.text != "int" && t.text != "void")
      throw CSubsetError("syntax: expected a type before '" + t.text + "'", t.line);
    next();
    if (is("*")) throw CSubsetError("pointer", peek().line);
    return t.text;
  }

  void skip_parens() {
    expect("(");
    for (int depth = 1; depth > 0 && !at_end();) {
      if (is("(")) ++depth;
      if (is(")")) --depth;
      next();
    }
  }
  void skip_braces() {
    expect("{");
    for (int depth = 1; depth > 0 && !at_end();) {
      if (is("{")) ++depth;
      if (is("}")) --depth;
      next();
    }
  }

  template <class T>
  CStmtPtr make(T node, int line) {
    return std::make_shared<const CStmt>(CStmt{std::move(node), line});
  }

  std::vector<CStmtPtr> block_until_close(bool is_main) {
    std::vector<CStmtPtr> out;
    while (!accept("}")) {
      if (at_end()) throw CSubsetError("syntax: missing '}'", peek().line);
      if (is("return")) {
        int line = next().line;
        while (!accept(";")) {
          if (at_end()) throw CSubsetError("syntax: missing ';'", line);
          next();
        }
        if (!(is_main && is("}")))
          throw CSubsetError("return before the end of main", line);
        continue;
      }
      statement(out);
    }
    return out;
  }

  std::vector<CStmtPtr> body() {
    std::vector<CStmtPtr> out;
    if (accept("{")) {
      ++depth_;
      out = block_until_close(false);
      --depth_;
    } else {
      ++depth_;
      statement(out);
      --depth_;
    }
    return out;
  }

  void declaration(std::vector<CStmtPtr>& out) {
    base_type();
    do {
      Token name = expect_ident();
      if (is("[")) throw CSubsetError("array", name.line);
      if (std::find(prog_.declared.begin(), prog_.declared.end(), name.text) == prog_.declared.end())
        prog_.declared.push_back(name.text);
      if (accept("=")) out.push_back(make(CStmt::Assign{name.text, expr()}, name.line));
    } while (accept(","));
  }

  // Assignment, increment or a call that is dropped.
  void simple(std::vector<CStmtPtr>& out) {
    const Token& t = peek();
    int line = t.line;
    if (is("++") || is("--")) {
      bool inc = next().text == "++";
      Token name = expect_ident();
      out.push_back(make(CStmt::Assign{name.text, step(name.text, inc, line)}, line));
      return;
    }
    Token name = expect_ident();
    if (is("(")) {
      if (kDropped.count(name.text)) {
        skip_parens();
        out.push_back(make(CStmt::Dropped{name.text}, line));
        return;
      }
      throw CSubsetError("call to '" + name.text + "'", line);
    }
    if (is("++") || is("--")) {
      bool inc = next().text == "++";
      out.push_back(make(CStmt::Assign{name.text, step(name.text, inc, line)}, line));
      return;
    }
    static const std::map<std::string, std::string> compound = {
        {"+=", "+"}, {"-=", "-"}, {"*=", "*"}, {"/=", "/"}};
    if (accept("=")) {
      out.push_back(make(CStmt::Assign{name.text, expr()}, line));
      return;
    }
    if (auto it = compound.find(peek().text); it != compound.end()) {
      next();
      auto rhs = expr();
      out.push_back(make(CStmt::Assign{name.text, bin(it->second, var(name.text, line), rhs, line)}, line));
      return;
    }
    throw CSubsetError("expression statement '" + name.text + " " + peek().text + "'", line);
  }

  void statement(std::vector<CStmtPtr>& out) {
    const Token& t = peek();
    int line = t.line;
    if (kRejectedStmts.count(t.text)) throw CSubsetError("'" + t.text + "' statement", line);
    if (accept(";")) return;
    if (is("{")) {
      auto b = body();
      out.insert(out.end(), b.begin(), b.end());
      return;
    }
    if (t.text == "int" || kRejectedTypes.count(t.text)) {
      declaration(out);
      expect(";");
      return;
    }
    if (accept("if")) {
      expect("(");
      CStmt::If s{expr(), {}, {}, false};
      expect(")");
      s.then_branch = body();
      if (accept("else")) {
        s.has_else = true;
        s.else_branch = body();
      }
      out.push_back(make(std::move(s), line));
      return;
    }
    if (accept("while")) {
      expect("(");
      CStmt::While s{expr(), {}};
      expect(")");
      s.body = body();
      out.push_back(make(std::move(s), line));
      return;
    }
    if (accept("for")) {
      expect("(");
      CStmt::For s;
      if (!is(";")) {
        if (peek().text == "int" || kRejectedTypes.count(peek().text)) {
          declaration(s.init);
        } else {
          do simple(s.init);
          while (accept(","));
        }
      }
      expect(";");
      if (!is(";")) s.cond = expr();
      expect(";");
      if (!is(")")) {
        do simple(s.step);
        while (accept(","));
      }
      expect(")");
      s.body = body();
      out.push_back(make(std::move(s), line));
      return;
    }
    simple(out);
    expect(";");
  }

  static CExprPtr mk(CExpr::Binary b, int line) {
    return std::make_shared<const CExpr>(CExpr{std::move(b), line});
  }
  static CExprPtr bin(const std::string& op, CExprPtr a, CExprPtr b, int line) {
    return mk(CExpr::Binary{op, std::move(a), std::move(b)}, line);
  }
  static CExprPtr var(const std::string& n, int line) {
    return std::make_shared<const CExpr>(CExpr{CExpr::Var{n}, line});
  }
  static CExprPtr step(const std::string& n, bool inc, int line) {
    return bin(inc ? "+" : "-", var(n, line),
               std::make_shared<const CExpr>(CExpr{CExpr::Lit{1}, line}), line);
  }

  CExprPtr expr() {
    if (is("?")) throw CSubsetError("conditional operator", peek().line);
    auto e = binary_level(0);
    if (is("?")) throw CSubsetError("conditional operator", peek().line);
    if (is("=") || is("+=") || is("-=") || is("++") || is("--"))
      throw CSubsetError("assignment inside an expression", peek().line);
    return e;
  }

  CExprPtr binary_level(int level) {
    static const std::vector<std::vector<std::string>> levels = {
        {"||"}, {"&&"}, {"==", "!="}, {"<", "<=", ">", ">="}, {"+", "-"}, {"*", "/", "%"}};
    if (level == static_cast<int>(levels.size())) return unary();
    auto lhs = binary_level(level + 1);
    for (;;) {
      const auto& ops = levels[level];
      auto it = std::find(ops.begin(), ops.end(), peek().text);
      if (it == ops.end() || peek().kind != Token::punct) break;
      int line = next().line;
      if (*it == "%") throw CSubsetError("operator '%'", line);
      lhs = bin(*it, lhs, binary_level(level + 1), line);
    }
    for (const char* bad : {"&", "|", "^", "<<", ">>"})
      if (is(bad)) throw CSubsetError(std::string("operator '") + bad + "'", peek().line);
    return lhs;
  }

  CExprPtr unary() {
    int line = peek().line;
    if (accept("-")) return std::make_shared<const CExpr>(CExpr{CExpr::Unary{'-', unary()}, line});
    if (accept("+")) return unary();
    if (accept("!")) return std::make_shared<const CExpr>(CExpr{CExpr::Unary{'!', unary()}, line});
    if (is("~")) throw CSubsetError("operator '~'", line);
    if (is("&") || is("*")) throw CSubsetError("pointer", line);
    if (is("++") || is("--")) throw CSubsetError("increment inside an expression", line);
    if (accept("(")) {
      if (peek().kind == Token::ident && (peek().text == "int" || kRejectedTypes.count(peek().text)))
        throw CSubsetError("cast", line);
      auto e = expr();
      expect(")");
      return e;
    }
    Token t = next();
    if (t.kind == Token::number) return std::make_shared<const CExpr>(CExpr{CExpr::Lit{number(t)}, line});
    if (t.kind != Token::ident)
      throw CSubsetError("syntax: unexpected '" + t.text + "'", line);
    if (is("(")) {
      if (t.text != "__VERIFIER_nondet_int")
        throw CSubsetError("call to '" + t.text + "' in an expression", line);
      skip_parens();
      return std::make_shared<const CExpr>(CExpr{CExpr::Nondet{}, line});
    }
    if (is("[")) throw CSubsetError("array", line);
    return var(t.text, line);
  }

  static Integer number(const Token& t) {
    std::string s = t.text;
    if (s.find_first_of("uUlL") != std::string::npos)
      throw CSubsetError("integer suffix in '" + s + "'", t.line);
    try {
      if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) return Integer(s);
      if (s.size() > 1 && s[0] == '0') throw CSubsetError("octal literal '" + s + "'", t.line);
      return Integer(s);
    } catch (const std::runtime_error&) {
      throw CSubsetError("number '" + s + "'", t.line);
    }
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  CProgram prog_;
};

// ---- translation

bool is_boolean(const CExpr& e) {
  if (const auto* b = std::get_if<CExpr::Binary>(&e.node))
    return b->op != "+" && b->op != "-" && b->op != "*" && b->op != "/";
  if (const auto* u = std::get_if<CExpr::Unary>(&e.node)) return u->op == '!';
  return false;
}

ExprPtr to_int(const CExpr& e) {
  return std::visit(
      [&](const auto& x) -> ExprPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CExpr::Lit>) {
          return lit(x.value);
        } else if constexpr (std::is_same_v<T, CExpr::Var>) {
          return var(x.name);
        } else if constexpr (std::is_same_v<T, CExpr::Nondet>) {
          return read_expr();
        } else if constexpr (std::is_same_v<T, CExpr::Unary>) {
          if (x.op == '!') throw CSubsetError("boolean value used as an integer", e.line);
          if (const auto* l = std::get_if<CExpr::Lit>(&x.operand->node)) return lit(-l->value);
          return binary(ArithOp::sub, lit(0), to_int(*x.operand));
        } else {
          static const std::map<std::string, ArithOp> ops = {
              {"+", ArithOp::add}, {"-", ArithOp::sub}, {"*", ArithOp::mul}, {"/", ArithOp::div}};
          auto it = ops.find(x.op);
          if (it == ops.end()) throw CSubsetError("boolean value used as an integer", e.line);
          return binary(it->second, to_int(*x.lhs), to_int(*x.rhs));
        }
      },
      e.node);
}

BoolPtr to_bool(const CExpr& e) {
  if (const auto* l = std::get_if<CExpr::Lit>(&e.node)) return bool_const(l->value != 0);
  if (!is_boolean(e)) return negate(cmp(CmpOp::eq, to_int(e), lit(0)));
  if (const auto* u = std::get_if<CExpr::Unary>(&e.node)) return negate(to_bool(*u->operand));
  const auto& b = std::get<CExpr::Binary>(e.node);
  if (b.op == "&&") return conj(to_bool(*b.lhs), to_bool(*b.rhs));
  if (b.op == "||") return disj(to_bool(*b.lhs), to_bool(*b.rhs));
  if (b.op == "!=") return negate(cmp(CmpOp::eq, to_int(*b.lhs), to_int(*b.rhs)));
  static const std::map<std::string, CmpOp> ops = {
      {"<", CmpOp::lt}, {"<=", CmpOp::le}, {"==", CmpOp::eq}, {">", CmpOp::gt}, {">=", CmpOp::ge}};
  return cmp(ops.at(b.op), to_int(*b.lhs), to_int(*b.rhs));
}

class Translator {
 public:
  explicit Translator(CTranslation& out) : out_(out) {}

  CmdPtr block(const std::vector<CStmtPtr>& ss, bool skip_if_empty) {
    std::vector<CmdPtr> cmds;
    for (const auto& s : ss) stmt(*s, cmds);
    if (cmds.empty() && skip_if_empty) return skip();
    return seq(std::move(cmds));
  }

  void stmt(const CStmt& s, std::vector<CmdPtr>& out) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, CStmt::Assign>) {
            out_.assign_ordinals.emplace_back(&s, ordinal_++);
            out.push_back(assign(x.target, to_int(*x.rhs)));
          } else if constexpr (std::is_same_v<T, CStmt::If>) {
            auto g = to_bool(*x.cond);
            auto t = block(x.then_branch, true);
            auto e = block(x.else_branch, true);
            out.push_back(if_(g, t, e));
          } else if constexpr (std::is_same_v<T, CStmt::While>) {
            auto g = to_bool(*x.cond);
            out.push_back(while_(g, block(x.body, true)));
          } else if constexpr (std::is_same_v<T, CStmt::For>) {
            for (const auto& i : x.init) stmt(*i, out);
            auto g = x.cond ? to_bool(*x.cond) : bool_const(true);
            std::vector<CStmtPtr> body = x.body;
            body.insert(body.end(), x.step.begin(), x.step.end());
            out.push_back(while_(g, block(body, true)));
          } else {
            out_.diagnostics.push_back("line " + std::to_string(s.line) + ": dropped call to " +
                                       x.call);
          }
        },
        s.node);
  }

 private:
  CTranslation& out_;
  std::size_t ordinal_ = 0;
};

}  // namespace

CProgram parse_c(std::string_view text) { return Parser(lex(text)).run(); }

CTranslation translate_c(const CProgram& c) {
  CTranslation t;
  auto root = Translator(t).block(c.body, true);
  t.program = annotate(root, c.declared);
  return t;
}

CTranslation translate_c(std::string_view text) { return translate_c(parse_c(text)); }

}  // namespace absint
