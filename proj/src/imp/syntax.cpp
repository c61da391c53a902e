#include "absint/imp/syntax.hpp"

#include <cctype>
#include <optional>

namespace absint {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + msg),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { ident, number, label, directive, punct, end };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::end, "", line_, col_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Token next() {
    int line = line_, col = col_;
    char c = src_[pos_];
    auto take_while = [&](auto pred) {
      std::string s;
      while (pos_ < src_.size() && pred(src_[pos_])) {
        s += src_[pos_];
        advance();
      }
      return s;
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      auto s = take_while([](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
      });
      return {Tok::ident, s, line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto s = take_while(
          [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
      return {Tok::number, s, line, col};
    }
    if (c == '{') {
      advance();
      skip_space();
      if (pos_ < src_.size() && src_[pos_] == 'P') {
        advance();
        if (pos_ < src_.size() && src_[pos_] == '_') advance();
        auto digits = take_while(
            [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
        skip_space();
        if (!digits.empty() && pos_ < src_.size() && src_[pos_] == '}') {
          advance();
          return {Tok::label, digits, line, col};
        }
      }
      throw ParseError("malformed location label", line, col);
    }
    if (c == '[') {
      advance();
      auto name = take_while([](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
      });
      if (name.empty() || pos_ >= src_.size() || src_[pos_] != ']')
        throw ParseError("malformed directive", line, col);
      advance();
      return {Tok::directive, name, line, col};
    }
    static const char* two[] = {":=", "<=", ">=", "==", "!=", "&&", "||"};
    for (const char* t : two) {
      if (src_.substr(pos_, 2) == t) {
        advance();
        advance();
        return {Tok::punct, t, line, col};
      }
    }
    if (std::string_view("<>!+-*/();").find(c) != std::string_view::npos) {
      advance();
      return {Tok::punct, std::string(1, c), line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_keyword(const std::string& s) {
  static const char* kw[] = {"skip", "if",   "then", "else", "end",  "while",
                             "do",   "true", "false", "read"};
  for (const char* k : kw)
    if (s == k) return true;
  return false;
}

std::optional<CmpOp> cmp_of(const Token& t) {
  if (t.kind != Tok::punct) return std::nullopt;
  if (t.text == "<") return CmpOp::lt;
  if (t.text == "<=") return CmpOp::le;
  if (t.text == "==") return CmpOp::eq;
  if (t.text == ">") return CmpOp::gt;
  if (t.text == ">=") return CmpOp::ge;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  CmdPtr program() {
    std::size_t entry = slot_++;
    CmdPtr body = block(entry);
    expect_end();
    return body;
  }

  ExprPtr whole_expr() {
    auto e = expr();
    expect_end();
    return e;
  }

  BoolPtr whole_guard() {
    auto g = guard();
    expect_end();
    return g;
  }

  CmdPtr whole_atom() {
    CmdPtr c;
    if (is_word("skip")) {
      ++pos_;
      c = skip();
    } else {
      c = assignment();
    }
    accept(";");
    expect_end();
    return c;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    std::string near = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + " near " + near, t.line, t.column);
  }

  bool is_punct(const char* p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::punct && peek(ahead).text == p;
  }

  bool is_word(const char* w) const {
    return peek().kind == Tok::ident && peek().text == w;
  }

  bool accept(const char* p) {
    if (is_punct(p)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(const char* p) {
    if (!accept(p)) fail(std::string("expected '") + p + "'");
  }

  void expect_word(const char* w) {
    if (!is_word(w)) fail(std::string("expected '") + w + "'");
    ++pos_;
  }

  void expect_end() {
    if (peek().kind != Tok::end) fail("unexpected trailing input");
  }

  void directive(std::initializer_list<const char*> allowed) {
    if (peek().kind != Tok::directive) return;
    for (const char* a : allowed) {
      if (peek().text == a) {
        ++pos_;
        return;
      }
    }
    fail("misplaced directive");
  }

  void label(std::size_t slot) {
    if (peek().kind != Tok::label) return;
    const auto& t = peek();
    std::size_t k = std::stoul(t.text);
    if (k != slot)
      throw LabelMismatch("label {P" + t.text + "} should be {P" +
                              std::to_string(slot) + "}",
                          t.line, t.column);
    ++pos_;
  }

  bool starts_stmt() const {
    const auto& t = peek();
    if (t.kind != Tok::ident) return false;
    if (t.text == "skip" || t.text == "if" || t.text == "while") return true;
    return !is_keyword(t.text) && is_punct(":=", 1);
  }

  CmdPtr block(std::size_t entry_slot) {
    label(entry_slot);
    std::vector<CmdPtr> stmts;
    if (!starts_stmt()) fail("expected a statement");
    while (starts_stmt()) stmts.push_back(statement());
    return seq(std::move(stmts));
  }

  CmdPtr assignment() {
    const auto& t = peek();
    if (t.kind != Tok::ident || is_keyword(t.text)) fail("expected identifier");
    std::string target = t.text;
    ++pos_;
    expect(":=");
    return assign(std::move(target), expr());
  }

  CmdPtr statement() {
    if (is_word("skip")) {
      ++pos_;
      accept(";");
      label(slot_++);
      return skip();
    }
    if (is_word("if")) {
      ++pos_;
      auto g = guard();
      expect_word("then");
      directive({"if_then"});
      auto then_b = block(slot_++);
      CmdPtr else_b;
      if (is_word("else")) {
        ++pos_;
        directive({"if_else"});
        else_b = block(slot_++);
      } else {
        // no else: an implicit skip branch (its entry and exit locations)
        slot_ += 2;
        else_b = skip();
      }
      expect_word("end");
      directive({"endif", "if_end"});
      accept(";");
      label(slot_++);
      return if_(std::move(g), std::move(then_b), std::move(else_b));
    }
    if (is_word("while")) {
      ++pos_;
      auto g = guard();
      expect_word("do");
      directive({"while_true"});
      auto body = block(slot_++);
      expect_word("end");
      directive({"while_false"});
      accept(";");
      label(slot_++);
      return while_(std::move(g), std::move(body));
    }
    auto c = assignment();
    accept(";");
    label(slot_++);
    return c;
  }

  // --- expressions

  ExprPtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept("+")) {
        lhs = binary(ArithOp::add, lhs, term());
      } else if (accept("-")) {
        lhs = binary(ArithOp::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept("*")) {
        lhs = binary(ArithOp::mul, lhs, unary());
      } else if (accept("/")) {
        lhs = binary(ArithOp::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    if (accept("-")) {
      if (peek().kind == Tok::number) {
        Integer v(peek().text);
        ++pos_;
        return lit(-v);
      }
      return binary(ArithOp::sub, lit(0), unary());
    }
    return primary();
  }

  ExprPtr primary() {
    const auto& t = peek();
    if (t.kind == Tok::number) {
      ++pos_;
      return lit(Integer(t.text));
    }
    if (accept("(")) {
      auto e = expr();
      expect(")");
      return e;
    }
    if (t.kind == Tok::ident && t.text == "read") {
      ++pos_;
      if (accept("(")) expect(")");
      return read_expr();
    }
    if (t.kind == Tok::ident && !is_keyword(t.text)) {
      ++pos_;
      return var(t.text);
    }
    fail("expected expression");
  }

  // --- guards

  BoolPtr guard() {
    auto lhs = guard_and();
    while (accept("||")) lhs = disj(lhs, guard_and());
    return lhs;
  }

  BoolPtr guard_and() {
    auto lhs = guard_unary();
    while (accept("&&")) lhs = conj(lhs, guard_unary());
    return lhs;
  }

  bool continues_arith() const {
    if (cmp_of(peek()) || is_punct("!=")) return true;
    for (const char* p : {"+", "-", "*", "/"})
      if (is_punct(p)) return true;
    return false;
  }

  BoolPtr guard_unary() {
    if (accept("!")) return negate(guard_unary());
    if (is_word("true")) {
      ++pos_;
      return bool_const(true);
    }
    if (is_word("false")) {
      ++pos_;
      return bool_const(false);
    }
    if (is_punct("(")) {
      std::size_t save = pos_;
      try {
        ++pos_;
        auto g = guard();
        expect(")");
        if (!continues_arith()) return g;
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    return comparison();
  }

  BoolPtr comparison() {
    auto lhs = expr();
    if (accept("!=")) return negate(cmp(CmpOp::eq, lhs, expr()));
    auto op = cmp_of(peek());
    if (!op) fail("expected comparison operator");
    ++pos_;
    return cmp(*op, lhs, expr());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t slot_ = 0;
};

int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Expr::Binary>(&e.node))
    return (b->op == ArithOp::add || b->op == ArithOp::sub) ? 1 : 2;
  return 3;
}

std::string render_bool(const BoolExpr& b, bool operand) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          std::string s =
              render(*x.lhs) + " " + symbol(x.op) + " " + render(*x.rhs);
          return operand ? "(" + s + ")" : s;
        } else if constexpr (std::is_same_v<T, BoolExpr::And> ||
                             std::is_same_v<T, BoolExpr::Or>) {
          const char* op = std::is_same_v<T, BoolExpr::And> ? " && " : " || ";
          // left-nested chains of the same connective stay flat
          bool lhs_flat = std::holds_alternative<T>(x.lhs->node);
          std::string s = (lhs_flat ? render_bool(*x.lhs, false)
                                    : render_bool(*x.lhs, true)) +
                          op + render_bool(*x.rhs, true);
          return operand ? "(" + s + ")" : s;
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          return "!(" + render_bool(*x.operand, false) + ")";
        } else {
          return x.value ? "true" : "false";
        }
      },
      b.node);
}

void render_block(const AnnotatedProgram& p, const CmdPtr& c, int depth,
                  std::string& out);

void line(std::string& out, int depth, const std::string& text) {
  if (!out.empty()) out += '\n';
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += text;
}

void render_block(const AnnotatedProgram& p, const CmdPtr& c, int depth,
                  std::string& out) {
  for (const auto& s : flatten(c)) {
    const auto& pl = p.placement(*s);
    if (const auto* i = std::get_if<Cmd::If>(&s->node)) {
      line(out, depth, "if (" + render(*i->guard) + ") then");
      line(out, depth + 1, directive_text(DirectiveKind::if_then));
      line(out, depth + 1, to_string(pl.then_entry));
      render_block(p, i->then_branch, depth + 1, out);
      line(out, depth, "else");
      line(out, depth + 1, directive_text(DirectiveKind::if_else));
      line(out, depth + 1, to_string(pl.else_entry));
      render_block(p, i->else_branch, depth + 1, out);
      line(out, depth,
           std::string("end ") + directive_text(DirectiveKind::endif));
    } else if (const auto* w = std::get_if<Cmd::While>(&s->node)) {
      line(out, depth, "while (" + render(*w->guard) + ") do");
      line(out, depth + 1, directive_text(DirectiveKind::while_true));
      line(out, depth + 1, to_string(pl.head));
      render_block(p, w->body, depth + 1, out);
      line(out, depth,
           std::string("end ") + directive_text(DirectiveKind::while_false));
    } else {
      line(out, depth, render_atom(*s) + ";");
    }
    line(out, depth, to_string(pl.after));
  }
}

}  // namespace

AnnotatedProgram parse_imp(std::string_view text) {
  return annotate(Parser(text).program());
}

ExprPtr parse_expr(std::string_view text) { return Parser(text).whole_expr(); }

BoolPtr parse_guard(std::string_view text) {
  return Parser(text).whole_guard();
}

CmdPtr parse_atom(std::string_view text) { return Parser(text).whole_atom(); }

std::string render(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Lit>) {
          return x.value.str();
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          int p = precedence(e);
          std::string l = render(*x.lhs);
          std::string r = render(*x.rhs);
          if (precedence(*x.lhs) < p) l = "(" + l + ")";
          if (precedence(*x.rhs) <= p) r = "(" + r + ")";
          return l + " " + symbol(x.op) + " " + r;
        } else {
          return "read()";
        }
      },
      e.node);
}

std::string render(const BoolExpr& b) { return render_bool(b, false); }

std::string render_atom(const Cmd& c) {
  if (const auto* a = std::get_if<Cmd::Assign>(&c.node))
    return a->target + " := " + render(*a->rhs);
  if (std::holds_alternative<Cmd::Skip>(c.node)) return "skip";
  throw std::invalid_argument("not an atomic statement");
}

std::string render(const AnnotatedProgram& p) {
  std::string out;
  line(out, 0, to_string(Location{0}));
  render_block(p, p.root(), 0, out);
  return out;
}

}  // namespace absint
