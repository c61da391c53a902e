#include "absint/domain/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <vector>

namespace absint {

namespace {

const std::map<std::string, std::string, std::less<>>& commands() {
  static const std::map<std::string, std::string, std::less<>> m = {
      {"leq", "<="},   {"le", "<="},     {"geq", ">="},     {"ge", ">="},
      {"neq", "!="},   {"ne", "!="},     {"lt", "<"},       {"gt", ">"},
      {"sqcup", "⊔"},  {"cup", "⊔"},     {"sqcap", "⊓"},    {"cap", "⊓"},
      {"nabla", "∇"},  {"bot", "bot"},   {"perp", "bot"},   {"emptyset", "bot"},
      {"varnothing", "bot"}, {"top", "top"}, {"infty", "inf"}, {"inf", "inf"},
      {"mapsto", "↦"}, {"to", "->"},     {"rightarrow", "->"}, {"in", "∈"},
      {"land", "&&"},  {"wedge", "&&"},  {"lor", "||"},     {"vee", "||"},
      {"neg", "!"},    {"lnot", "!"},    {"cdot", "*"},     {"times", "*"},
      {"ast", "*"},    {"div", "/"},     {"quad", " "},     {"qquad", " "},
      {"left", ""},    {"right", ""},    {"big", ""},       {"Big", ""},
      {"bigl", ""},    {"bigr", ""},     {"ldots", "..."},  {"dots", "..."},
      {"cdots", "..."},
  };
  return m;
}

const std::set<std::string, std::less<>>& wrappers() {
  static const std::set<std::string, std::less<>> s = {
      "text",   "mathtt", "mathrm", "texttt", "textit", "mathit",
      "textbf", "mathbf", "mathsf", "textsf", "textrm", "operatorname",
      "emph",   "boldsymbol"};
  return s;
}

const std::vector<std::pair<std::string_view, std::string_view>>& unicode() {
  static const std::vector<std::pair<std::string_view, std::string_view>> v = {
      {"≤", "<="}, {"≥", ">="}, {"≠", "!="}, {"∞", "inf"}, {"⊥", "bot"},
      {"⊤", "top"}, {"−", "-"}, {"–", "-"}, {"∪", "⊔"}, {"∩", "⊓"},
      {"→", "->"}, {"∧", "&&"}, {"∨", "||"}, {"¬", "!"}, {"×", "*"},
      {"\xc2\xa0", " "},
  };
  return v;
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Cursor {
  std::string_view s;
  std::size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool at_end() {
    ws();
    return i >= s.size();
  }
  bool eat(std::string_view tok) {
    ws();
    if (s.substr(i, tok.size()) != tok) return false;
    i += tok.size();
    return true;
  }
  bool eat_word(std::string_view w) {
    ws();
    if (s.substr(i, w.size()) != w) return false;
    if (i + w.size() < s.size() && ident_char(s[i + w.size()])) return false;
    i += w.size();
    return true;
  }
  std::string ident() {
    ws();
    std::size_t j = i;
    if (j < s.size() && (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '_'))
      while (j < s.size() && ident_char(s[j])) ++j;
    if (j == i) fail("expected a variable name");
    std::string out(s.substr(i, j - i));
    i = j;
    return out;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, 1, static_cast<int>(i) + 1);
  }
};

Bound bound(Cursor& c) {
  bool negative = false;
  if (c.eat("-"))
    negative = true;
  else
    c.eat("+");
  if (c.eat_word("inf")) return negative ? Bound::neg_inf() : Bound::pos_inf();
  c.ws();
  std::size_t j = c.i;
  while (j < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[j]))) ++j;
  if (j == c.i) c.fail("expected a bound");
  Integer v(std::string(c.s.substr(c.i, j - c.i)));
  c.i = j;
  return negative ? Bound(Integer(-v)) : Bound(v);
}

Interval interval(Cursor& c) {
  if (c.eat_word("bot")) return Interval::bottom();
  if (c.eat_word("top")) return Interval::top();
  if (!c.eat("[") && !c.eat("(")) c.fail("expected an interval");
  Bound lo = bound(c);
  if (!c.eat(",") && !c.eat(";")) c.fail("expected ','");
  Bound hi = bound(c);
  if (!c.eat("]") && !c.eat(")")) c.fail("expected ']'");
  return Interval::range(std::move(lo), std::move(hi));
}

}  // namespace

std::string normalize_math(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::vector<bool> drop_close;  // one entry per open '{'
  for (std::size_t i = 0; i < in.size();) {
    char c = in[i];
    if (c == '\\') {
      if (i + 1 >= in.size()) break;
      char n = in[i + 1];
      if (!std::isalpha(static_cast<unsigned char>(n))) {
        switch (n) {
          case '{': out += '{'; break;
          case '}': out += '}'; break;
          case '[': case ']': case '(': case ')': break;
          case '\\': out += '\n'; break;
          case ',': case ';': case ' ': case '!': case ':': out += ' '; break;
          default: out += n;
        }
        i += 2;
        continue;
      }
      std::size_t j = i + 1;
      while (j < in.size() && std::isalpha(static_cast<unsigned char>(in[j]))) ++j;
      std::string_view name = in.substr(i + 1, j - i - 1);
      i = j;
      if (wrappers().count(name)) {
        while (i < in.size() && in[i] == ' ') ++i;
        if (i < in.size() && in[i] == '{') {
          drop_close.push_back(true);
          ++i;
        }
        continue;
      }
      if (auto it = commands().find(name); it != commands().end())
        out += it->second;
      else
        out += ' ';
      continue;
    }
    if (c == '{') {
      drop_close.push_back(false);
      out += c;
      ++i;
      continue;
    }
    if (c == '}') {
      bool drop = false;
      if (!drop_close.empty()) {
        drop = drop_close.back();
        drop_close.pop_back();
      }
      if (!drop) out += c;
      ++i;
      continue;
    }
    if (c == '$') {
      ++i;
      continue;
    }
    if (c == '&') {
      if (i + 1 < in.size() && in[i + 1] == '&') {
        out += "&&";
        i += 2;
      } else {
        ++i;  // alignment marker
      }
      continue;
    }
    bool replaced = false;
    for (const auto& [from, to] : unicode()) {
      if (in.substr(i, from.size()) == from) {
        out += to;
        i += from.size();
        replaced = true;
        break;
      }
    }
    if (replaced) continue;
    out += c;
    ++i;
  }
  static const std::regex label(R"(P_(?:\{\s*(\d+)\s*\}|(\d+)))");
  return std::regex_replace(out, label, "P$1$2");
}

Interval parse_interval(std::string_view text) {
  std::string norm = normalize_math(text);
  Cursor c{norm};
  Interval v = interval(c);
  if (!c.at_end()) c.fail("trailing text after interval");
  return v;
}

AbstractState parse_state(std::string_view text, const UniversePtr& u) {
  std::string norm = normalize_math(text);
  Cursor c{norm};
  if (c.eat_word("bot") && c.at_end()) return AbstractState::bottom(u);
  c.i = 0;
  if (c.eat_word("top") && c.at_end()) return AbstractState::top(u);
  c.i = 0;
  if (!c.eat("{")) c.fail("expected '{'");
  std::vector<std::optional<Interval>> values(u->size());
  while (!c.eat("}")) {
    std::string name = c.ident();
    auto it = std::find(u->begin(), u->end(), name);
    if (it == u->end()) c.fail("unknown variable '" + name + "'");
    if (!c.eat(":") && !c.eat("↦") && !c.eat("->") && !c.eat("=") &&
        !c.eat("∈"))
      c.fail("expected ':' after '" + name + "'");
    auto& slot = values[static_cast<std::size_t>(it - u->begin())];
    if (slot) c.fail("variable '" + name + "' given twice");
    slot = interval(c);
    if (!c.eat(",")) c.eat(";");
    if (c.at_end()) c.fail("expected '}'");
  }
  if (!c.at_end()) c.fail("trailing text after state");
  std::vector<Interval> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) c.fail("missing variable '" + (*u)[i] + "'");
    out.push_back(*values[i]);
  }
  return AbstractState::from(u, std::move(out));
}

}  // namespace absint
