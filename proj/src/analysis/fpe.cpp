#include "absint/analysis/fpe.hpp"

#include "absint/domain/parse.hpp"
#include "absint/imp/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <type_traits>

namespace absint {

TermPtr const_term(AbstractState s) {
  return std::make_shared<const Term>(Term{Term::Const{std::move(s)}});
}
TermPtr ref(Location l) { return std::make_shared<const Term>(Term{Term::Ref{l}}); }
TermPtr interpret_term(CmdPtr stmt, TermPtr arg) {
  return std::make_shared<const Term>(
      Term{Term::Interpret{std::move(stmt), std::move(arg)}});
}
TermPtr filter_term(BoolPtr guard, TermPtr arg) {
  return std::make_shared<const Term>(
      Term{Term::Filter{std::move(guard), std::move(arg)}});
}
TermPtr join_term(TermPtr lhs, TermPtr rhs) {
  return std::make_shared<const Term>(Term{Term::Join{std::move(lhs), std::move(rhs)}});
}

bool operator==(const Term& a, const Term& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Term::Const>) {
          return x.state == y.state;
        } else if constexpr (std::is_same_v<T, Term::Ref>) {
          return x.loc == y.loc;
        } else if constexpr (std::is_same_v<T, Term::Interpret>) {
          return *x.stmt == *y.stmt && *x.arg == *y.arg;
        } else if constexpr (std::is_same_v<T, Term::Filter>) {
          return *x.guard == *y.guard && *x.arg == *y.arg;
        } else {
          return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
        }
      },
      a.node);
}

bool operator==(const FixpointEquation& a, const FixpointEquation& b) {
  return a.location == b.location && *a.rhs == *b.rhs;
}

// ---------------------------------------------------------------------------
// derivation

namespace {

class Deriver {
 public:
  explicit Deriver(const AnnotatedProgram& p) : p_(p) {
    eqs_.resize(p.location_count());
  }

  std::vector<FixpointEquation> run() {
    set(Location{0}, const_term(AbstractState::top(p_.universe())));
    block(p_.root(), Location{0});
    return std::move(eqs_);
  }

 private:
  void set(Location l, TermPtr t) { eqs_[l.index] = {l, std::move(t)}; }

  Location block(const CmdPtr& c, Location before) {
    for (const auto& s : flatten(c)) before = stmt(s, before);
    return before;
  }

  Location stmt(const CmdPtr& cp, Location before) {
    const Cmd& c = *cp;
    const auto& pl = p_.placement(c);
    if (const auto* i = std::get_if<Cmd::If>(&c.node)) {
      set(pl.then_entry, filter_term(i->guard, ref(before)));
      Location t = block(i->then_branch, pl.then_entry);
      set(pl.else_entry, filter_term(negate_guard(i->guard), ref(before)));
      Location e = block(i->else_branch, pl.else_entry);
      set(pl.after, join_term(ref(t), ref(e)));
      return pl.after;
    }
    if (const auto* w = std::get_if<Cmd::While>(&c.node)) {
      Location exit = block(w->body, pl.head);
      auto merged = join_term(ref(before), ref(exit));
      set(pl.head, filter_term(w->guard, merged));
      set(pl.after, filter_term(negate_guard(w->guard), merged));
      return pl.after;
    }
    set(pl.after, interpret_term(cp, ref(before)));
    return pl.after;
  }

  const AnnotatedProgram& p_;
  std::vector<FixpointEquation> eqs_;
};

void collect_refs(const Term& t, std::set<Location>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Term::Ref>) {
          out.insert(x.loc);
        } else if constexpr (std::is_same_v<T, Term::Interpret> ||
                             std::is_same_v<T, Term::Filter>) {
          collect_refs(*x.arg, out);
        } else if constexpr (std::is_same_v<T, Term::Join>) {
          collect_refs(*x.lhs, out);
          collect_refs(*x.rhs, out);
        }
      },
      t.node);
}

}  // namespace

std::set<Location> references(const Term& t) {
  std::set<Location> out;
  collect_refs(t, out);
  return out;
}

std::map<Location, std::set<Location>> dependencies(
    const std::vector<FixpointEquation>& eqs) {
  std::map<Location, std::set<Location>> deps;
  for (const auto& e : eqs) {
    deps[e.location];
    for (auto l : references(*e.rhs)) deps[l].insert(e.location);
  }
  return deps;
}

EquationSystem derive_fpes(const AnnotatedProgram& p) {
  EquationSystem sys;
  sys.universe = p.universe();
  sys.equations = Deriver(p).run();
  sys.deps = dependencies(sys.equations);
  for (std::size_t i = 0; i < p.location_count(); ++i)
    if (p.is_loop_head(Location{i})) sys.loop_heads.insert(Location{i});
  return sys;
}

AbstractState evaluate(const Term& t, const InvariantMap& m) {
  return std::visit(
      [&](const auto& x) -> AbstractState {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Term::Const>) {
          return x.state;
        } else if constexpr (std::is_same_v<T, Term::Ref>) {
          const auto& s = m.find(x.loc);
          return s ? *s : AbstractState::bottom(m.universe());
        } else if constexpr (std::is_same_v<T, Term::Interpret>) {
          return interpret_atom(evaluate(*x.arg, m), *x.stmt);
        } else if constexpr (std::is_same_v<T, Term::Filter>) {
          return filter(evaluate(*x.arg, m), *x.guard);
        } else {
          return state_join(evaluate(*x.lhs, m), evaluate(*x.rhs, m));
        }
      },
      t.node);
}

// ---------------------------------------------------------------------------
// normalization

namespace {

BoolPtr orient(const BoolExpr::Cmp& c) {
  bool lhs_var = std::holds_alternative<Expr::Var>(c.lhs->node);
  bool rhs_var = std::holds_alternative<Expr::Var>(c.rhs->node);
  if (!lhs_var && rhs_var) return cmp(flip(c.op), c.rhs, c.lhs);
  return cmp(c.op, c.lhs, c.rhs);
}

BoolPtr normalize_guard(const BoolPtr& b) {
  return std::visit(
      [&](const auto& x) -> BoolPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          return orient(x);
        } else if constexpr (std::is_same_v<T, BoolExpr::And>) {
          return conj(normalize_guard(x.lhs), normalize_guard(x.rhs));
        } else if constexpr (std::is_same_v<T, BoolExpr::Or>) {
          return disj(normalize_guard(x.lhs), normalize_guard(x.rhs));
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          const auto* c = std::get_if<BoolExpr::Cmp>(&x.operand->node);
          if (c && c->op == CmpOp::eq) return negate(orient(*c));
          return normalize_guard(negate_guard(x.operand));
        } else {
          return b;
        }
      },
      b->node);
}

void join_operands(const TermPtr& t, std::vector<TermPtr>& out) {
  if (const auto* j = std::get_if<Term::Join>(&t->node)) {
    join_operands(j->lhs, out);
    join_operands(j->rhs, out);
  } else {
    out.push_back(t);
  }
}

}  // namespace

TermPtr normalize(const TermPtr& t) {
  return std::visit(
      [&](const auto& x) -> TermPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Term::Interpret>) {
          return interpret_term(x.stmt, normalize(x.arg));
        } else if constexpr (std::is_same_v<T, Term::Filter>) {
          return filter_term(normalize_guard(x.guard), normalize(x.arg));
        } else if constexpr (std::is_same_v<T, Term::Join>) {
          std::vector<TermPtr> raw, ops;
          join_operands(t, raw);
          for (const auto& r : raw) join_operands(normalize(r), ops);
          auto key = [](const TermPtr& a) {
            const auto* r = std::get_if<Term::Ref>(&a->node);
            return std::make_tuple(r ? 0 : 1, r ? r->loc.index : 0,
                                   r ? std::string() : render(*a));
          };
          std::sort(ops.begin(), ops.end(),
                    [&](const auto& a, const auto& b) { return key(a) < key(b); });
          ops.erase(std::unique(ops.begin(), ops.end(),
                                [](const auto& a, const auto& b) { return *a == *b; }),
                    ops.end());
          TermPtr acc = ops.front();
          for (std::size_t i = 1; i < ops.size(); ++i) acc = join_term(acc, ops[i]);
          return acc;
        } else {
          return t;
        }
      },
      t->node);
}

FixpointEquation normalize_fpe(const FixpointEquation& e) {
  return {e.location, normalize(e.rhs)};
}

// ---------------------------------------------------------------------------
// rendering

std::string render(const Term& t, RenderStyle style) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Term::Const>) {
          return to_string(x.state, style);
        } else if constexpr (std::is_same_v<T, Term::Ref>) {
          return "M(" + to_string(x.loc) + ")";
        } else if constexpr (std::is_same_v<T, Term::Interpret>) {
          return "Interpret(" + render_atom(*x.stmt) + ", " + render(*x.arg, style) + ")";
        } else if constexpr (std::is_same_v<T, Term::Filter>) {
          return "Filter(" + render(*x.guard) + ", " + render(*x.arg, style) + ")";
        } else {
          std::string rhs = render(*x.rhs, style);
          if (std::holds_alternative<Term::Join>(x.rhs->node)) rhs = "(" + rhs + ")";
          return render(*x.lhs, style) + (style.unicode ? " ⊔ " : " U ") + rhs;
        }
      },
      t.node);
}

std::string render(const FixpointEquation& e, RenderStyle style) {
  return "F_" + std::to_string(e.location.index) + "(M) = " + render(*e.rhs, style);
}

std::string render(const EquationSystem& sys, RenderStyle style) {
  std::string out;
  for (const auto& e : sys.equations) out += render(e, style) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class TermParser {
 public:
  TermParser(std::string_view s, std::size_t offset, const UniversePtr& u)
      : s_(s), i_(offset), u_(u) {}

  TermPtr whole() {
    auto t = term();
    ws();
    while (i_ < s_.size() && std::string_view(".,;").find(s_[i_]) != std::string_view::npos)
      ++i_, ws();
    if (i_ < s_.size()) fail("unexpected text after equation");
    return t;
  }

 private:
  TermPtr term() {
    auto t = primary();
    while (join_op()) t = join_term(t, primary());
    return t;
  }

  bool join_op() {
    if (eat("⊔")) return true;
    std::size_t save = i_;
    if (eat_word("U") || eat_word("join")) return true;
    i_ = save;
    return false;
  }

  TermPtr primary() {
    ws();
    if (eat("(")) {
      auto t = term();
      expect(")");
      return t;
    }
    if (eat_keyword("Filter")) {
      expect("(");
      std::size_t at = i_;
      std::string text = until_comma();
      BoolPtr g = nested(at, [&] { return parse_guard(text); });
      expect(",");
      auto arg = term();
      expect(")");
      return filter_term(std::move(g), std::move(arg));
    }
    if (eat_keyword("Interpret")) {
      expect("(");
      std::size_t at = i_;
      std::string text = until_comma();
      CmdPtr a = nested(at, [&] { return atom(text); });
      expect(",");
      auto arg = term();
      expect(")");
      return interpret_term(std::move(a), std::move(arg));
    }
    if (eat_keyword("Join")) {
      expect("(");
      auto a = term();
      expect(",");
      auto b = term();
      expect(")");
      return join_term(std::move(a), std::move(b));
    }
    if (eat_word("bot")) return const_term(AbstractState::bottom(u_));
    if (eat_word("top")) return const_term(AbstractState::top(u_));
    if (peek_word("M")) {
      eat_word("M");
      expect("(");
      auto l = label();
      expect(")");
      projection();
      return ref(l);
    }
    if (peek("{")) {
      std::size_t save = i_;
      eat("{");
      ws();
      if (peek_label()) {
        auto l = label();
        if (eat("}")) {
          projection();
          return ref(l);
        }
      }
      i_ = save;
      return braces();
    }
    if (peek_label()) {
      auto l = label();
      projection();
      return ref(l);
    }
    fail("expected an equation term");
  }

  // "{x : [1, 2], y : bot}" or "{a : P3(a) ⊔ P5(a)}"
  TermPtr braces() {
    std::size_t start = i_;
    expect("{");
    std::vector<std::pair<std::string, std::size_t>> parts;  // text, offset
    int depth = 0;
    std::size_t part = i_;
    for (;; ++i_) {
      if (i_ >= s_.size()) fail("unbalanced '{'");
      char c = s_[i_];
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ']' && depth > 0) --depth;
      if (c == ')') {
        // "(-inf, 3)" style intervals close with ')'; either way leave one level
        if (depth > 0) --depth;
      }
      if (c == '}') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ',' && depth == 0) {
        parts.emplace_back(std::string(s_.substr(part, i_ - part)), part);
        part = i_ + 1;
      }
    }
    parts.emplace_back(std::string(s_.substr(part, i_ - part)), part);
    ++i_;
    std::string whole(s_.substr(start, i_ - start));

    bool all_values = true;
    std::vector<TermPtr> terms;
    for (const auto& [text, offset] : parts) {
      auto colon = text.find(':');
      if (colon == std::string::npos) {
        if (text.find_first_not_of(" \t") == std::string::npos) continue;
        throw ParseError("expected 'name : value'", 1, static_cast<int>(offset) + 1);
      }
      std::string value = text.substr(colon + 1);
      try {
        parse_interval(value);
        continue;
      } catch (const ParseError&) {
        all_values = false;
      }
      TermParser sub(value, 0, u_);
      terms.push_back(sub.whole());
    }
    if (all_values) {
      try {
        return const_term(parse_state(whole, u_));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), 1, static_cast<int>(start) + e.column());
      }
    }
    if (terms.size() != parts.size())
      fail("state mixes constant intervals and equation terms");
    for (const auto& t : terms)
      if (!(*t == *terms.front()))
        fail("per-variable equations with different right-hand sides");
    return terms.front();
  }

  CmdPtr atom(const std::string& text) {
    try {
      return parse_atom(text);
    } catch (const ParseError&) {
      // "x = x + 1"
      auto eq = text.find('=');
      if (eq == std::string::npos || text.find(":=") != std::string::npos) throw;
      return parse_atom(text.substr(0, eq) + ":=" + text.substr(eq + 1));
    }
  }

  template <typename F>
  std::invoke_result_t<F> nested(std::size_t at, F f) {
    try {
      return f();
    } catch (const ParseError& e) {
      throw ParseError(e.what(), 1, static_cast<int>(at) + e.column());
    }
  }

  std::string until_comma() {
    int depth = 0;
    std::size_t start = i_;
    for (; i_ < s_.size(); ++i_) {
      char c = s_[i_];
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ',' && depth == 0) break;
    }
    if (i_ >= s_.size()) fail("expected ','");
    return std::string(s_.substr(start, i_ - start));
  }

  // P3(a): the projection to one variable is dropped
  void projection() {
    std::size_t save = i_;
    if (eat("(")) {
      ws();
      std::size_t j = i_;
      while (j < s_.size() && ident_char(s_[j])) ++j;
      std::string name(s_.substr(i_, j - i_));
      i_ = j;
      if (!name.empty() && std::find(u_->begin(), u_->end(), name) != u_->end() &&
          eat(")"))
        return;
    }
    i_ = save;
  }

  bool peek_label() {
    ws();
    bool brace = i_ < s_.size() && s_[i_] == '{';
    std::size_t j = i_ + (brace ? 1 : 0);
    while (j < s_.size() && s_[j] == ' ') ++j;
    return j + 1 < s_.size() && s_[j] == 'P' &&
           std::isdigit(static_cast<unsigned char>(s_[j + 1]));
  }

  Location label() {
    ws();
    bool brace = eat("{");
    ws();
    if (!eat("P")) fail("expected a location label");
    std::size_t j = i_;
    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    if (j == i_) fail("expected a location number");
    Location l{std::stoul(std::string(s_.substr(i_, j - i_)))};
    i_ = j;
    if (brace) expect("}");
    return l;
  }

  void ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(std::string_view tok) {
    ws();
    return s_.substr(i_, tok.size()) == tok;
  }
  bool eat(std::string_view tok) {
    if (!peek(tok)) return false;
    i_ += tok.size();
    return true;
  }
  bool peek_word(std::string_view w) {
    if (!peek(w)) return false;
    return i_ + w.size() >= s_.size() || !ident_char(s_[i_ + w.size()]);
  }
  bool eat_word(std::string_view w) {
    if (!peek_word(w)) return false;
    i_ += w.size();
    return true;
  }
  bool eat_keyword(std::string_view w) {
    ws();
    if (s_.size() - i_ < w.size()) return false;
    for (std::size_t k = 0; k < w.size(); ++k)
      if (std::tolower(static_cast<unsigned char>(s_[i_ + k])) !=
          std::tolower(static_cast<unsigned char>(w[k])))
        return false;
    if (i_ + w.size() < s_.size() && ident_char(s_[i_ + w.size()])) return false;
    i_ += w.size();
    return true;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, 1, static_cast<int>(i_) + 1);
  }

  std::string_view s_;
  std::size_t i_;
  const UniversePtr& u_;
};

const std::regex& lhs_pattern() {
  static const std::regex re(
      R"(^\s*(?:[-*]\s+|\d+[.)]\s+)?(?:F_?\{?(\d+)\}?\s*(?:\(\s*M\s*\))?|M\s*\(\s*\{?\s*P(\d+)\s*\}?\s*\)|\{\s*P(\d+)\s*\}|P(\d+))\s*=)");
  return re;
}

}  // namespace

FixpointEquation parse_fpe(std::string_view text, const UniversePtr& u) {
  std::string norm = normalize_math(text);
  std::smatch m;
  if (!std::regex_search(norm, m, lhs_pattern()))
    throw ParseError("expected an equation such as 'F_1(M) = ...'", 1, 1);
  std::size_t index = 0;
  for (int g = 1; g <= 4; ++g)
    if (m[g].matched) index = std::stoul(m[g].str());
  TermParser p(norm, static_cast<std::size_t>(m.length(0)), u);
  return {Location{index}, p.whole()};
}

std::vector<FixpointEquation> parse_fpe_system(std::string_view text,
                                               const UniversePtr& u,
                                               std::vector<std::string>* errors) {
  std::string norm = normalize_math(text);
  std::vector<FixpointEquation> out;
  std::size_t pos = 0;
  while (pos <= norm.size()) {
    auto nl = norm.find('\n', pos);
    if (nl == std::string::npos) nl = norm.size();
    std::string line = norm.substr(pos, nl - pos);
    pos = nl + 1;
    if (!std::regex_search(line, lhs_pattern())) continue;
    FixpointEquation e;
    try {
      e = parse_fpe(line, u);
    } catch (const std::exception& err) {
      if (!errors) throw;
      errors->push_back(std::string(err.what()) + " in: " + line);
      continue;
    }
    bool seen = std::any_of(out.begin(), out.end(),
                            [&](const auto& x) { return x.location == e.location; });
    if (!seen) out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.location < b.location; });
  return out;
}

}  // namespace absint
