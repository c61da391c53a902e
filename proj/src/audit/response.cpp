#include "absint/audit/response.hpp"

#include "absint/domain/parse.hpp"
#include "absint/imp/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace absint {

const char* to_string(StepOp op) {
  switch (op) {
    case StepOp::interpret: return "interpret";
    case StepOp::filter: return "filter";
    case StepOp::join: return "join";
    case StepOp::widen: return "widen";
    case StepOp::meet: return "meet";
    case StepOp::fixpoint_claim: return "fixpoint_claim";
    case StepOp::worklist_update: return "worklist_update";
    case StepOp::location_claim: return "location_claim";
  }
  return "?";
}

namespace {

using std::regex;
constexpr auto icase = std::regex::ECMAScript | std::regex::icase;

// Response text with every brace-delimited state (and bare "bot") replaced by "\x01k\x02",
// k indexing tokens. Keeps the patterns free of unbounded wildcards.
struct Skeleton {
  std::string text;
  std::vector<std::size_t> to_norm;  // skeleton offset -> normalized offset
  struct Token {
    std::optional<AbstractState> state;  // nullopt: looked like a state, did not parse
  };
  std::vector<Token> tokens;

  Span span(std::size_t pos, std::size_t len) const { return {to_norm[pos], to_norm[pos + len]}; }
};

bool looks_like_state(const std::string& s) {
  return s.find(':') != std::string::npos && s.find('[') != std::string::npos;
}

Skeleton build_skeleton(const std::string& norm, const UniversePtr& u) {
  Skeleton sk;
  sk.text.reserve(norm.size());
  for (std::size_t i = 0; i < norm.size();) {
    if (norm[i] == '{') {
      int depth = 0;
      std::size_t j = i;
      for (; j < norm.size() && j - i < 2000; ++j) {
        if (norm[j] == '{') ++depth;
        if (norm[j] == '}' && --depth == 0) break;
      }
      if (j < norm.size() && depth == 0) {
        std::string cand = norm.substr(i, j - i + 1);
        std::optional<Skeleton::Token> tok;
        try {
          tok = Skeleton::Token{parse_state(cand, u)};
        } catch (const std::exception&) {
          if (looks_like_state(cand) && cand.find("{P") == std::string::npos)
            tok = Skeleton::Token{std::nullopt};
        }
        if (tok) {
          std::string ph = "\x01" + std::to_string(sk.tokens.size()) + "\x02";
          sk.tokens.push_back(std::move(*tok));
          sk.text += ph;
          sk.to_norm.insert(sk.to_norm.end(), ph.size(), i);
          i = j + 1;
          continue;
        }
      }
    }
    auto word = [&](std::size_t k) {
      return k < norm.size() && (std::isalnum(static_cast<unsigned char>(norm[k])) || norm[k] == '_');
    };
    if (norm.compare(i, 3, "bot") == 0 && !(i > 0 && word(i - 1)) && !word(i + 3)) {
      std::string ph = "\x01" + std::to_string(sk.tokens.size()) + "\x02";
      sk.tokens.push_back(Skeleton::Token{AbstractState::bottom(u)});
      sk.text += ph;
      sk.to_norm.insert(sk.to_norm.end(), ph.size(), i);
      i += 3;
      continue;
    }
    sk.text += norm[i];
    sk.to_norm.push_back(i);
    ++i;
  }
  sk.to_norm.push_back(norm.size());
  return sk;
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

enum Kind {
  k_iter_input,
  k_input,
  k_atom_line,
  k_filter_pending,
  k_resulting,
  k_filter_state,
  k_filter_explicit,
  k_interpret_explicit,
  k_join_explicit,
  k_widen_explicit,
  k_meet_explicit,
  k_branch_out,
  k_join_result,
  k_loc_claim,
  k_fix_neg,
  k_fix_pos,
  k_pick,
  k_m_is,
  k_widen_s,
  k_widen_ms,
  k_update,
  k_unchanged,
  k_changed,
  k_add,
  k_loose,
};

struct Pattern {
  Kind kind;
  regex re;
};

const std::vector<Pattern>& patterns() {
  static const std::vector<Pattern> ps = [] {
    const std::string S = "\\x01(\\d+)\\x02";
    const std::string I = "\\[[^\\]\\n\\x01]*\\]";
    std::vector<Pattern> v;
    auto add = [&](Kind k, const std::string& re) { v.push_back({k, regex(re, icase)}); };
    add(k_iter_input, "input abstract state to this iteration is\\s*" + S);
    add(k_input, "input abstract state(?: \\(iteration \\d+\\))? is\\s*" + S);
    add(k_atom_line, "\\binterpret(?:ing)?\\s+([a-z_]\\w*\\s*:?=\\s*[^;\\n\\x01]+?|skip)\\s*;");
    add(k_filter_pending, "filter the input state by ([^.\\n\\x01]+)\\.");
    add(k_resulting, "resulting abstract state is\\s*" + S);
    add(k_filter_state, "filtering the state by ([^\\n\\x01]+?)\\s+results in(?: the abstract state)?\\s*" + S);
    add(k_filter_explicit, "filtering\\s*" + S + "\\s*by ([^\\n\\x01]+?)\\s+results in\\s*" + S);
    add(k_interpret_explicit, "interpreting\\s+([^\\n\\x01]+?)\\s+on\\s*" + S + "\\s*results in\\s*" + S);
    add(k_join_explicit, S + "((?:\\s*(?:⊔|\\bU\\b|\\bjoin\\b|\\bjoined with\\b)\\s*" + S + ")+)\\s*(?:=|results in|is)\\s*" + S);
    add(k_widen_explicit, S + "\\s*(?:∇|\\bnabla\\b|\\bwidened (?:with|by)\\b)\\s*" + S + "\\s*(?:=|results in|is)\\s*" + S);
    add(k_meet_explicit, S + "\\s*(?:⊓|\\bmeet\\b)\\s*" + S + "\\s*(?:=|results in|is)\\s*" + S);
    add(k_branch_out, "output of interpreting the (then|else)-branch is\\s*" + S);
    add(k_join_result, "result of joining the two states is\\s*" + S);
    add(k_loc_claim, "abstract state at \\{P(\\d+)\\} is\\s*" + S);
    add(k_fix_neg, "not (?:yet )?(?:at|reached|reach|a) (?:a )?fixed[ -]?point");
    add(k_fix_pos, "(?:we are|we're|are now|is) at a fixed[ -]?point|reached a fixed[ -]?point|fixed[ -]?point (?:is|has been) reached");
    add(k_pick, "\\bpick \\{P(\\d+)\\}");
    add(k_m_is, "M\\(\\{P(\\d+)\\}\\) is\\s*" + S);
    add(k_widen_s, "widen M\\(\\{P(\\d+)\\}\\) by S\\s*=\\s*" + S);
    add(k_widen_ms, "M\\(\\{P(\\d+)\\}\\)\\s*(?:∇|\\bnabla\\b)\\s*S\\s*(?:results in|=)\\s*" + S);
    add(k_update, "\\bupdate M\\(\\{P(\\d+)\\}\\)\\s*(?:to|=|with)\\s*" + S);
    add(k_unchanged, "M\\(\\{P(\\d+)\\}\\) has not changed");
    add(k_changed, "M\\(\\{P(\\d+)\\}\\) has changed");
    add(k_add, "\\badd ((?:\\{P\\d+\\}(?:\\s*,\\s*(?:and\\s+)?|\\s+and\\s+)?)+) to W\\b");
    add(k_loose, "\\b(?:so|thus|therefore|hence),?\\s+([a-z_]\\w*) is (?:in )?(" + I +
                     ")((?:,?\\s*(?:and\\s+)?[a-z_]\\w* is (?:in )?" + I + ")*)");
    return v;
  }();
  return ps;
}

struct Event {
  std::size_t pos, len;
  Kind kind;
  std::vector<std::string> groups;  // 1-based captures, "" when unmatched
};

class StepBuilder {
 public:
  StepBuilder(const Skeleton& sk, const AnnotatedProgram& p, ParsedResponse& out)
      : sk_(sk), p_(p), out_(out) {}

  void run(std::vector<Event> evs) {
    std::stable_sort(evs.begin(), evs.end(), [](const Event& a, const Event& b) {
      return a.pos != b.pos ? a.pos < b.pos : a.kind < b.kind;
    });
    // a negated fixpoint phrase hides the positive phrase inside it
    std::vector<std::pair<std::size_t, std::size_t>> neg;
    for (const auto& e : evs)
      if (e.kind == k_fix_neg) neg.emplace_back(e.pos, e.pos + e.len);
    for (const auto& e : evs) {
      if (e.kind == k_fix_pos &&
          std::any_of(neg.begin(), neg.end(), [&](auto r) { return e.pos < r.second && r.first < e.pos + e.len; }))
        continue;
      handle(e);
    }
  }

 private:
  using Tok = std::optional<std::size_t>;

  static std::size_t num(const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); }

  std::optional<AbstractState> state(Tok t) const {
    if (!t || *t >= sk_.tokens.size()) return std::nullopt;
    return sk_.tokens[*t].state;
  }

  ClaimedStep& push(StepOp op, std::size_t pos, std::size_t end, Tok out_tok) {
    ClaimedStep s;
    s.op = op;
    s.span = sk_.span(pos, end - pos);
    if (out_tok) {
      s.output = state(out_tok);
      s.output_malformed = !s.output;
    }
    out_.steps.push_back(std::move(s));
    return out_.steps.back();
  }

  std::optional<Location> loc(const std::string& g) {
    auto k = num(g);
    if (k >= p_.location_count()) {
      out_.diagnostics.push_back("reference to unknown location {P" + g + "}");
      return std::nullopt;
    }
    return Location{k};
  }

  void handle(const Event& e) {
    const auto& g = e.groups;
    std::size_t end = e.pos + e.len;
    switch (e.kind) {
      case k_iter_input:
        iter_input_ = num(g[1]);
        input_ = iter_input_;
        last_widen_.reset();
        break;
      case k_input:
        input_ = num(g[1]);
        break;
      case k_atom_line:
        pending_ = Pending{false, trim(g[1]), e.pos};
        break;
      case k_filter_pending:
        pending_ = Pending{true, trim(g[1]), e.pos};
        break;
      case k_resulting: {
        if (!pending_) break;
        auto& s = push(pending_->guard ? StepOp::filter : StepOp::interpret, pending_->pos, end,
                       num(g[1]));
        s.subject = pending_->text;
        s.inputs = {state(input_)};
        pending_.reset();
        break;
      }
      case k_filter_state: {
        auto& s = push(StepOp::filter, e.pos, end, num(g[2]));
        s.subject = trim(g[1]);
        s.inputs = {state(input_)};
        pending_.reset();
        break;
      }
      case k_filter_explicit: {
        auto& s = push(StepOp::filter, e.pos, end, num(g[3]));
        s.subject = trim(g[2]);
        s.inputs = {state(num(g[1]))};
        pending_.reset();
        break;
      }
      case k_interpret_explicit: {
        auto& s = push(StepOp::interpret, e.pos, end, num(g[3]));
        s.subject = trim(g[1]);
        s.inputs = {state(num(g[2]))};
        pending_.reset();
        break;
      }
      case k_join_explicit: {
        auto& s = push(StepOp::join, e.pos, end, num(g[g.size() - 1]));
        s.inputs = {state(num(g[1]))};
        static const regex tok("\\x01(\\d+)\\x02");
        for (std::sregex_iterator it(g[2].begin(), g[2].end(), tok), stop; it != stop; ++it)
          s.inputs.push_back(state(num((*it)[1])));
        break;
      }
      case k_widen_explicit: {
        auto& s = push(StepOp::widen, e.pos, end, num(g[3]));
        s.inputs = {state(num(g[1])), state(num(g[2]))};
        last_widen_ = out_.steps.size() - 1;
        break;
      }
      case k_meet_explicit: {
        auto& s = push(StepOp::meet, e.pos, end, num(g[3]));
        s.inputs = {state(num(g[1])), state(num(g[2]))};
        break;
      }
      case k_branch_out:
        (g[1] == "then" || g[1] == "Then" ? then_out_ : else_out_) = num(g[2]);
        break;
      case k_join_result: {
        auto& s = push(StepOp::join, e.pos, end, num(g[1]));
        s.inputs = {state(then_out_), state(else_out_)};
        break;
      }
      case k_loc_claim: {
        auto l = loc(g[1]);
        if (!l) break;
        auto& s = push(StepOp::location_claim, e.pos, end, num(g[2]));
        s.location = l;
        break;
      }
      case k_fix_neg:
      case k_fix_pos: {
        if (current_) {
          // worklist phrasing is handled by changed/unchanged
          break;
        }
        auto& s = push(StepOp::fixpoint_claim, e.pos, end, std::nullopt);
        s.subject = e.kind == k_fix_pos ? "fixpoint" : "not_fixpoint";
        s.inputs = {state(iter_input_)};
        s.related = last_widen_;
        if (last_widen_) s.output = out_.steps[*last_widen_].output;
        break;
      }
      case k_pick:
        current_ = loc(g[1]);
        last_update_.reset();
        break;
      case k_m_is:
        if (auto l = loc(g[1])) before_[l->index] = num(g[2]);
        break;
      case k_widen_s:
        widen_s_ = num(g[2]);
        break;
      case k_widen_ms: {
        auto l = loc(g[1]);
        if (!l) break;
        auto& s = push(StepOp::widen, e.pos, end, num(g[2]));
        auto it = before_.find(l->index);
        s.inputs = {it == before_.end() ? std::nullopt : state(it->second), state(widen_s_)};
        s.location = l;
        break;
      }
      case k_update: {
        auto l = loc(g[1]);
        if (!l) break;
        auto& s = push(StepOp::worklist_update, e.pos, end, num(g[2]));
        s.location = l;
        last_update_ = out_.steps.size() - 1;
        claimed_since_update_ = false;
        break;
      }
      case k_unchanged:
      case k_changed: {
        auto l = loc(g[1]);
        if (!l) break;
        auto& s = push(StepOp::fixpoint_claim, e.pos, end, std::nullopt);
        s.subject = e.kind == k_unchanged ? "unchanged" : "changed";
        s.location = l;
        s.related = last_update_ && out_.steps[*last_update_].location == l ? last_update_ : std::nullopt;
        claimed_since_update_ = true;
        break;
      }
      case k_add: {
        if (!last_update_ || claimed_since_update_) break;
        auto l = out_.steps[*last_update_].location;
        auto& s = push(StepOp::fixpoint_claim, e.pos, end, std::nullopt);
        s.subject = "changed";
        s.location = l;
        s.related = last_update_;
        s.implicit = true;
        claimed_since_update_ = true;
        break;
      }
      case k_loose: {
        static const regex pair("([A-Za-z_]\\w*) is (?:in )?(\\[[^\\]\\n]*\\])");
        std::map<std::string, Interval> part;
        std::string all = g[1] + " is " + g[2] + g[3];
        bool ok = true;
        for (std::sregex_iterator it(all.begin(), all.end(), pair), stop; it != stop; ++it) {
          std::string name = (*it)[1];
          const auto& vars = p_.variables();
          if (!std::binary_search(vars.begin(), vars.end(), name)) {
            ok = false;
            break;
          }
          try {
            part[name] = parse_interval((*it)[2].str());
          } catch (const std::exception&) {
            ok = false;
            break;
          }
        }
        if (!ok || part.empty()) break;
        auto& s = push(StepOp::location_claim, e.pos, end, std::nullopt);
        s.loose = true;
        s.partial = std::move(part);
        break;
      }
    }
  }

  struct Pending {
    bool guard;
    std::string text;
    std::size_t pos;
  };

  const Skeleton& sk_;
  const AnnotatedProgram& p_;
  ParsedResponse& out_;
  Tok input_, iter_input_, then_out_, else_out_, widen_s_;
  std::optional<std::size_t> last_widen_, last_update_;
  std::optional<Pending> pending_;
  std::optional<Location> current_;
  std::map<std::size_t, std::size_t> before_;
  bool claimed_since_update_ = false;
};

const regex& entry_pattern() {
  static const regex re(
      "^\\s*(?:[-*•]\\s*)?(?:M\\s*\\(\\s*\\{?\\s*P(\\d+)\\s*\\}?\\s*\\)|\\{\\s*P(\\d+)\\s*\\}|P(\\d+))"
      "\\s*(?:↦|\\|->|->|=|:)\\s*(.*?)\\s*[,.;]?\\s*$");
  return re;
}

std::vector<std::string> lines_of(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto nl = s.find('\n', pos);
    if (nl == std::string_view::npos) nl = s.size();
    out.emplace_back(s.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

bool filler(const std::string& line) {
  auto t = trim(line);
  return t.empty() || t.find_first_not_of("`:") == std::string::npos;
}

// Entries right after an answer marker; nullopt when nothing parses.
std::optional<InvariantMap> answer_block(std::string_view after, const AnnotatedProgram& p,
                                         std::vector<std::string>& diags) {
  InvariantMap m(p.universe(), p.location_count());
  std::size_t entries = 0, skipped = 0;
  for (const auto& line : lines_of(after)) {
    std::smatch mt;
    if (!std::regex_match(line, mt, entry_pattern())) {
      if (filler(line)) continue;
      if (entries > 0 || ++skipped > 2) break;
      continue;
    }
    std::string idx = mt[1].matched ? mt[1].str() : mt[2].matched ? mt[2].str() : mt[3].str();
    auto k = static_cast<std::size_t>(std::stoull(idx));
    if (k >= p.location_count()) {
      diags.push_back("answer names unknown location {P" + idx + "}");
      continue;
    }
    try {
      auto s = parse_state(mt[4].str(), p.universe());
      if (m.has(Location{k})) diags.push_back("answer lists {P" + idx + "} twice; the later entry wins");
      m.set(Location{k}, std::move(s));
      ++entries;
    } catch (const std::exception& ex) {
      diags.push_back("answer entry for {P" + idx + "} does not parse: " + ex.what());
    }
  }
  if (entries == 0) return std::nullopt;
  return m;
}

}  // namespace

ParsedResponse parse_response(std::string_view text, Strategy strategy, const AnnotatedProgram& p) {
  ParsedResponse out;
  out.normalized = normalize_math(text);
  const std::string& norm = out.normalized;

  static const regex marker("the answer is|finished the analysis and M is|final (?:invariant )?map is", icase);
  std::vector<std::pair<std::size_t, std::size_t>> marks;
  for (std::sregex_iterator it(norm.begin(), norm.end(), marker), stop; it != stop; ++it)
    marks.emplace_back(it->position(), it->position() + it->length());
  for (auto it = marks.rbegin(); it != marks.rend() && !out.final_map; ++it) {
    std::vector<std::string> diags;
    auto rest = std::string_view(norm).substr(it->second);
    if (auto nl = rest.find('\n'); nl != std::string_view::npos && trim(std::string(rest.substr(0, nl))).empty())
      rest = rest.substr(nl + 1);
    out.final_map = answer_block(rest, p, diags);
    if (out.final_map) {
      out.diagnostics.insert(out.diagnostics.end(), diags.begin(), diags.end());
      if (!out.final_map->complete())
        out.diagnostics.push_back("answer block does not cover every location");
    }
  }
  if (!out.final_map)
    out.diagnostics.push_back(marks.empty() ? "no answer block found"
                                            : "no answer block parsed");

  if (strategy == Strategy::transitional) {
    static const regex phase("solve the fixed point equations|\\binitially\\b", icase);
    std::vector<std::size_t> cuts;
    for (std::sregex_iterator it(norm.begin(), norm.end(), phase), stop; it != stop; ++it)
      cuts.push_back(it->position());
    cuts.push_back(norm.size());
    for (auto cut : cuts) {
      std::vector<std::string> errs;
      auto eqs = parse_fpe_system(std::string_view(norm).substr(0, cut), p.universe(), &errs);
      std::erase_if(eqs, [&](const FixpointEquation& e) {
        if (e.location.index < p.location_count()) return false;
        errs.push_back("equation for unknown location " + to_string(e.location));
        return true;
      });
      if (eqs.empty()) continue;
      for (auto& e : errs) out.diagnostics.push_back("equation skipped: " + e);
      out.fpes = std::move(eqs);
      break;
    }
    if (!out.fpes) out.diagnostics.push_back("no fixpoint equations found");
  }

  auto sk = build_skeleton(norm, p.universe());
  std::vector<Event> evs;
  for (const auto& pat : patterns()) {
    for (std::sregex_iterator it(sk.text.begin(), sk.text.end(), pat.re), stop; it != stop; ++it) {
      Event e{static_cast<std::size_t>(it->position()), static_cast<std::size_t>(it->length()),
              pat.kind, {}};
      for (std::size_t i = 0; i < it->size(); ++i) e.groups.push_back((*it)[i].str());
      evs.push_back(std::move(e));
    }
  }
  StepBuilder(sk, p, out).run(std::move(evs));
  return out;
}

}  // namespace absint
