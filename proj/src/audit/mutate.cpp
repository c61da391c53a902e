#include "absint/audit/mutate.hpp"

#include "absint/analysis/compositional.hpp"
#include "absint/analysis/transitional.hpp"
#include "absint/imp/syntax.hpp"

#include <algorithm>
#include <functional>

namespace absint {

std::optional<AbstractState> perturb(const AbstractState& s) {
  if (s.is_bottom() || s.size() == 0) return std::nullopt;
  std::vector<Interval> v;
  for (std::size_t i = 0; i < s.size(); ++i) v.push_back(s[i]);
  for (auto& iv : v) {
    if (iv.hi().is_finite()) {
      iv = Interval::range(iv.lo(), Bound(iv.hi().value() + 1));
      return AbstractState::from(s.universe(), std::move(v));
    }
    if (iv.lo().is_finite()) {
      iv = Interval::range(Bound(iv.lo().value() - 1), iv.hi());
      return AbstractState::from(s.universe(), std::move(v));
    }
  }
  v[0] = Interval::constant(0);
  return AbstractState::from(s.universe(), std::move(v));
}

namespace {

using Trace = std::vector<TraceEvent>;

std::optional<Mutant> comp_mutant(const AnnotatedProgram& p, const CompositionalResult& ref,
                                  const std::string& kind, ErrorTag tag,
                                  const std::function<std::optional<std::string>(Trace&)>& edit) {
  CompositionalResult r = ref;
  auto site = edit(r.trace);
  if (!site) return std::nullopt;
  return Mutant{kind, Strategy::compositional, tag, *site, narrate(p, r)};
}

std::optional<Location> atom_source(const AnnotatedProgram& p, Location after) {
  for (const Cmd* c : p.statements()) {
    if (std::holds_alternative<Cmd::If>(c->node) || std::holds_alternative<Cmd::While>(c->node))
      continue;
    const auto& pl = p.placement(*c);
    if (pl.after == after) return pl.before;
  }
  return std::nullopt;
}

std::vector<Mutant> compositional_mutants(const AnnotatedProgram& p) {
  std::vector<Mutant> out;
  CompositionalResult ref;
  try {
    ref = run_compositional(p);
  } catch (const IterationBudgetExceeded&) {
    return out;
  }
  auto keep = [&](std::optional<Mutant> m) {
    if (m) out.push_back(std::move(*m));
  };

  // result of a statement recorded at the location before it
  keep(comp_mutant(p, ref, "back_propagation", ErrorTag::control_flow, [&](Trace& t) -> std::optional<std::string> {
    for (auto& e : t) {
      if (e.kind != EventKind::interpret_stmt) continue;
      auto src = atom_source(p, *e.location);
      if (!src) continue;
      std::string site = e.subject + " recorded at " + to_string(*src);
      e.location = src;
      return site;
    }
    return std::nullopt;
  }));

  // a widening result replaced by the iteration input, declared a fixpoint,
  // the remaining iterations dropped
  keep(comp_mutant(p, ref, "false_fixpoint", ErrorTag::fixpoint, [&](Trace& t) -> std::optional<std::string> {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i].kind != EventKind::fixpoint_check || t[i].reached) continue;
      std::size_t w = i;
      while (t[w].kind != EventKind::widen) --w;
      std::size_t depth = t[i].loop_depth - 1;
      std::size_t end = i + 1;
      while (!(t[end].kind == EventKind::loop_end && t[end].loop_depth == depth)) ++end;
      t[w].output = t[w].inputs[0];
      t[i].reached = true;
      t[i].inputs[1] = t[w].inputs[0];
      std::string site = "iteration " + std::to_string(t[i].iteration) + " of a loop at depth " +
                         std::to_string(depth);
      t.erase(t.begin() + static_cast<std::ptrdiff_t>(i + 1), t.begin() + static_cast<std::ptrdiff_t>(end));
      return site;
    }
    return std::nullopt;
  }));

  keep(comp_mutant(p, ref, "filter_inflation", ErrorTag::operation, [&](Trace& t) -> std::optional<std::string> {
    for (auto& e : t) {
      if (e.kind != EventKind::filter || *e.output == e.inputs[0]) continue;
      e.output = e.inputs[0];
      return "filter by " + e.subject + " at " + to_string(*e.location);
    }
    return std::nullopt;
  }));

  keep(comp_mutant(p, ref, "arithmetic_slip", ErrorTag::operation, [&](Trace& t) -> std::optional<std::string> {
    for (auto& e : t) {
      if (e.kind != EventKind::interpret_stmt) continue;
      auto off = perturb(*e.output);
      if (!off) continue;
      e.output = off;
      return e.subject + " at " + to_string(*e.location);
    }
    return std::nullopt;
  }));

  // A whole top-level loop replaced by a bare claim about its exit location
  // that nothing derives.
  {
    auto sys = derive_fpes(p);
    std::string text = narrate(p, ref);
    std::vector<const Placement*> loops;
    for (const Cmd* c : p.statements())
      if (std::holds_alternative<Cmd::While>(c->node)) loops.push_back(&p.placement(*c));
    for (const Placement* pl : loops) {
      bool nested = std::any_of(loops.begin(), loops.end(), [&](const Placement* o) {
        return o->head < pl->head && pl->after < o->after;
      });
      if (nested) continue;
      auto claims = InvariantMap::filled(p.universe(), p.location_count(),
                                         AbstractState::bottom(p.universe()));
      for (std::size_t l = 0; l < pl->head.index; ++l) claims.set(Location{l}, ref.map.at(Location{l}));
      AbstractState truth = ref.map.at(pl->after);
      if (evaluate(*sys.equations[pl->after.index].rhs, claims) == truth) continue;
      // the loop's lines run from the first "Interpret the while loop."
      // after its input was recorded to the exit filter line
      auto input = text.find("the abstract state at " + to_string(pl->before) + " is ");
      auto start = text.find("Interpret the while loop.", input);
      auto stop = text.find("the abstract state at " + to_string(pl->after) + " is ", start);
      if (input == std::string::npos || start == std::string::npos || stop == std::string::npos)
        continue;
      auto line_end = text.find('\n', stop);
      auto line_start = text.rfind('\n', start) + 1;
      std::string indent = text.substr(line_start, text.find_first_not_of(' ', line_start) - line_start);
      std::string repl = indent + "- So the abstract state at " + to_string(pl->after) + " is " +
                         to_string(truth) + ".";
      std::string m = text.substr(0, line_start) + repl + text.substr(line_end);
      out.push_back({"short_circuit", Strategy::compositional, ErrorTag::short_circuit,
                     "loop at " + to_string(pl->head), std::move(m)});
      break;
    }
  }
  return out;
}

// Text of step i's block in a worklist narration: [begin, end).
std::pair<std::size_t, std::size_t> pick_block(const std::string& text, std::size_t i) {
  std::size_t pos = 0;
  for (std::size_t k = 0; k <= i; ++k) pos = text.find("- Pick ", pos + (k ? 1 : 0));
  auto next = text.find("- Pick ", pos + 1);
  if (next == std::string::npos) next = text.find("\nThe worklist is empty", pos);
  return {pos, next};
}

std::string replace_once(std::string s, const std::string& from, const std::string& to,
                         std::size_t begin, std::size_t end) {
  auto at = s.find(from, begin);
  if (at == std::string::npos || at + from.size() > end) return {};
  return s.replace(at, from.size(), to);
}

std::string erase_line(std::string s, std::size_t at) {
  auto b = s.rfind('\n', at) + 1;
  auto e = s.find('\n', at);
  return s.erase(b, e - b + 1);
}

std::vector<Mutant> transitional_mutants(const AnnotatedProgram& p) {
  std::vector<Mutant> out;
  auto sys = derive_fpes(p);
  TransitionalResult ref;
  try {
    ref = solve_worklist(sys);
  } catch (const StepBudgetExceeded&) {
    return out;
  }
  std::string text = narrate(ref);

  // a join operand pointing at the wrong location, solved as written
  for (const auto& e : sys.equations) {
    const auto* j = std::get_if<Term::Join>(&e.rhs->node);
    const Term::Filter* f = nullptr;
    if (!j && (f = std::get_if<Term::Filter>(&e.rhs->node))) j = std::get_if<Term::Join>(&f->arg->node);
    if (!j) continue;
    const auto* a = std::get_if<Term::Ref>(&j->lhs->node);
    const auto* b = std::get_if<Term::Ref>(&j->rhs->node);
    if (!a || !b) continue;
    std::optional<Location> wrong;
    for (std::size_t cand = b->loc.index; cand-- > 0;)
      if (Location{cand} != a->loc && Location{cand} != e.location) {
        wrong = Location{cand};
        break;
      }
    if (!wrong) continue;
    auto joined = join_term(j->lhs, absint::ref(*wrong));
    EquationSystem bad = sys;
    bad.equations[e.location.index].rhs = f ? filter_term(f->guard, joined) : joined;
    bad.deps = dependencies(bad.equations);
    try {
      auto r = solve_worklist(bad);
      out.push_back({"wrong_join_operand", Strategy::transitional, ErrorTag::control_flow,
                     "F_" + std::to_string(e.location.index) + " joins " + to_string(*wrong) +
                         " instead of " + to_string(b->loc),
                     narrate(r)});
      break;
    } catch (const StepBudgetExceeded&) {
    }
  }

  for (std::size_t i = 0; i < ref.steps.size(); ++i) {
    const auto& st = ref.steps[i];
    if (!st.widened || !st.changed || st.after == st.computed || st.computed == st.before) continue;
    auto [b, e] = pick_block(text, i);
    std::string m = "M(" + to_string(st.picked) + ")";
    auto s = replace_once(text, "Update " + m + " to " + to_string(st.after) + ".",
                          "Update " + m + " to " + to_string(st.computed) + ".", b, e);
    if (s.empty()) continue;
    s = erase_line(s, s.find(m + " ∇ S results in", b));
    s = erase_line(s, s.find("Because " + to_string(st.picked), b));
    out.push_back({"skipped_widening", Strategy::transitional, ErrorTag::fixpoint,
                   "step " + std::to_string(i + 1) + " at " + to_string(st.picked), std::move(s)});
    break;
  }

  {
    std::optional<std::size_t> site;
    for (std::size_t i = 0; i < ref.steps.size(); ++i) {
      if (!ref.steps[i].changed) continue;
      if (!site) site = i;
      if (!ref.steps[i].before.is_bottom()) {
        site = i;
        break;
      }
    }
    if (site) {
      const auto& st = ref.steps[*site];
      auto [b, e] = pick_block(text, *site);
      std::string m = "M(" + to_string(st.picked) + ")";
      auto u = text.find("  - Update " + m, b);
      auto w = text.find("  - W is now", b);
      if (u != std::string::npos && w != std::string::npos && w < e) {
        std::string s = text.substr(0, u) + "  - " + m +
                        " has not changed, so do not add anything to the worklist.\n" + text.substr(w);
        out.push_back({"false_unchanged", Strategy::transitional, ErrorTag::fixpoint,
                       "step " + std::to_string(*site + 1) + " at " + to_string(st.picked),
                       std::move(s)});
      }
    }
  }

  for (std::size_t i = 0; i < ref.steps.size(); ++i) {
    bool done = false;
    for (const auto& w : ref.steps[i].work) {
      if (!std::holds_alternative<Term::Interpret>(w.term->node)) continue;
      auto off = perturb(w.result);
      if (!off) continue;
      auto [b, e] = pick_block(text, i);
      std::string needle = " on " + to_string(w.operands[0]) + " results in " + to_string(w.result) + ".";
      auto s = replace_once(text, needle,
                            " on " + to_string(w.operands[0]) + " results in " + to_string(*off) + ".", b, e);
      if (s.empty()) continue;
      out.push_back({"arithmetic_slip", Strategy::transitional, ErrorTag::operation,
                     "step " + std::to_string(i + 1) + " at " + to_string(ref.steps[i].picked),
                     std::move(s)});
      done = true;
      break;
    }
    if (done) break;
  }
  return out;
}

}  // namespace

std::vector<Mutant> mutants(const AnnotatedProgram& p) {
  auto out = compositional_mutants(p);
  auto t = transitional_mutants(p);
  out.insert(out.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
  return out;
}

}  // namespace absint
