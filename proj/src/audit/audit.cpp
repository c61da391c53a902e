#include "absint/audit/audit.hpp"

#include "absint/analysis/compositional.hpp"
#include "absint/analysis/transitional.hpp"
#include "absint/imp/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace absint {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::sound_by_inclusion: return "sound_by_inclusion";
    case Verdict::sound_by_fuzz_only: return "sound_by_fuzz_only";
    case Verdict::unsound: return "unsound";
    case Verdict::missing: return "missing";
  }
  return "?";
}

const char* to_string(FpeVerdict v) {
  switch (v) {
    case FpeVerdict::correct: return "correct";
    case FpeVerdict::incorrect: return "incorrect";
    case FpeVerdict::missing: return "missing";
  }
  return "?";
}

const char* to_string(Finding f) {
  switch (f) {
    case Finding::none: return "none";
    case Finding::operation: return "operation";
    case Finding::wrong_location: return "wrong_location";
    case Finding::input_mismatch: return "input_mismatch";
    case Finding::missing_widening: return "missing_widening";
    case Finding::false_fixpoint: return "false_fixpoint";
    case Finding::unsupported: return "unsupported";
    case Finding::underivable: return "underivable";
  }
  return "?";
}

const char* to_string(ErrorTag t) {
  switch (t) {
    case ErrorTag::control_flow: return "control_flow";
    case ErrorTag::fixpoint: return "fixpoint";
    case ErrorTag::operation: return "operation";
    case ErrorTag::short_circuit: return "short_circuit";
    case ErrorTag::truncation: return "truncation";
  }
  return "?";
}

// ---- map soundness

namespace {

template <class GetSummary>
std::vector<LocationVerdict> soundness(const InvariantMap& map, const InvariantMap& ref,
                                       const ConcreteProgram& cp, GetSummary&& summary,
                                       const FuzzConfig& cfg) {
  if (!map.universe() || !ref.universe() || *map.universe() != *ref.universe())
    throw UniverseMismatch();
  std::vector<LocationVerdict> out;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    Location l{i};
    LocationVerdict v{l, Verdict::missing, std::nullopt};
    if (i >= map.size() || !map.has(l)) {
      v.verdict = Verdict::missing;
    } else if (state_leq(ref.at(l), map.at(l))) {
      v.verdict = Verdict::sound_by_inclusion;
    } else {
      const FuzzSummary& s = summary();
      v.witness = find_witness(cp, s, cfg, l, map.at(l));
      v.verdict = v.witness ? Verdict::unsound : Verdict::sound_by_fuzz_only;
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<LocationVerdict> check_map_soundness(const InvariantMap& map, const InvariantMap& ref,
                                                 const ConcreteProgram& cp,
                                                 const FuzzSummary& summary,
                                                 const FuzzConfig& cfg) {
  return soundness(map, ref, cp, [&]() -> const FuzzSummary& { return summary; }, cfg);
}

std::vector<LocationVerdict> check_map_soundness(const AnnotatedProgram& p, const InvariantMap& map,
                                                 const InvariantMap& ref, const FuzzConfig& cfg) {
  ConcreteProgram cp(p);
  std::optional<FuzzSummary> s;
  return soundness(
      map, ref, cp,
      [&]() -> const FuzzSummary& {
        if (!s) s = fuzz_parallel(cp, cfg);
        return *s;
      },
      cfg);
}

// ---- equations

namespace {

void join_operands(const TermPtr& t, std::vector<TermPtr>& out) {
  if (const auto* j = std::get_if<Term::Join>(&t->node)) {
    join_operands(j->lhs, out);
    join_operands(j->rhs, out);
  } else {
    out.push_back(t);
  }
}

std::string diff_at(const TermPtr& a, const TermPtr& b, const std::string& path) {
  auto here = [&](const std::string& p, const std::string& x, const std::string& y) {
    std::string at = p.empty() ? "rhs" : p.substr(0, p.size() - (p.back() == '.' ? 1 : 0));
    return at + ": " + x + " vs " + y;
  };
  if (a->node.index() != b->node.index()) return here(path, render(*a), render(*b));
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Term::Const>) {
          return x.state == y.state ? "" : here(path, render(*a), render(*b));
        } else if constexpr (std::is_same_v<T, Term::Ref>) {
          return x.loc == y.loc ? "" : here(path, render(*a), render(*b));
        } else if constexpr (std::is_same_v<T, Term::Interpret>) {
          if (!(*x.stmt == *y.stmt))
            return here(path + "Interpret.stmt", render_atom(*x.stmt), render_atom(*y.stmt));
          return diff_at(x.arg, y.arg, path + "Interpret.arg.");
        } else if constexpr (std::is_same_v<T, Term::Filter>) {
          if (!(*x.guard == *y.guard))
            return here(path + "Filter.guard", render(*x.guard), render(*y.guard));
          return diff_at(x.arg, y.arg, path + "Filter.arg.");
        } else {
          std::vector<TermPtr> xs, ys;
          join_operands(a, xs);
          join_operands(b, ys);
          if (xs.size() != ys.size()) return here(path + "Join", render(*a), render(*b));
          for (std::size_t i = 0; i < xs.size(); ++i) {
            auto d = diff_at(xs[i], ys[i], path + "Join[" + std::to_string(i) + "].");
            if (!d.empty()) return d;
          }
          return "";
        }
      },
      a->node);
}

}  // namespace

std::string term_diff(const Term& got, const Term& want) {
  auto a = std::make_shared<const Term>(got);
  auto b = std::make_shared<const Term>(want);
  return diff_at(a, b, "");
}

std::vector<FpeCheck> check_fpes(const std::optional<std::vector<FixpointEquation>>& claimed,
                                 const std::vector<FixpointEquation>& ref) {
  std::vector<FpeCheck> out;
  for (const auto& r : ref) {
    FpeCheck c{r.location, FpeVerdict::missing, {}};
    const FixpointEquation* mine = nullptr;
    if (claimed)
      for (const auto& e : *claimed)
        if (e.location == r.location) {
          mine = &e;
          break;
        }
    if (!mine) {
      c.verdict = FpeVerdict::missing;
    } else {
      auto a = normalize_fpe(*mine);
      auto b = normalize_fpe(r);
      if (*a.rhs == *b.rhs) {
        c.verdict = FpeVerdict::correct;
      } else {
        c.verdict = FpeVerdict::incorrect;
        c.diff = term_diff(*a.rhs, *b.rhs);
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

// ---- steps

namespace {

BoolPtr nnf(const BoolPtr& b) { return negate_guard(negate_guard(b)); }

bool same_guard(const BoolPtr& a, const BoolPtr& b) { return *nnf(a) == *nnf(b); }

class StepChecker {
 public:
  StepChecker(const std::vector<ClaimedStep>& steps, const AnnotatedProgram& p,
              const EquationSystem& ref, const std::optional<std::vector<FixpointEquation>>& mine)
      : steps_(steps), p_(p), ref_(ref), claimed_(InvariantMap::filled(
                                              p.universe(), p.location_count(),
                                              AbstractState::bottom(p.universe()))) {
    if (mine)
      for (const auto& e : *mine) model_eqs_[e.location.index] = e.rhs;
  }

  std::vector<StepVerdict> run() {
    out_.resize(steps_.size());
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      out_[i].step = i;
      check(i);
    }
    return std::move(out_);
  }

 private:
  static bool all_inputs(const ClaimedStep& s) {
    return std::all_of(s.inputs.begin(), s.inputs.end(), [](const auto& x) { return x.has_value(); });
  }

  void operation(std::size_t i, std::optional<AbstractState> got) {
    const auto& s = steps_[i];
    auto& v = out_[i];
    v.recomputed = std::move(got);
    if (!v.recomputed) {
      v.unscorable = true;
      return;
    }
    v.match = *v.recomputed == *s.output;
    if (!v.match) v.finding = Finding::operation;
  }

  void check(std::size_t i) {
    const auto& s = steps_[i];
    auto& v = out_[i];
    switch (s.op) {
      case StepOp::interpret:
      case StepOp::filter:
      case StepOp::join:
      case StepOp::widen:
      case StepOp::meet: {
        if (!s.output || s.inputs.empty() || !all_inputs(s)) {
          v.unscorable = true;
          return;
        }
        operation(i, recompute(s));
        return;
      }
      case StepOp::fixpoint_claim:
        return fixpoint(i);
      case StepOp::worklist_update:
        return update(i);
      case StepOp::location_claim:
        return s.loose ? loose(i) : location(i);
    }
  }

  std::optional<AbstractState> recompute(const ClaimedStep& s) {
    try {
      switch (s.op) {
        case StepOp::interpret: return interpret_atom(*s.inputs[0], *parse_atom(s.subject));
        case StepOp::filter: return filter(*s.inputs[0], *parse_guard(s.subject));
        case StepOp::join: {
          AbstractState acc = *s.inputs[0];
          for (std::size_t k = 1; k < s.inputs.size(); ++k) acc = state_join(acc, *s.inputs[k]);
          return acc;
        }
        case StepOp::widen:
          if (s.inputs.size() != 2) return std::nullopt;
          return state_widen(*s.inputs[0], *s.inputs[1]);
        case StepOp::meet:
          if (s.inputs.size() != 2) return std::nullopt;
          return state_meet(*s.inputs[0], *s.inputs[1]);
        default: return std::nullopt;
      }
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  // The model's next value for l under its own claims so far: its equation
  // (or the reference one) evaluated, widened at loop heads.
  std::pair<AbstractState, AbstractState> expected(Location l) {
    auto it = model_eqs_.find(l.index);
    const Term& rhs = it != model_eqs_.end() ? *it->second : *ref_.equations[l.index].rhs;
    AbstractState computed = evaluate(rhs, claimed_);
    AbstractState next = ref_.loop_heads.count(l) ? state_widen(claimed_.at(l), computed) : computed;
    return {computed, next};
  }

  void update(std::size_t i) {
    const auto& s = steps_[i];
    auto& v = out_[i];
    if (!s.output || !s.location) {
      v.unscorable = true;
      return;
    }
    Location l = *s.location;
    previous_[i] = claimed_.at(l);
    try {
      auto [computed, next] = expected(l);
      v.recomputed = next;
      v.match = next == *s.output;
      if (!v.match)
        v.finding = ref_.loop_heads.count(l) && computed == *s.output ? Finding::missing_widening
                                                                      : Finding::operation;
    } catch (const std::exception&) {
      v.unscorable = true;
    }
    claimed_.set(l, *s.output);
  }

  void fixpoint(std::size_t i) {
    const auto& s = steps_[i];
    auto& v = out_[i];
    bool says_same;
    bool same;
    if (s.subject == "fixpoint" || s.subject == "not_fixpoint") {
      says_same = s.subject == "fixpoint";
      std::optional<AbstractState> w;
      if (s.related && out_[*s.related].recomputed) w = out_[*s.related].recomputed;
      else w = s.output;
      if (s.inputs.empty() || !s.inputs[0] || !w) {
        v.unscorable = true;
        return;
      }
      same = *s.inputs[0] == *w;
      v.recomputed = w;
    } else {
      says_same = s.subject == "unchanged";
      if (!s.location) {
        v.unscorable = true;
        return;
      }
      if (s.related) {
        auto prev = previous_.find(*s.related);
        if (prev == previous_.end() || !steps_[*s.related].output) {
          v.unscorable = true;
          return;
        }
        same = prev->second == *steps_[*s.related].output;
        v.recomputed = steps_[*s.related].output;
      } else {
        try {
          auto next = expected(*s.location).second;
          same = next == claimed_.at(*s.location);
          v.recomputed = next;
        } catch (const std::exception&) {
          v.unscorable = true;
          return;
        }
      }
    }
    v.match = says_same == same;
    if (!v.match) v.finding = Finding::false_fixpoint;
  }

  // Index of the step that produced the claimed state, if any, among the
  // steps since the previous location claim.
  std::optional<std::size_t> producer(std::size_t i) {
    const auto& x = steps_[i].output;
    for (std::size_t k = i; k-- > last_claim_end_;) {
      const auto& s = steps_[k];
      if (s.op == StepOp::location_claim || s.op == StepOp::fixpoint_claim) continue;
      if (s.output && x && *s.output == *x) return k;
    }
    return std::nullopt;
  }

  Finding attribution(const ClaimedStep& src, Location l) {
    if (src.op == StepOp::interpret) {
      CmdPtr atom;
      try {
        atom = parse_atom(src.subject);
      } catch (const std::exception&) {
        return Finding::none;
      }
      bool valid = false;
      for (const Cmd* c : p_.statements()) {
        if (!(*c == *atom)) continue;
        const auto& pl = p_.placement(*c);
        if (pl.after != l) continue;
        valid = true;
        if (src.inputs[0] && seen_[pl.before.index] && !(claimed_.at(pl.before) == *src.inputs[0]))
          return Finding::input_mismatch;
      }
      return valid ? Finding::none : Finding::wrong_location;
    }
    if (src.op == StepOp::filter) {
      BoolPtr g;
      try {
        g = parse_guard(src.subject);
      } catch (const std::exception&) {
        return Finding::none;
      }
      for (const Cmd* c : p_.statements()) {
        const auto& pl = p_.placement(*c);
        if (const auto* x = std::get_if<Cmd::If>(&c->node)) {
          bool then_ok = pl.then_entry == l && same_guard(g, x->guard);
          bool else_ok = pl.else_entry == l && same_guard(g, negate_guard(x->guard));
          if (then_ok || else_ok) {
            if (src.inputs[0] && seen_[pl.before.index] && !(claimed_.at(pl.before) == *src.inputs[0]))
              return Finding::input_mismatch;
            return Finding::none;
          }
        } else if (const auto* x = std::get_if<Cmd::While>(&c->node)) {
          if ((pl.head == l && same_guard(g, x->guard)) ||
              (pl.after == l && same_guard(g, negate_guard(x->guard))))
            return Finding::none;
        }
      }
      return Finding::wrong_location;
    }
    if (src.op == StepOp::join && src.inputs.size() == 2) {
      for (const Cmd* c : p_.statements())
        if (std::holds_alternative<Cmd::If>(c->node) && p_.placement(*c).after == l)
          return Finding::none;
      return Finding::wrong_location;
    }
    return Finding::none;
  }

  void location(std::size_t i) {
    const auto& s = steps_[i];
    auto& v = out_[i];
    if (!s.output || !s.location) {
      v.unscorable = true;
      last_claim_end_ = i + 1;
      return;
    }
    Location l = *s.location;
    if (auto src = producer(i)) {
      v.finding = attribution(steps_[*src], l);
    } else {
      std::optional<AbstractState> derived;
      try {
        // The entry state is given with the program; it needs no claim.
        InvariantMap m = claimed_;
        if (!seen_[0]) m.set(Location{0}, evaluate(*ref_.equations[0].rhs, m));
        derived = evaluate(*ref_.equations[l.index].rhs, m);
      } catch (const std::exception&) {
      }
      bool ok = derived && *derived == *s.output;
      if (!ok && derived && ref_.loop_heads.count(l))
        ok = state_widen(claimed_.at(l), *derived) == *s.output;
      v.recomputed = derived;
      if (!ok) {
        bool skipped = last_claim_loc_ && l.index > last_claim_loc_->index + 1;
        v.finding = skipped ? Finding::unsupported : Finding::underivable;
      }
    }
    v.match = v.finding == Finding::none;
    claimed_.set(l, *s.output);
    seen_[l.index] = true;
    last_claim_loc_ = l;
    last_claim_end_ = i + 1;
  }

  static bool agrees(const AbstractState& st, const std::map<std::string, Interval>& part) {
    for (const auto& [name, iv] : part) {
      auto idx = st.index_of(name);
      if (!idx || !(st[*idx] == iv)) return false;
    }
    return true;
  }

  void loose(std::size_t i) {
    const auto& s = steps_[i];
    auto& v = out_[i];
    bool ok = false;
    for (std::size_t k = 0; k < i && !ok; ++k) {
      if (steps_[k].output && agrees(*steps_[k].output, s.partial)) ok = true;
      if (out_[k].recomputed && agrees(*out_[k].recomputed, s.partial)) ok = true;
    }
    for (std::size_t l = 0; l < claimed_.size() && !ok; ++l)
      if (seen_[l] && agrees(claimed_.at(Location{l}), s.partial)) ok = true;
    v.match = ok;
    if (!ok) v.finding = Finding::unsupported;
  }

  const std::vector<ClaimedStep>& steps_;
  const AnnotatedProgram& p_;
  const EquationSystem& ref_;
  std::map<std::size_t, TermPtr> model_eqs_;
  InvariantMap claimed_;
  std::vector<bool> seen_ = std::vector<bool>(claimed_.size(), false);
  std::map<std::size_t, AbstractState> previous_;  // update step -> value it replaced
  std::optional<Location> last_claim_loc_;
  std::size_t last_claim_end_ = 0;
  std::vector<StepVerdict> out_;
};

}  // namespace

std::vector<StepVerdict> check_steps(const std::vector<ClaimedStep>& steps,
                                     const AnnotatedProgram& p, const EquationSystem& ref,
                                     const std::optional<std::vector<FixpointEquation>>& model_fpes) {
  return StepChecker(steps, p, ref, model_fpes).run();
}

// ---- tags and scores

std::vector<TagEvidence> classify_errors(const ParsedResponse&,
                                         const std::vector<StepVerdict>& verdicts,
                                         const std::vector<FpeCheck>& fpes,
                                         const std::string& finish_reason) {
  std::map<ErrorTag, TagEvidence> tags;
  auto cite = [&](ErrorTag t) -> TagEvidence& {
    auto [it, fresh] = tags.try_emplace(t, TagEvidence{t, {}, {}});
    return it->second;
  };
  for (const auto& v : verdicts) {
    if (v.unscorable) continue;
    switch (v.finding) {
      case Finding::operation: cite(ErrorTag::operation).steps.push_back(v.step); break;
      case Finding::missing_widening:
      case Finding::false_fixpoint: cite(ErrorTag::fixpoint).steps.push_back(v.step); break;
      case Finding::wrong_location:
      case Finding::input_mismatch: cite(ErrorTag::control_flow).steps.push_back(v.step); break;
      case Finding::unsupported: cite(ErrorTag::short_circuit).steps.push_back(v.step); break;
      case Finding::underivable:
      case Finding::none: break;
    }
  }
  for (const auto& f : fpes)
    if (f.verdict == FpeVerdict::incorrect)
      cite(ErrorTag::control_flow).notes.push_back("equation for " + to_string(f.location) +
                                                   " differs at " + f.diff);
  if (finish_reason == "length")
    cite(ErrorTag::truncation).notes.push_back("output stopped at the token limit");
  if (tags.count(ErrorTag::short_circuit))
    tags.at(ErrorTag::short_circuit).notes.push_back(
        "heuristic: a claim no single operation derives, with intermediate locations skipped");
  std::vector<TagEvidence> out;
  for (auto& [t, e] : tags) out.push_back(std::move(e));
  return out;
}

std::string score_cell(std::optional<std::size_t> x, std::size_t y) {
  if (!x) return "-";
  return std::to_string(*x) + "/" + std::to_string(y);
}

AuditReport audit(const AnnotatedProgram& p, Strategy s, std::string_view response,
                  const AuditOptions& opt) {
  AuditReport r;
  r.strategy = s;
  r.location_count = p.location_count();
  r.fuzz_config = opt.fuzz;
  r.parsed = parse_response(response, s, p);
  auto sys = derive_fpes(p);
  InvariantMap ref = s == Strategy::compositional ? run_compositional(p).map
                                                  : solve_worklist(sys).map;

  if (r.parsed.final_map) {
    ConcreteProgram cp(p);
    r.per_location = soundness(
        *r.parsed.final_map, ref, cp,
        [&]() -> const FuzzSummary& {
          if (!r.fuzz) r.fuzz = fuzz_parallel(cp, opt.fuzz);
          return *r.fuzz;
        },
        opt.fuzz);
  } else {
    for (std::size_t i = 0; i < p.location_count(); ++i)
      r.per_location.push_back({Location{i}, Verdict::missing, std::nullopt});
  }
  std::vector<FpeCheck> fpes;
  if (s == Strategy::transitional) {
    fpes = check_fpes(r.parsed.fpes, sys.equations);
    r.fpe_per_location = fpes;
  }
  r.steps = check_steps(r.parsed.steps, p, sys, r.parsed.fpes);
  r.tags = classify_errors(r.parsed, r.steps, fpes, opt.finish_reason);

  std::optional<std::size_t> sound;
  if (r.parsed.final_map)
    sound = std::count_if(r.per_location.begin(), r.per_location.end(),
                          [](const auto& v) { return counts_as_sound(v.verdict); });
  r.im_sound = score_cell(sound, p.location_count());
  if (s == Strategy::transitional) {
    std::optional<std::size_t> ok;
    if (r.parsed.fpes)
      ok = std::count_if(fpes.begin(), fpes.end(),
                         [](const auto& f) { return f.verdict == FpeVerdict::correct; });
    r.fpe_correct = score_cell(ok, p.location_count());
  }
  return r;
}

// ---- output

nlohmann::json to_json(const AuditReport& r, const AnnotatedProgram& p) {
  using nlohmann::json;
  const auto& vars = p.variables();
  json per = json::array();
  for (const auto& v : r.per_location) {
    json e = {{"location", to_string(v.location)}, {"verdict", to_string(v.verdict)}};
    if (r.parsed.final_map && r.parsed.final_map->has(v.location))
      e["claimed"] = to_string(r.parsed.final_map->at(v.location));
    else
      e["claimed"] = nullptr;
    if (v.witness) {
      json store = json::object();
      for (std::size_t i = 0; i < vars.size(); ++i) store[vars[i]] = v.witness->store[i];
      e["witness"] = {{"run", v.witness->run}, {"inputs", v.witness->inputs}, {"store", store}};
    }
    per.push_back(std::move(e));
  }
  json fpe = nullptr;
  if (r.fpe_per_location) {
    fpe = json::array();
    for (const auto& f : *r.fpe_per_location) {
      json e = {{"location", to_string(f.location)}, {"verdict", to_string(f.verdict)}};
      if (!f.diff.empty()) e["diff"] = f.diff;
      fpe.push_back(std::move(e));
    }
  }
  json steps = json::array();
  std::size_t unscorable = 0;
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const auto& c = r.parsed.steps[i];
    const auto& v = r.steps[i];
    unscorable += v.unscorable;
    json e = {{"index", i},
              {"op", to_string(c.op)},
              {"span", {c.span.begin, c.span.end}},
              {"match", v.match},
              {"unscorable", v.unscorable},
              {"finding", to_string(v.finding)}};
    if (!c.subject.empty()) e["subject"] = c.subject;
    if (c.location) e["location"] = to_string(*c.location);
    if (c.output) e["claimed"] = to_string(*c.output);
    if (c.loose) {
      json part = json::object();
      for (const auto& [k, iv] : c.partial) part[k] = to_string(iv);
      e["claimed_partial"] = part;
    }
    if (v.recomputed) e["recomputed"] = to_string(*v.recomputed);
    steps.push_back(std::move(e));
  }
  json tags = json::array();
  for (const auto& t : r.tags)
    tags.push_back({{"tag", to_string(t.tag)}, {"steps", t.steps}, {"notes", t.notes}});
  json scores = {{"im_sound", r.im_sound}};
  scores["fpe_correct"] = r.strategy == Strategy::transitional ? json(r.fpe_correct) : json(nullptr);
  json out = {{"strategy", to_string(r.strategy)},
              {"locations", r.location_count},
              {"scores", scores},
              {"per_location", per},
              {"fpe_per_location", fpe},
              {"steps", steps},
              {"tags", tags},
              {"parse",
               {{"answer_found", r.parsed.final_map.has_value()},
                {"steps", r.steps.size()},
                {"unscorable", unscorable},
                {"diagnostics", r.parsed.diagnostics}}}};
  if (r.fuzz) {
    static const char* names[] = {"finished", "blocked", "overflow", "iteration_cap", "cycle"};
    json ends = json::object();
    for (std::size_t i = 0; i < r.fuzz->ends.size(); ++i) ends[names[i]] = r.fuzz->ends[i];
    out["fuzz"] = {{"seed", r.fuzz_config.seed},
                   {"runs", r.fuzz_config.runs},
                   {"max_loop_iterations", r.fuzz_config.max_loop_iterations},
                   {"ends", ends}};
  } else {
    out["fuzz"] = nullptr;
  }
  return out;
}

std::string render_report(const AuditReport& r) {
  std::ostringstream os;
  os << "strategy: " << to_string(r.strategy) << "\n";
  os << "invariant map soundness: " << r.im_sound << "\n";
  if (r.strategy == Strategy::transitional) os << "fixpoint equation correctness: " << r.fpe_correct << "\n";
  os << "\n";
  for (std::size_t i = 0; i < r.per_location.size(); ++i) {
    const auto& v = r.per_location[i];
    os << to_string(v.location) << "  " << to_string(v.verdict);
    if (r.fpe_per_location) os << "  fpe:" << to_string((*r.fpe_per_location)[i].verdict);
    os << "\n";
  }
  std::size_t bad = std::count_if(r.steps.begin(), r.steps.end(), [](const auto& v) { return !v.match; });
  std::size_t unscorable = std::count_if(r.steps.begin(), r.steps.end(), [](const auto& v) { return v.unscorable; });
  os << "\nsteps: " << r.steps.size() << " checked, " << bad << " mismatched, " << unscorable
     << " unscorable\n";
  os << "tags:";
  if (r.tags.empty()) os << " none";
  for (const auto& t : r.tags) os << " " << to_string(t.tag);
  os << "\n";
  return os.str();
}

}  // namespace absint
