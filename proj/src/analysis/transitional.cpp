#include "absint/analysis/transitional.hpp"

#include "absint/imp/syntax.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace absint {

const char* to_string(WorklistOrder o) {
  switch (o) {
    case WorklistOrder::lowest_index: return "lowest";
    case WorklistOrder::fifo: return "fifo";
    case WorklistOrder::lifo: return "lifo";
  }
  return "?";
}

WorklistOrder parse_worklist_order(std::string_view s) {
  if (s == "lowest") return WorklistOrder::lowest_index;
  if (s == "fifo") return WorklistOrder::fifo;
  if (s == "lifo") return WorklistOrder::lifo;
  throw std::invalid_argument("unknown worklist order '" + std::string(s) + "'");
}

namespace {

class Worklist {
 public:
  explicit Worklist(WorklistOrder o) : order_(o) {}

  bool empty() const { return items_.empty(); }
  bool contains(Location l) const { return members_.count(l) > 0; }

  void push(Location l) {
    if (!members_.insert(l).second) return;
    items_.push_back(l);
  }

  Location pop() {
    std::deque<Location>::iterator it;
    switch (order_) {
      case WorklistOrder::lowest_index:
        it = std::min_element(items_.begin(), items_.end());
        break;
      case WorklistOrder::fifo:
        it = items_.begin();
        break;
      case WorklistOrder::lifo:
        it = std::prev(items_.end());
        break;
    }
    Location l = *it;
    items_.erase(it);
    members_.erase(l);
    return l;
  }

  // In the order items would be picked.
  std::vector<Location> snapshot() const {
    std::vector<Location> out(items_.begin(), items_.end());
    if (order_ == WorklistOrder::lowest_index) std::sort(out.begin(), out.end());
    if (order_ == WorklistOrder::lifo) std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  WorklistOrder order_;
  std::deque<Location> items_;
  std::set<Location> members_;
};

AbstractState evaluate_logged(const TermPtr& t, const InvariantMap& m,
                              std::vector<SubResult>& log) {
  return std::visit(
      [&](const auto& x) -> AbstractState {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Term::Const>) {
          return x.state;
        } else if constexpr (std::is_same_v<T, Term::Ref>) {
          return evaluate(*t, m);
        } else if constexpr (std::is_same_v<T, Term::Interpret>) {
          auto in = evaluate_logged(x.arg, m, log);
          auto out = interpret_atom(in, *x.stmt);
          log.push_back({t, {in}, out});
          return out;
        } else if constexpr (std::is_same_v<T, Term::Filter>) {
          auto in = evaluate_logged(x.arg, m, log);
          auto out = filter(in, *x.guard);
          log.push_back({t, {in}, out});
          return out;
        } else {
          auto a = evaluate_logged(x.lhs, m, log);
          auto b = evaluate_logged(x.rhs, m, log);
          auto out = state_join(a, b);
          log.push_back({t, {a, b}, out});
          return out;
        }
      },
      t->node);
}

std::string show(const AbstractState& s) { return to_string(s); }

std::string show(const std::vector<Location>& w) {
  std::string out = "{";
  for (std::size_t i = 0; i < w.size(); ++i)
    out += (i ? ", " : "") + to_string(w[i]);
  return out + "}";
}

std::string listing(const std::vector<Location>& ls) {
  std::string out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i > 0) out += i + 1 == ls.size() ? " and " : ", ";
    out += to_string(ls[i]);
  }
  return out;
}

std::string explain(const SubResult& s) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Term::Interpret>) {
          return "Interpreting " + render_atom(*x.stmt) + " on " + show(s.operands[0]) +
                 " results in " + show(s.result) + ".";
        } else if constexpr (std::is_same_v<T, Term::Filter>) {
          return "Filtering " + show(s.operands[0]) + " by " + render(*x.guard) +
                 " results in " + show(s.result) + ".";
        } else if constexpr (std::is_same_v<T, Term::Join>) {
          RenderStyle u{true};
          return render(*x.lhs, u) + " ⊔ " + render(*x.rhs, u) + " = " +
                 show(s.operands[0]) + " ⊔ " + show(s.operands[1]) + " = " +
                 show(s.result) + ".";
        } else {
          return {};
        }
      },
      s.term->node);
}

}  // namespace

TransitionalResult solve_worklist(const EquationSystem& sys, TransitionalOptions opt) {
  TransitionalResult r;
  r.system = sys;
  std::size_t n = sys.equations.size();
  r.map = InvariantMap::filled(sys.universe, n, AbstractState::bottom(sys.universe));
  Worklist w(opt.order);
  for (std::size_t i = 0; i < n; ++i) w.push(Location{i});
  while (!w.empty()) {
    if (r.steps.size() >= opt.step_budget)
      throw StepBudgetExceeded("worklist did not empty within " +
                               std::to_string(opt.step_budget) + " steps");
    WorklistStep st;
    st.picked = w.pop();
    st.before = r.map.at(st.picked);
    st.computed = evaluate_logged(sys.equations[st.picked.index].rhs, r.map, st.work);
    st.widened = sys.loop_heads.count(st.picked) > 0;
    st.after = st.widened ? state_widen(st.before, st.computed) : st.computed;
    st.changed = !(st.after == st.before);
    r.map.set(st.picked, st.after);
    if (st.changed) {
      if (auto it = sys.deps.find(st.picked); it != sys.deps.end()) {
        for (auto d : it->second) {
          st.added.push_back(d);
          w.push(d);
        }
      }
    }
    st.worklist = w.snapshot();
    r.steps.push_back(std::move(st));
  }
  return r;
}

TransitionalResult run_transitional(const AnnotatedProgram& p, TransitionalOptions opt) {
  return solve_worklist(derive_fpes(p), opt);
}

std::string narrate(const TransitionalResult& r) {
  RenderStyle u{true};
  std::string out = "1. Create a system of fixed point equations.\n\n";
  for (const auto& e : r.system.equations) out += render(e, u) + "\n";
  out += "\n2. Solve the fixed point equations using a worklist algorithm.\n\n";
  out += "Initially, the map of program locations to abstract states looks like:\n\n";
  auto bot = AbstractState::bottom(r.system.universe);
  std::vector<Location> all;
  for (std::size_t i = 0; i < r.system.equations.size(); ++i) {
    out += "M(" + to_string(Location{i}) + ") = " + show(bot) + "\n";
    all.push_back(Location{i});
  }
  std::vector<Location> initial = all;
  if (!r.steps.empty()) {
    initial = r.steps.front().worklist;
    initial.insert(initial.begin(), r.steps.front().picked);
  }
  out += "\nThe worklist W is " + show(initial) + ".\n\n";
  for (const auto& st : r.steps) {
    std::string at = to_string(st.picked);
    std::string m = "M(" + at + ")";
    out += "- Pick " + at + " from W.\n";
    out += "  - Remove " + at + " from W.\n";
    out += "  - " + m + " is " + show(st.before) + ".\n";
    out += "  - Compute F_" + std::to_string(st.picked.index) + "(M):\n";
    for (const auto& s : st.work) out += "    - " + explain(s) + "\n";
    out += "    - The result is " + show(st.computed) + ".\n";
    if (st.widened) {
      out += "  - Because " + at + " corresponds to a loop head, we widen " + m +
             " by S = " + show(st.computed) + ".\n";
      out += "    - " + m + " ∇ S results in " + show(st.after) + ".\n";
    }
    if (!st.changed) {
      out += "  - " + m + " has not changed, so do not add anything to the worklist.\n";
    } else {
      out += "  - Update " + m + " to " + show(st.after) + ".\n";
      out += "  - " + m +
             " has changed, so add the program locations whose fixed point "
             "equations directly depend on " +
             m + " to W.\n";
      if (st.added.empty())
        out += "    - According to the system of equations, there is no such "
               "location, so no location is added to W.\n";
      else
        out += "    - Add " + listing(st.added) + " to W.\n";
    }
    out += "  - W is now " + show(st.worklist) + ".\n";
  }
  out += "\nThe worklist is empty, meaning we've finished the analysis and M is\n\n";
  out += to_string(r.map, MapStyle::equation);
  return out;
}

nlohmann::json to_json(const TransitionalResult& r) {
  auto locs = [](const std::vector<Location>& ls) {
    nlohmann::json a = nlohmann::json::array();
    for (auto l : ls) a.push_back(to_string(l));
    return a;
  };
  nlohmann::json eqs = nlohmann::json::array();
  for (const auto& e : r.system.equations) eqs.push_back(render(e));
  nlohmann::json heads = nlohmann::json::array();
  for (auto l : r.system.loop_heads) heads.push_back(to_string(l));
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& st : r.steps) {
    steps.push_back({{"picked", to_string(st.picked)},
                     {"before", to_string(st.before)},
                     {"computed", to_string(st.computed)},
                     {"widened", st.widened},
                     {"after", to_string(st.after)},
                     {"changed", st.changed},
                     {"added", locs(st.added)},
                     {"worklist", locs(st.worklist)}});
  }
  nlohmann::json map = nlohmann::json::object();
  for (std::size_t i = 0; i < r.map.size(); ++i)
    map[to_string(Location{i})] = to_string(r.map.at(Location{i}));
  return {{"equations", eqs}, {"loop_heads", heads}, {"steps", steps}, {"map", map}};
}

}  // namespace absint
