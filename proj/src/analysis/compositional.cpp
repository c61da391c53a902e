#include "absint/analysis/compositional.hpp"

#include "absint/imp/syntax.hpp"

namespace absint {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::interpret_stmt: return "interpret_stmt";
    case EventKind::filter: return "filter";
    case EventKind::join_branches: return "join_branches";
    case EventKind::widen: return "widen";
    case EventKind::fixpoint_check: return "fixpoint_check";
    case EventKind::record_location: return "record_location";
    case EventKind::branch_begin: return "branch_begin";
    case EventKind::if_begin: return "if_begin";
    case EventKind::loop_begin: return "loop_begin";
    case EventKind::iteration_begin: return "iteration_begin";
    case EventKind::loop_end: return "loop_end";
  }
  return "?";
}

namespace {

class Interpreter {
 public:
  Interpreter(const AnnotatedProgram& p, CompositionalOptions opt)
      : p_(p), opt_(opt) {
    r_.map = InvariantMap(p.universe(), p.location_count());
  }

  CompositionalResult run() {
    auto entry = AbstractState::top(p_.universe());
    record(Location{0}, entry);
    block(p_.root(), entry);
    // never-recorded locations are dead code
    for (std::size_t i = 0; i < p_.location_count(); ++i)
      if (!r_.map.has(Location{i}))
        r_.map.set(Location{i}, AbstractState::bottom(p_.universe()));
    return std::move(r_);
  }

 private:
  TraceEvent& emit(EventKind k, std::string subject = {}) {
    TraceEvent e;
    e.kind = k;
    e.subject = std::move(subject);
    e.loop_depth = depth_;
    r_.trace.push_back(std::move(e));
    return r_.trace.back();
  }

  void record(Location l, const AbstractState& s) {
    r_.map.set(l, s);
    auto& e = emit(EventKind::record_location);
    e.output = s;
    e.location = l;
  }

  AbstractState block(const CmdPtr& c, AbstractState in) {
    for (const auto& s : flatten(c)) in = stmt(*s, std::move(in));
    return in;
  }

  AbstractState filtered(const BoolPtr& g, const AbstractState& in, Location at) {
    auto out = filter(in, *g);
    auto& e = emit(EventKind::filter, render(*g));
    e.inputs = {in};
    e.output = out;
    e.location = at;
    record(at, out);
    return out;
  }

  AbstractState stmt(const Cmd& c, AbstractState in) {
    const auto& pl = p_.placement(c);
    if (const auto* i = std::get_if<Cmd::If>(&c.node)) {
      emit(EventKind::if_begin).inputs = {in};
      emit(EventKind::branch_begin, "then").inputs = {in};
      auto t = block(i->then_branch, filtered(i->guard, in, pl.then_entry));
      emit(EventKind::branch_begin, "else").inputs = {in};
      auto e = block(i->else_branch,
                     filtered(negate_guard(i->guard), in, pl.else_entry));
      auto out = state_join(t, e);
      auto& j = emit(EventKind::join_branches);
      j.inputs = {t, e};
      j.output = out;
      j.location = pl.after;
      record(pl.after, out);
      return out;
    }
    if (const auto* w = std::get_if<Cmd::While>(&c.node)) {
      auto& lb = emit(EventKind::loop_begin, render(*w->guard));
      lb.inputs = {in};
      lb.location = pl.head;
      ++depth_;
      AbstractState s = in;
      std::size_t k = 1;
      for (;; ++k) {
        if (k > opt_.iteration_budget)
          throw IterationBudgetExceeded("loop at " + to_string(pl.head) +
                                        " did not stabilize");
        auto& ib = emit(EventKind::iteration_begin);
        ib.inputs = {s};
        ib.iteration = k;
        auto body = block(w->body, filtered(w->guard, s, pl.head));
        auto next = state_widen(s, body);
        auto& we = emit(EventKind::widen);
        we.inputs = {s, body};
        we.output = next;
        we.iteration = k;
        bool reached = next == s;
        auto& fc = emit(EventKind::fixpoint_check);
        fc.inputs = {s, next};
        fc.reached = reached;
        fc.iteration = k;
        if (reached) break;
        s = std::move(next);
      }
      --depth_;
      r_.iterations[pl.head] = k;
      auto ng = negate_guard(w->guard);
      emit(EventKind::loop_end, render(*ng)).inputs = {s};
      return filtered(ng, s, pl.after);
    }
    auto out = interpret_atom(in, c);
    auto& e = emit(EventKind::interpret_stmt, render_atom(c));
    e.inputs = {in};
    e.output = out;
    e.location = pl.after;
    record(pl.after, out);
    return out;
  }

  const AnnotatedProgram& p_;
  CompositionalOptions opt_;
  CompositionalResult r_;
  std::size_t depth_ = 0;
};

// Narration walks the program again and consumes the trace in order.
class Narrator {
 public:
  Narrator(const AnnotatedProgram& p, const CompositionalResult& r)
      : p_(p), r_(r) {}

  std::string run() {
    out_ += "Initially, the abstract state at {P0} is " +
            show(r_.map.at(Location{0})) + ".\n\nBegin interpreting the program.\n\n";
    next(EventKind::record_location);
    block(p_.root(), 0, true);
    out_ += "\nThere are no more statements to interpret, and the answer is\n\n";
    out_ += to_string(r_.map);
    return out_;
  }

 private:
  static std::string show(const AbstractState& s) { return to_string(s); }

  const TraceEvent& next(EventKind k) {
    while (pos_ < r_.trace.size() && r_.trace[pos_].kind != k) ++pos_;
    if (pos_ >= r_.trace.size())
      throw std::logic_error(std::string("trace ended before ") + to_string(k));
    return r_.trace[pos_++];
  }

  void line(int depth, const std::string& text) {
    out_.append(static_cast<std::size_t>(depth) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

  void block(const CmdPtr& c, int depth, bool numbered) {
    int n = 0;
    for (const auto& s : flatten(c)) {
      std::string bullet = numbered ? std::to_string(++n) + ". " : "- ";
      stmt(*s, depth, bullet);
    }
  }

  std::string side_effect(const TraceEvent& e) {
    return "As a side-effect, the abstract state at " + to_string(*e.location) +
           " is " + show(*e.output) + ".";
  }

  void stmt(const Cmd& c, int depth, const std::string& bullet) {
    if (const auto* i = std::get_if<Cmd::If>(&c.node)) {
      line(depth, bullet + "Interpret the if-then-else statement.");
      next(EventKind::if_begin);
      for (const char* side : {"then", "else"}) {
        const auto& b = next(EventKind::branch_begin);
        line(depth + 1, std::string("- Interpret the ") + side + "-branch.");
        line(depth + 2, "- The input abstract state is " + show(b.inputs[0]) + ".");
        const auto& f = next(EventKind::filter);
        line(depth + 2, "- Filter the input state by " + f.subject +
                            ". The resulting abstract state is " +
                            show(*f.output) + ". " + side_effect(f));
        block(side == std::string("then") ? i->then_branch : i->else_branch,
              depth + 2, false);
      }
      const auto& j = next(EventKind::join_branches);
      line(depth + 1, "- Join the results of interpreting the then and else branch:");
      line(depth + 2, "- The output of interpreting the then-branch is " +
                          show(j.inputs[0]) + ".");
      line(depth + 2, "- The output of interpreting the else-branch is " +
                          show(j.inputs[1]) + ".");
      line(depth + 2, "- The result of joining the two states is " +
                          show(*j.output) + ". " + side_effect(j));
      return;
    }
    if (const auto* w = std::get_if<Cmd::While>(&c.node)) {
      const auto& lb = next(EventKind::loop_begin);
      line(depth, bullet + "Interpret the while loop.");
      line(depth + 1, "- The input abstract state (iteration 0) is " +
                          show(lb.inputs[0]) + ".");
      line(depth + 1, "- Begin fixed point iteration.");
      for (;;) {
        const auto& ib = next(EventKind::iteration_begin);
        line(depth + 1, "- Fixed point Iteration " + std::to_string(ib.iteration) + ":");
        line(depth + 2, "- The input abstract state to this iteration is " +
                            show(ib.inputs[0]) + ".");
        const auto& f = next(EventKind::filter);
        line(depth + 2, "- Filtering the state by " + f.subject +
                            " results in the abstract state " + show(*f.output) +
                            ". " + side_effect(f));
        block(w->body, depth + 2, false);
        const auto& we = next(EventKind::widen);
        line(depth + 2, "- Widen the input abstract state by the interpretation of the loop body");
        line(depth + 3, "- The input abstract state to this iteration is " +
                            show(we.inputs[0]) + ".");
        line(depth + 3, "- The result of interpreting the loop body is " +
                            show(we.inputs[1]) + ".");
        line(depth + 3, "- " + show(we.inputs[0]) + " ∇ " + show(we.inputs[1]) +
                            " results in " + show(*we.output) + ".");
        line(depth + 2, "- The result of this iteration is " + show(*we.output) + ".");
        if (next(EventKind::fixpoint_check).reached) break;
      }
      line(depth + 1,
           "- We are at a fixed point. The result of the iteration was the same "
           "as the previous one.");
      const auto& le = next(EventKind::loop_end);
      const auto& f = next(EventKind::filter);
      line(depth + 1, "- Filter the fixed point by the negation of the loop guard, " +
                          le.subject + ". Filtering " + show(f.inputs[0]) + " by " +
                          f.subject + " results in " + show(*f.output) + ". " +
                          side_effect(f));
      return;
    }
    const auto& e = next(EventKind::interpret_stmt);
    line(depth, bullet + "Interpret " + e.subject + ";");
    line(depth + 1, "- The input abstract state is " + show(e.inputs[0]) + ".");
    line(depth + 1, "- The resulting abstract state is " + show(*e.output) + ".");
    line(depth + 1, "- " + side_effect(e));
  }

  const AnnotatedProgram& p_;
  const CompositionalResult& r_;
  std::size_t pos_ = 0;
  std::string out_;
};

nlohmann::json state_json(const AbstractState& s) { return to_string(s); }

}  // namespace

CompositionalResult run_compositional(const AnnotatedProgram& p,
                                      CompositionalOptions opt) {
  return Interpreter(p, opt).run();
}

std::string narrate(const AnnotatedProgram& p, const CompositionalResult& r) {
  return Narrator(p, r).run();
}

nlohmann::json to_json(const CompositionalResult& r) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : r.trace) {
    nlohmann::json j;
    j["kind"] = to_string(e.kind);
    if (!e.subject.empty()) j["subject"] = e.subject;
    if (!e.inputs.empty()) {
      j["inputs"] = nlohmann::json::array();
      for (const auto& s : e.inputs) j["inputs"].push_back(state_json(s));
    }
    if (e.output) j["output"] = state_json(*e.output);
    if (e.location) j["location"] = to_string(*e.location);
    j["loop_depth"] = e.loop_depth;
    if (e.iteration) j["iteration"] = e.iteration;
    if (e.kind == EventKind::fixpoint_check) j["reached"] = e.reached;
    events.push_back(std::move(j));
  }
  nlohmann::json map = nlohmann::json::object();
  for (std::size_t i = 0; i < r.map.size(); ++i)
    map[to_string(Location{i})] = state_json(r.map.at(Location{i}));
  nlohmann::json iterations = nlohmann::json::object();
  for (const auto& [l, k] : r.iterations) iterations[to_string(l)] = k;
  return {{"events", events}, {"map", map}, {"iterations", iterations}};
}

}  // namespace absint
