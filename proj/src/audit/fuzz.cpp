#include "absint/audit/fuzz.hpp"

#include <omp.h>

#include <limits>

namespace absint {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::size_t kEnds = 5;

FuzzSummary empty_summary(const ConcreteProgram& p) {
  FuzzSummary s;
  s.ends.assign(kEnds, 0);
  s.locations.resize(p.locations());
  for (auto& l : s.locations) l.vars.resize(p.variables());
  return s;
}

void observe(LocationSummary& l, const Store& st, std::size_t run) {
  if (l.visits++ == 0) {
    l.first_run = run;
    for (std::size_t v = 0; v < st.size(); ++v) l.vars[v] = {st[v], st[v], run, run};
    return;
  }
  if (run < l.first_run) l.first_run = run;
  for (std::size_t v = 0; v < st.size(); ++v) {
    auto& h = l.vars[v];
    if (st[v] < h.min || (st[v] == h.min && run < h.min_run)) {
      h.min = st[v];
      h.min_run = run;
    }
    if (st[v] > h.max || (st[v] == h.max && run < h.max_run)) {
      h.max = st[v];
      h.max_run = run;
    }
  }
}

// Order-independent merge: extremes tie-break on the lower run index.
void merge(FuzzSummary& into, const FuzzSummary& from) {
  into.runs += from.runs;
  for (std::size_t i = 0; i < kEnds; ++i) into.ends[i] += from.ends[i];
  for (std::size_t l = 0; l < into.locations.size(); ++l) {
    auto& a = into.locations[l];
    const auto& b = from.locations[l];
    if (b.visits == 0) continue;
    if (a.visits == 0) {
      a = b;
      continue;
    }
    a.visits += b.visits;
    a.first_run = std::min(a.first_run, b.first_run);
    for (std::size_t v = 0; v < a.vars.size(); ++v) {
      auto& x = a.vars[v];
      const auto& y = b.vars[v];
      if (y.min < x.min || (y.min == x.min && y.min_run < x.min_run)) {
        x.min = y.min;
        x.min_run = y.min_run;
      }
      if (y.max > x.max || (y.max == x.max && y.max_run < x.max_run)) {
        x.max = y.max;
        x.max_run = y.max_run;
      }
    }
  }
}

void one_run(const ConcreteProgram& p, const FuzzConfig& cfg, std::size_t run, FuzzSummary& acc) {
  SampledInputs in(run_seed(cfg.seed, run), p.constants());
  auto res = execute(p, in, RunOptions{cfg.max_loop_iterations, false},
                     [&](std::size_t l, const Store& s) { observe(acc.locations[l], s, run); });
  ++acc.runs;
  ++acc.ends[static_cast<std::size_t>(res.end)];
}

bool outside(const VarHull& h, const Interval& i) {
  return !i.contains(Integer(h.min)) || !i.contains(Integer(h.max));
}

}  // namespace

std::uint64_t run_seed(std::uint64_t seed, std::size_t run) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(run)));
}

FuzzSummary fuzz_serial(const ConcreteProgram& p, const FuzzConfig& cfg) {
  auto acc = empty_summary(p);
  for (std::size_t r = 0; r < cfg.runs; ++r) one_run(p, cfg, r, acc);
  return acc;
}

FuzzSummary fuzz_parallel(const ConcreteProgram& p, const FuzzConfig& cfg) {
  auto total = empty_summary(p);
  auto runs = static_cast<std::int64_t>(cfg.runs);
#pragma omp parallel
  {
    auto acc = empty_summary(p);
#pragma omp for schedule(dynamic, 8) nowait
    for (std::int64_t r = 0; r < runs; ++r) one_run(p, cfg, static_cast<std::size_t>(r), acc);
#pragma omp critical
    merge(total, acc);
  }
  return total;
}

bool refuted(const LocationSummary& s, const AbstractState& claimed) {
  if (s.visits == 0) return false;
  if (claimed.is_bottom()) return true;
  for (std::size_t v = 0; v < s.vars.size(); ++v)
    if (outside(s.vars[v], claimed[v])) return true;
  return false;
}

std::optional<Witness> find_witness(const ConcreteProgram& p, const FuzzSummary& s,
                                    const FuzzConfig& cfg, Location l,
                                    const AbstractState& claimed) {
  const auto& ls = s.locations.at(l.index);
  if (!refuted(ls, claimed)) return std::nullopt;
  std::size_t run = std::numeric_limits<std::size_t>::max();
  if (claimed.is_bottom()) {
    run = ls.first_run;
  } else {
    for (std::size_t v = 0; v < ls.vars.size(); ++v) {
      const auto& h = ls.vars[v];
      if (!claimed[v].contains(Integer(h.min))) run = std::min(run, h.min_run);
      if (!claimed[v].contains(Integer(h.max))) run = std::min(run, h.max_run);
    }
  }
  Witness w;
  w.run = run;
  w.location = l;
  bool found = false;
  SampledInputs in(run_seed(cfg.seed, run), p.constants());
  auto res = execute(p, in, RunOptions{cfg.max_loop_iterations},
                     [&](std::size_t at, const Store& st) {
                       if (!found && at == l.index && !contains(claimed, st)) {
                         found = true;
                         w.store = st;
                       }
                     });
  if (!found) return std::nullopt;  // unreachable for a summary built from cfg
  w.inputs = std::move(res.inputs);
  return w;
}

bool witness_replays(const ConcreteProgram& p, const Witness& w, const AbstractState& claimed,
                     const FuzzConfig& cfg) {
  ReplayInputs in(w.inputs);
  bool hit = false;
  execute(p, in, RunOptions{cfg.max_loop_iterations}, [&](std::size_t at, const Store& st) {
    if (!hit && at == w.location.index && !contains(claimed, st)) hit = st == w.store;
  });
  return hit;
}

std::vector<Location> refuted_locations(const FuzzSummary& s, const InvariantMap& m) {
  std::vector<Location> out;
  for (std::size_t l = 0; l < s.locations.size(); ++l)
    if (m.has(Location{l}) && refuted(s.locations[l], m.at(Location{l})))
      out.push_back(Location{l});
  return out;
}

}  // namespace absint
