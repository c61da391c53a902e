#include "absint/domain/invariant_map.hpp"

#include <stdexcept>

namespace absint {

InvariantMap::InvariantMap(UniversePtr u, std::size_t locations)
    : universe_(std::move(u)), states_(locations) {}

InvariantMap InvariantMap::filled(UniversePtr u, std::size_t locations,
                                  const AbstractState& s) {
  InvariantMap m(std::move(u), locations);
  for (auto& e : m.states_) e = s;
  return m;
}

bool InvariantMap::has(Location l) const {
  return l.index < states_.size() && states_[l.index].has_value();
}

const AbstractState& InvariantMap::at(Location l) const {
  if (!has(l)) throw std::out_of_range("no state for " + to_string(l));
  return *states_[l.index];
}

const std::optional<AbstractState>& InvariantMap::find(Location l) const {
  static const std::optional<AbstractState> none;
  if (l.index >= states_.size()) return none;
  return states_[l.index];
}

void InvariantMap::set(Location l, AbstractState s) {
  if (l.index >= states_.size()) states_.resize(l.index + 1);
  states_[l.index] = std::move(s);
}

bool InvariantMap::complete() const {
  for (const auto& s : states_)
    if (!s) return false;
  return true;
}

bool operator==(const InvariantMap& a, const InvariantMap& b) {
  return a.states_ == b.states_;
}

std::string to_string(const InvariantMap& m, MapStyle style, RenderStyle rs) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Location l{i};
    if (!m.has(l)) continue;
    if (style == MapStyle::arrow)
      out += to_string(l) + " ↦ " + to_string(m.at(l), rs) + "\n";
    else
      out += "M(" + to_string(l) + ") = " + to_string(m.at(l), rs) + "\n";
  }
  return out;
}

}  // namespace absint
