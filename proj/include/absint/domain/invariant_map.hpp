#pragma once

#include "absint/domain/state.hpp"
#include "absint/imp/program.hpp"

#include <optional>
#include <string>
#include <vector>

namespace absint {

// Location -> abstract state. Entries may be missing (partial maps parsed
// from model output); reference maps are always complete.
class InvariantMap {
 public:
  InvariantMap() = default;
  InvariantMap(UniversePtr u, std::size_t locations);

  static InvariantMap filled(UniversePtr u, std::size_t locations,
                             const AbstractState& s);

  const UniversePtr& universe() const { return universe_; }
  std::size_t size() const { return states_.size(); }
  bool has(Location l) const;
  // Throws std::out_of_range for missing entries.
  const AbstractState& at(Location l) const;
  const std::optional<AbstractState>& find(Location l) const;
  void set(Location l, AbstractState s);
  bool complete() const;

  friend bool operator==(const InvariantMap& a, const InvariantMap& b);

 private:
  UniversePtr universe_;
  std::vector<std::optional<AbstractState>> states_;
};

enum class MapStyle {
  arrow,     // "{P0} ↦ {x : [-inf, inf]}"
  equation,  // "M({P0}) = {x : [-inf, inf]}"
};

std::string to_string(const InvariantMap& m, MapStyle style = MapStyle::arrow,
                      RenderStyle rs = {});

}  // namespace absint
