#pragma once

#include "absint/audit/concrete.hpp"
#include "absint/domain/invariant_map.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace absint {

struct FuzzConfig {
  std::size_t runs = 1000;
  std::uint64_t seed = 0;
  std::size_t max_loop_iterations = 1'000'000;
};

// Seed of run i; runs are independent of how they are scheduled.
std::uint64_t run_seed(std::uint64_t seed, std::size_t run);

// Per-variable range of the values seen at a location, with the lowest run
// index that produced each extreme.
struct VarHull {
  Value min = 0, max = 0;
  std::size_t min_run = 0, max_run = 0;
  friend bool operator==(const VarHull&, const VarHull&) = default;
};

struct LocationSummary {
  std::uint64_t visits = 0;
  std::size_t first_run = 0;  // valid when visits > 0
  std::vector<VarHull> vars;
  friend bool operator==(const LocationSummary&, const LocationSummary&) = default;
};

struct FuzzSummary {
  std::vector<LocationSummary> locations;
  std::size_t runs = 0;
  // runs per RunEnd value
  std::vector<std::size_t> ends;
  friend bool operator==(const FuzzSummary&, const FuzzSummary&) = default;
};

FuzzSummary fuzz_serial(const ConcreteProgram& p, const FuzzConfig& cfg);
// OpenMP over runs; bitwise equal to fuzz_serial.
FuzzSummary fuzz_parallel(const ConcreteProgram& p, const FuzzConfig& cfg);

// Some visited store lies outside the claimed state.
bool refuted(const LocationSummary& s, const AbstractState& claimed);

struct Witness {
  std::size_t run = 0;
  std::vector<Value> inputs;  // replay with ReplayInputs
  Location location;
  Store store;                // first store at location outside the claim
};

// Re-executes the earliest run that refutes the claim at l.
std::optional<Witness> find_witness(const ConcreteProgram& p, const FuzzSummary& s,
                                    const FuzzConfig& cfg, Location l,
                                    const AbstractState& claimed);

// Replays w.inputs and checks that location w.location is reached with a
// store outside claimed.
bool witness_replays(const ConcreteProgram& p, const Witness& w, const AbstractState& claimed,
                     const FuzzConfig& cfg);

// Locations of a complete map refuted by the summary.
std::vector<Location> refuted_locations(const FuzzSummary& s, const InvariantMap& m);

}  // namespace absint
