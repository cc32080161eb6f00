#ifndef INDSYS_SYNTHETIC_HPP
#define INDSYS_SYNTHETIC_HPP

#include <cstdint>

#include "indsys/model.hpp"

namespace indsys {

// Cardinalities of the generated world. Defaults mirror the aerospace case
// study scale: 47 parts, 17 countries, 29 suppliers, 43 sites, 45 units,
// 34 warehouses, 17 transport means (9 maritime / 6 road / 2 air).
struct SyntheticProfile {
  int parts = 47;
  int countries = 17;
  int suppliers = 29;
  int sites = 43;
  int units = 45;
  int warehouses = 34;
  int means = 17;

  // Guarantee producers in at least two countries for every part so double
  // sourcing can reach a complete assignment.
  bool double_sourcing_feasible = true;
  // Add redundant roads/airlinks so flows have materially different route
  // shapes to choose from (off by default: one route shape per pair keeps the
  // greedy link selection provably per-flow optimal).
  bool route_diversity = false;
  // Value-added bounds that cap every unit at roughly one part; used by the
  // small instances that exhaustive oracles can verify.
  bool tight_unit_bounds = false;
};

// Deterministically synthesizes a consistent dataset: same profile and seed,
// byte-identical serialization. The construction places one witness
// assignment per requested sourcing mode, so generated worlds always admit a
// complete solution. Throws ProfileError when the profile cannot be realized.
Dataset gen_synthetic(const SyntheticProfile& profile, std::uint64_t seed);

}  // namespace indsys

#endif  // INDSYS_SYNTHETIC_HPP
