#ifndef INDSYS_ORACLES_HPP
#define INDSYS_ORACLES_HPP

#include <cstdint>
#include <vector>

#include "indsys/batching.hpp"
#include "indsys/drago.hpp"
#include "indsys/model.hpp"
#include "indsys/phase2.hpp"

namespace indsys {

// Hard limits that keep the exhaustive references exhaustive instead of slow.
struct OracleBudget {
  int max_parts = 6;
  int max_units = 6;
  int max_routes_per_flow = 20;
  int max_packed_items = 5;
};

struct BudgetError : Error {
  using Error::Error;
};

struct AssignmentCensus {
  long long feasible_count = 0;
  bool found = false;
  double best_dist = 0;
  ProductionAssignment best;
};

// Exhaustive search over unit choices (share grid in double mode). All
// arithmetic here is reimplemented from the raw dataset tables; the only
// shared vocabulary with the production path is the data model itself.
AssignmentCensus enumerate_assignments(const Dataset& dataset, Sourcing mode, int fal_count = 1,
                                       const OracleBudget& budget = {});

struct RouteChoice {
  int flow = -1;
  int route = -1;
  double total = 0;
};

struct RoutePlanCensus {
  double best_total = 0;
  double worst_total = 0;
  std::vector<RouteChoice> best_choices;              // per flow
  std::vector<std::vector<int>> best_means_per_edge;  // per flow, per edge: mean index
};

// Per-flow exhaustive optimum over route x transport-mean combinations,
// scored with the flow's single-batched ride counts.
RoutePlanCensus enumerate_routes(const TransportNetwork& network, const DemandSchedule& schedule,
                                 const Dataset& dataset, const Criterion& criterion,
                                 const OracleBudget& budget = {});

// Exact minimum container count over lattice placements (positions built from
// sums of item extents) and the six orientations. Exhaustive for the small
// item counts the budget admits.
std::int64_t enumerate_packings(const std::vector<MixedItem>& items, const Box& container,
                                const OracleBudget& budget = {});

}  // namespace indsys

#endif  // INDSYS_ORACLES_HPP
