#ifndef INDSYS_PHASE2_HPP
#define INDSYS_PHASE2_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "indsys/model.hpp"
#include "indsys/transport_index.hpp"

namespace indsys {

// One producer-to-consumer requirement implied by a BOM edge and the
// production assignment.
struct FlowSpec {
  int id = -1;
  int part = -1;           // part being shipped
  int parent_part = -1;    // part it is consumed into
  int producer_unit = -1;
  int consumer_unit = -1;
  double producer_share = 1.0;
  double consumer_share = 1.0;
};

struct EdgeAlternative {
  int mean = -1;
  double distance_km = 0.0;
  std::int64_t batch_size = 0;  // parts per ride, 0 until batching is applied
  std::int64_t rides = 0;
  double ride_duration_h = 0.0;
};

struct NetworkEdge {
  int src_node = -1;
  int dst_node = -1;
  int link = -1;  // meta-link index
  std::vector<EdgeAlternative> alternatives;
  // Parts that may share this physical edge (warehouse-fed edges only); more
  // than one part makes the edge a mixed-batching candidate.
  std::vector<int> shared_parts;

  bool mixed_candidate() const { return shared_parts.size() > 1; }
};

struct FlowRoute {
  std::vector<NetworkEdge> edges;
};

struct NetworkFlow {
  FlowSpec spec;
  std::vector<FlowRoute> routes;
};

// DAG of candidate transports: per flow, every admissible route with every
// transport alternative. Acyclic by construction (routes run producer ->
// warehouses -> consumer).
struct TransportNetwork {
  std::vector<NetworkFlow> flows;
  std::vector<int> root_units;  // final-assembly units, Phase II starts here
};

// Enumerates flows and their candidate routes. Throws ConnectivityError when
// some producer/consumer pair has no route at all.
TransportNetwork build_network(const ProductionAssignment& assignment, const Dataset& dataset,
                               const TransportIndex& index);

// Demand quantities and time offsets spread from the final assembly to the
// leaves. Offsets are hours before final completion, using the fastest
// available alternative as the transport-duration estimate.
struct DemandSchedule {
  int k_products = 1;
  double takt_h = 0.0;
  double window_h = 0.0;  // k_products * takt_h
  std::map<std::pair<int, int>, std::int64_t> node_quantity;  // (part, unit) -> pieces
  std::vector<double> unit_offset_h;                          // per unit
  std::vector<std::int64_t> flow_quantity;                    // per flow id
};

DemandSchedule propagate_demand(const TransportNetwork& network,
                                const ProductionAssignment& assignment, const Dataset& dataset,
                                int k_products, double takt_h);

// Removes transport alternatives whose container cannot take the flow's part,
// then routes left with an empty edge. Throws ConnectivityError when a flow
// loses all of its routes.
TransportNetwork prune_infeasible(const TransportNetwork& network, const Dataset& dataset);

// Fills batch sizes, ride counts and ride durations from the schedule
// quantities. Expects a pruned network (every alternative fits its part).
TransportNetwork apply_batching(const TransportNetwork& network, const DemandSchedule& schedule,
                                const Dataset& dataset);

// Graph export consumed by the link optimizer output files and by external
// viewers.
std::string serialize_network(const TransportNetwork& network, const DemandSchedule& schedule,
                              const Dataset& dataset);

}  // namespace indsys

#endif  // INDSYS_PHASE2_HPP
