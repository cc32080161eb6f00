#ifndef INDSYS_DRAGO_HPP
#define INDSYS_DRAGO_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "indsys/batching.hpp"
#include "indsys/phase2.hpp"

namespace indsys {

enum class CriterionKind { kCo2, kDuration, kDistance, kCost, kTradeoff };

const char* to_string(CriterionKind k);
CriterionKind criterion_from_string(const std::string& s);

struct Criterion {
  CriterionKind kind = CriterionKind::kCo2;
  // Trade-off weights (>= 0, summing to 1); ignored for single criteria.
  std::map<CriterionKind, double> weights;

  void validate() const;
};

// Per-criterion contribution of one selected alternative.
struct LinkScores {
  double co2_g = 0;
  double duration_h = 0;
  double distance_km = 0;
  double cost_eur = 0;

  double of(CriterionKind k) const;
};

LinkScores link_scores(const EdgeAlternative& alt, const Dataset& dataset);

// Score under the active criterion; trade-off weights normalize each component
// by the totals of the corresponding single-criterion runs.
double score_link(const EdgeAlternative& alt, const Dataset& dataset, const Criterion& criterion,
                  const std::array<double, 4>& normalizers = {1, 1, 1, 1});

struct ChosenLink {
  int flow = -1;
  int src_node = -1;
  int dst_node = -1;
  int link = -1;
  int mean = -1;
  double distance_km = 0;
  std::int64_t batch_size = 0;
  std::int64_t rides = 0;  // single-batched ride count for the flow
  double score = 0;        // under the active criterion
  LinkScores scores;
};

// A (vertex, input flow) pair whose best link is a mixed-batching candidate;
// resolved jointly after the traversal.
struct DeferredInput {
  int vertex = -1;
  int flow = -1;
  ChosenLink chosen;
};

// One joint ride group after mixed resolution.
struct MixedResolution {
  int link = -1;
  int mean = -1;
  int src_node = -1;
  int dst_node = -1;
  double distance_km = 0;
  std::vector<int> flows;
  std::int64_t rides = 0;  // joint ride count
  LinkScores scores;
};

struct OptimalPath {
  std::vector<ChosenLink> links;              // resolved single-part selections
  std::vector<DeferredInput> mixed_batching_inputs;
  std::vector<MixedResolution> mixed;         // filled by resolve_mixed_batches
  std::vector<std::string> warnings;

  // Sum of per-flow single-batched scores over every selection (links plus
  // deferred); this is the quantity the greedy minimizes and what oracle
  // comparisons use.
  double selection_total = 0;
};

// Top-down greedy selection: per (vertex, input flow) the incoming link with
// the best score wins; candidates scan in (mean id, source id) order and a
// strict improvement replaces, so ties keep the lexicographically first.
// A winning mixed-candidate link stops the scan and defers the pair. With
// route_exact the flow's whole routes are scored instead (sum of per-edge
// minima) before committing.
OptimalPath drago_optimize(const TransportNetwork& network, const DemandSchedule& schedule,
                           const Dataset& dataset, const Criterion& criterion,
                           bool route_exact = false);

enum class PackerKind { kGrasp, kLaff };

// Groups deferred pairs by (link, mean) and sizes their rides jointly with
// the chosen mixed packer. Groups that pack worse than their single batches
// fall back to per-part singles with a warning.
void resolve_mixed_batches(OptimalPath& path, const TransportNetwork& network,
                           const DemandSchedule& schedule, const Dataset& dataset,
                           PackerKind packer = PackerKind::kGrasp,
                           const GraspParams& grasp = {});

std::string serialize_plan(const OptimalPath& path, const TransportNetwork& network,
                           const Dataset& dataset, const Criterion& criterion);

}  // namespace indsys

#endif  // INDSYS_DRAGO_HPP
