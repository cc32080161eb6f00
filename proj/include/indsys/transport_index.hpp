#ifndef INDSYS_TRANSPORT_INDEX_HPP
#define INDSYS_TRANSPORT_INDEX_HPP

#include <limits>
#include <vector>

#include "indsys/model.hpp"

namespace indsys {

// Nodes of the transport graph: unit indices first, then warehouses.
inline int node_of_unit(int unit) { return unit; }
inline int node_of_warehouse(const Dataset& d, int warehouse) {
  return d.n_units() + warehouse;
}
inline bool node_is_unit(const Dataset& d, int node) { return node < d.n_units(); }
inline int node_unit(int node) { return node; }
inline int node_warehouse(const Dataset& d, int node) { return node - d.n_units(); }
Id node_id(const Dataset& d, int node);

// One hop between two nodes, backed by a meta-link.
struct Hop {
  int src = -1;
  int dst = -1;
  int link = -1;  // index into dataset.links
};

// Node sequence from producer to consumer: unit, zero to two warehouses, unit.
using RoutePath = std::vector<Hop>;

// Precomputed view of the transportation meta-graph. Routes between two units
// follow the shape u -> w* -> v with at most one source-side and one
// target-side warehouse; a single intervening warehouse must be near the
// source or the target, the two-warehouse form needs one near each.
class TransportIndex {
 public:
  explicit TransportIndex(const Dataset& dataset);

  static constexpr double kUnreachable = std::numeric_limits<double>::infinity();

  // Meta-link index for src -> dst, or -1.
  int direct_link(int src_node, int dst_node) const;

  // Largest alternative distance on a link.
  double max_distance(int link) const { return link_max_distance_[link]; }

  // All candidate routes between two distinct units, direct first, then
  // warehouse-mediated in deterministic order.
  std::vector<RoutePath> routes(int src_unit, int dst_unit) const;

  // Upper-bound distance used by Phase I: the direct link's maximum
  // alternative distance when a direct link exists, otherwise the cheapest
  // warehouse route measured by per-hop maxima. kUnreachable when no route.
  double upper_bound_distance(int src_unit, int dst_unit) const {
    return ub_distance_[static_cast<std::size_t>(src_unit) * n_units_ + dst_unit];
  }

  bool reachable(int src_unit, int dst_unit) const {
    return upper_bound_distance(src_unit, dst_unit) < kUnreachable;
  }

 private:
  const Dataset& dataset_;
  int n_units_ = 0;
  int n_nodes_ = 0;
  std::vector<std::vector<std::pair<int, int>>> out_links_;  // node -> (dst, link)
  std::vector<int> link_lookup_;                             // dense src*n+dst -> link
  std::vector<double> link_max_distance_;
  std::vector<double> ub_distance_;
  std::vector<std::vector<int>> nearby_warehouses_;  // unit -> warehouse indices

  void build_upper_bounds();
};

}  // namespace indsys

#endif  // INDSYS_TRANSPORT_INDEX_HPP
