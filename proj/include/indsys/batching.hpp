#ifndef INDSYS_BATCHING_HPP
#define INDSYS_BATCHING_HPP

#include <cstdint>
#include <vector>

#include "indsys/model.hpp"
#include "indsys/rng.hpp"

namespace indsys {

// Items are axis-aligned bounding boxes; the six axis permutations are the
// allowed orientations.
inline constexpr int kOrientations = 6;
Box orient(const Box& b, int orientation);

// True when some orientation of `part` fits componentwise into `container`.
bool fits(const Box& part, const Box& container);

struct Placement {
  int item = 0;         // index into the expanded item list
  int orientation = 0;  // 0..5
  std::int64_t x = 0, y = 0, z = 0;
};

// One container's worth of packing output. For single batching there is one
// logical result describing the whole edge.
struct BatchResult {
  std::int64_t per_container_count = 0;  // items per container (batch size b)
  std::int64_t n_containers = 0;         // rides needed for the demand
  std::vector<Placement> placements;     // filled by the mixed packers
};

// Single-type batching: the best axis-aligned grid over the six orientations
// gives the per-container count; rides are the ceiling of demand / count.
// A part that fits no orientation yields count 0 and the caller prunes the
// link.
BatchResult pack_single(const Box& part, const Box& container, std::int64_t demand);

struct MixedItem {
  Box bbox;
  std::int64_t quantity = 1;
};

struct GraspParams {
  int rcl_size = 3;
  int iterations = 200;
  int local_search_moves = 200;
};

// Mixed-type batching via greedy randomized construction over residual free
// spaces followed by swap/relocate local search between containers. Returns
// one BatchResult per opened container. Throws Error when an item fits no
// orientation of the container.
std::vector<BatchResult> pack_mixed(const std::vector<MixedItem>& items, const Box& container,
                                    Rng& rng, const GraspParams& params = {});

// Deterministic layer-building alternative: items sorted by footprint area,
// largest first, stacked into layers. Same validity contract as pack_mixed.
std::vector<BatchResult> pack_laff(const std::vector<MixedItem>& items, const Box& container);

}  // namespace indsys

#endif  // INDSYS_BATCHING_HPP
