#include "indsys/batching.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <tuple>

namespace indsys {

namespace {

constexpr int kPerm[kOrientations][3] = {
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
};

struct FreeSpace {
  std::int64_t x1, y1, z1, x2, y2, z2;

  std::int64_t dx() const { return x2 - x1; }
  std::int64_t dy() const { return y2 - y1; }
  std::int64_t dz() const { return z2 - z1; }
  std::int64_t volume() const { return dx() * dy() * dz(); }

  bool contains(const FreeSpace& o) const {
    return x1 <= o.x1 && y1 <= o.y1 && z1 <= o.z1 && x2 >= o.x2 && y2 >= o.y2 && z2 >= o.z2;
  }
  bool intersects(const FreeSpace& o) const {
    return x1 < o.x2 && o.x1 < x2 && y1 < o.y2 && o.y1 < y2 && z1 < o.z2 && o.z1 < z2;
  }
};

// Open container tracked as a set of maximal free spaces.
struct Container {
  std::vector<Placement> placements;
  std::vector<FreeSpace> spaces;

  explicit Container(const Box& c) { spaces.push_back({0, 0, 0, c.l, c.w, c.h}); }
};

void subtract_box(std::vector<FreeSpace>& spaces, const FreeSpace& used) {
  std::vector<FreeSpace> next;
  next.reserve(spaces.size() + 6);
  for (const auto& s : spaces) {
    if (!s.intersects(used)) {
      next.push_back(s);
      continue;
    }
    if (used.x1 > s.x1) next.push_back({s.x1, s.y1, s.z1, used.x1, s.y2, s.z2});
    if (used.x2 < s.x2) next.push_back({used.x2, s.y1, s.z1, s.x2, s.y2, s.z2});
    if (used.y1 > s.y1) next.push_back({s.x1, s.y1, s.z1, s.x2, used.y1, s.z2});
    if (used.y2 < s.y2) next.push_back({s.x1, used.y2, s.z1, s.x2, s.y2, s.z2});
    if (used.z1 > s.z1) next.push_back({s.x1, s.y1, s.z1, s.x2, s.y2, used.z1});
    if (used.z2 < s.z2) next.push_back({s.x1, s.y1, used.z2, s.x2, s.y2, s.z2});
  }
  // Drop spaces contained in another (keeps the list maximal and small).
  std::vector<FreeSpace> pruned;
  for (std::size_t i = 0; i < next.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < next.size() && !dominated; ++j) {
      if (i == j) continue;
      if (next[j].contains(next[i]) && !(next[i].contains(next[j]) && i < j)) {
        dominated = true;
      }
    }
    if (!dominated) pruned.push_back(next[i]);
  }
  spaces = std::move(pruned);
}

void place_in(Container& c, int item, const Box& oriented, int orientation,
              const FreeSpace& space) {
  Placement p;
  p.item = item;
  p.orientation = orientation;
  p.x = space.x1;
  p.y = space.y1;
  p.z = space.z1;
  c.placements.push_back(p);
  subtract_box(c.spaces, {space.x1, space.y1, space.z1, space.x1 + oriented.l,
                          space.y1 + oriented.w, space.z1 + oriented.h});
}

struct Fit {
  int orientation = -1;
  int space = -1;
  std::int64_t waste = std::numeric_limits<std::int64_t>::max();
};

// Best-fit placement of one box into a container: smallest leftover volume of
// the hosting space, ties to the lower-left-near corner for determinism.
Fit best_fit(const Container& c, const Box& b) {
  Fit best;
  for (std::size_t si = 0; si < c.spaces.size(); ++si) {
    const auto& s = c.spaces[si];
    for (int o = 0; o < kOrientations; ++o) {
      const Box ob = orient(b, o);
      if (ob.l > s.dx() || ob.w > s.dy() || ob.h > s.dz()) continue;
      const std::int64_t waste = s.volume() - ob.volume();
      const bool better =
          waste < best.waste ||
          (waste == best.waste && best.space >= 0 &&
           std::make_tuple(s.z1, s.y1, s.x1, o) <
               std::make_tuple(c.spaces[best.space].z1, c.spaces[best.space].y1,
                               c.spaces[best.space].x1, best.orientation));
      if (best.space < 0 || better) {
        best = {o, static_cast<int>(si), waste};
      }
    }
  }
  return best;
}

std::vector<Box> expand_items(const std::vector<MixedItem>& items, const Box& container) {
  std::vector<Box> expanded;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!fits(items[i].bbox, container)) {
      throw Error("item " + std::to_string(i) + " fits no orientation of the container");
    }
    if (items[i].quantity < 1) throw Error("item quantities must be >= 1");
    for (std::int64_t q = 0; q < items[i].quantity; ++q) expanded.push_back(items[i].bbox);
  }
  return expanded;
}

// Packs the given instances in the given order, first-fit over open
// containers with best-fit placement inside each.
std::vector<Container> construct(const std::vector<Box>& boxes, const std::vector<int>& order,
                                 const Box& container, Rng* rng, int rcl_size) {
  std::vector<Container> open;
  std::vector<int> pending = order;
  while (!pending.empty()) {
    // Candidate = (pending position, container, fit). Rank by waste; the RCL
    // keeps construction greedy but randomized.
    struct Cand {
      std::size_t pos;
      int cont;
      Fit fit;
    };
    std::vector<Cand> cands;
    const std::size_t scan = std::min<std::size_t>(pending.size(), 8);
    for (std::size_t pi = 0; pi < scan; ++pi) {
      for (std::size_t ci = 0; ci < open.size(); ++ci) {
        const Fit f = best_fit(open[ci], boxes[pending[pi]]);
        if (f.space >= 0) cands.push_back({pi, static_cast<int>(ci), f});
      }
    }
    if (cands.empty()) {
      // Nothing fits anywhere open; a fresh container always admits the item.
      open.emplace_back(container);
      const Fit f = best_fit(open.back(), boxes[pending.front()]);
      place_in(open.back(), pending.front(), orient(boxes[pending.front()], f.orientation),
               f.orientation, open.back().spaces[f.space]);
      pending.erase(pending.begin());
      continue;
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      return a.fit.waste < b.fit.waste;
    });
    std::size_t pick = 0;
    if (rng != nullptr && rcl_size > 1) {
      pick = static_cast<std::size_t>(
          rng->bounded(std::min<std::uint64_t>(cands.size(), rcl_size)));
    }
    const Cand& chosen = cands[pick];
    place_in(open[chosen.cont], pending[chosen.pos],
             orient(boxes[pending[chosen.pos]], chosen.fit.orientation), chosen.fit.orientation,
             open[chosen.cont].spaces[chosen.fit.space]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(chosen.pos));
  }
  return open;
}

// Tries to dissolve the emptiest container by relocating its items, then by
// single swaps that free enough room. First improvement wins.
bool improve(std::vector<Container>& open, const std::vector<Box>& boxes, const Box& container,
             int move_budget) {
  if (open.size() < 2) return false;
  std::size_t victim = 0;
  for (std::size_t i = 1; i < open.size(); ++i) {
    if (open[i].placements.size() < open[victim].placements.size()) victim = i;
  }

  // Relocate: re-insert every victim item somewhere else.
  std::vector<Container> trial(open.begin(), open.end());
  std::vector<int> homeless;
  for (const auto& p : trial[victim].placements) homeless.push_back(p.item);
  trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(victim));
  bool all_placed = true;
  int moves = 0;
  for (int item : homeless) {
    Fit best;
    int best_cont = -1;
    for (std::size_t ci = 0; ci < trial.size(); ++ci) {
      const Fit f = best_fit(trial[ci], boxes[item]);
      if (f.space >= 0 && (best_cont < 0 || f.waste < best.waste)) {
        best = f;
        best_cont = static_cast<int>(ci);
      }
    }
    if (best_cont < 0 || ++moves > move_budget) {
      all_placed = false;
      break;
    }
    place_in(trial[best_cont], item, orient(boxes[item], best.orientation), best.orientation,
             trial[best_cont].spaces[best.space]);
  }
  if (all_placed) {
    open = std::move(trial);
    return true;
  }

  // Swap: exchange one victim item with a smaller item of another container,
  // then retry the relocate pass on the next call.
  for (std::size_t ci = 0; ci < open.size(); ++ci) {
    if (ci == victim) continue;
    for (std::size_t a = 0; a < open[victim].placements.size(); ++a) {
      for (std::size_t b = 0; b < open[ci].placements.size(); ++b) {
        const int ia = open[victim].placements[a].item;
        const int ib = open[ci].placements[b].item;
        if (boxes[ib].volume() >= boxes[ia].volume()) continue;
        // Rebuild both containers with the items exchanged.
        std::vector<int> va, vb;
        for (std::size_t k = 0; k < open[victim].placements.size(); ++k) {
          va.push_back(k == a ? ib : open[victim].placements[k].item);
        }
        for (std::size_t k = 0; k < open[ci].placements.size(); ++k) {
          vb.push_back(k == b ? ia : open[ci].placements[k].item);
        }
        const auto rebuild = [&](const std::vector<int>& itemset) {
          Container c(container);
          for (int item : itemset) {
            const Fit f = best_fit(c, boxes[item]);
            if (f.space < 0) return std::optional<Container>{};
            place_in(c, item, orient(boxes[item], f.orientation), f.orientation,
                     c.spaces[f.space]);
          }
          return std::optional<Container>{std::move(c)};
        };
        auto ra = rebuild(va);
        if (!ra) continue;
        auto rb = rebuild(vb);
        if (!rb) continue;
        open[victim] = std::move(*ra);
        open[ci] = std::move(*rb);
        return true;
      }
    }
  }
  return false;
}

std::vector<BatchResult> to_results(const std::vector<Container>& open) {
  std::vector<BatchResult> out;
  out.reserve(open.size());
  for (const auto& c : open) {
    BatchResult r;
    r.per_container_count = static_cast<std::int64_t>(c.placements.size());
    r.n_containers = static_cast<std::int64_t>(open.size());
    r.placements = c.placements;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Box orient(const Box& b, int orientation) {
  const auto d = b.dims();
  const auto& p = kPerm[orientation];
  return Box{d[p[0]], d[p[1]], d[p[2]]};
}

bool fits(const Box& part, const Box& container) {
  for (int o = 0; o < kOrientations; ++o) {
    const Box ob = orient(part, o);
    if (ob.l <= container.l && ob.w <= container.w && ob.h <= container.h) return true;
  }
  return false;
}

BatchResult pack_single(const Box& part, const Box& container, std::int64_t demand) {
  if (demand < 1) throw Error("pack_single needs demand >= 1");
  std::int64_t best = 0;
  for (int o = 0; o < kOrientations; ++o) {
    const Box ob = orient(part, o);
    if (ob.l > container.l || ob.w > container.w || ob.h > container.h) continue;
    const std::int64_t count = (container.l / ob.l) * (container.w / ob.w) * (container.h / ob.h);
    best = std::max(best, count);
  }
  BatchResult r;
  r.per_container_count = best;
  r.n_containers = best > 0 ? (demand + best - 1) / best : 0;
  return r;
}

std::vector<BatchResult> pack_mixed(const std::vector<MixedItem>& items, const Box& container,
                                    Rng& rng, const GraspParams& params) {
  const std::vector<Box> boxes = expand_items(items, container);
  if (boxes.empty()) return {};

  // Volume-descending start order; restarts perturb it.
  std::vector<int> base(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) base[i] = static_cast<int>(i);
  std::stable_sort(base.begin(), base.end(),
                   [&](int a, int b) { return boxes[a].volume() > boxes[b].volume(); });

  std::vector<Container> best;
  const int iterations = std::max(1, params.iterations);
  for (int it = 0; it < iterations; ++it) {
    std::vector<int> order = base;
    if (it > 0) {
      // Shuffle a random prefix-window to diversify while staying roughly
      // volume-ordered.
      const std::size_t span = 1 + rng.bounded(order.size());
      for (std::size_t i = 0; i < span && i + 1 < order.size(); ++i) {
        const std::size_t j = i + rng.bounded(order.size() - i);
        std::swap(order[i], order[j]);
      }
    }
    std::vector<Container> open = construct(boxes, order, container, &rng, params.rcl_size);
    for (int m = 0; m < params.local_search_moves; ++m) {
      if (!improve(open, boxes, container, params.local_search_moves)) break;
    }
    if (best.empty() || open.size() < best.size()) best = std::move(open);
    if (best.size() == 1) break;
  }
  return to_results(best);
}

std::vector<BatchResult> pack_laff(const std::vector<MixedItem>& items, const Box& container) {
  const std::vector<Box> boxes = expand_items(items, container);
  if (boxes.empty()) return {};

  // Footprint area of the flattest orientation, largest first.
  const auto footprint = [](const Box& b) {
    auto d = b.dims();
    std::sort(d.begin(), d.end());
    return d[1] * d[2];  // two largest dims
  };
  std::vector<int> order(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return footprint(boxes[a]) > footprint(boxes[b]); });

  std::vector<Container> open;
  std::vector<int> pending = order;
  while (!pending.empty()) {
    open.emplace_back(container);
    Container& c = open.back();
    std::int64_t layer_z = 0;
    while (layer_z < container.h) {
      // Open a layer with the largest-area pending item that still fits,
      // oriented flat (min height).
      int first = -1;
      int first_orient = -1;
      for (std::size_t pi = 0; pi < pending.size() && first < 0; ++pi) {
        for (int o = 0; o < kOrientations; ++o) {
          const Box ob = orient(boxes[pending[pi]], o);
          if (ob.l <= container.l && ob.w <= container.w && ob.h <= container.h - layer_z) {
            if (first_orient < 0 || ob.h < orient(boxes[pending[pi]], first_orient).h) {
              first = static_cast<int>(pi);
              first_orient = o;
            }
          }
        }
      }
      if (first < 0) break;
      const std::int64_t layer_h = orient(boxes[pending[first]], first_orient).h;

      // 2D fill of the layer plane, tracked with the same free-space split in
      // a slab of height layer_h.
      std::vector<FreeSpace> slab{{0, 0, layer_z, container.l, container.w, layer_z + layer_h}};
      const auto try_place = [&](int pending_pos) {
        const Box& b = boxes[pending[pending_pos]];
        int bo = -1;
        int bs = -1;
        std::int64_t bwaste = std::numeric_limits<std::int64_t>::max();
        for (std::size_t si = 0; si < slab.size(); ++si) {
          for (int o = 0; o < kOrientations; ++o) {
            const Box ob = orient(b, o);
            if (ob.h > layer_h) continue;
            if (ob.l > slab[si].dx() || ob.w > slab[si].dy()) continue;
            const std::int64_t waste = slab[si].dx() * slab[si].dy() - ob.l * ob.w;
            if (waste < bwaste) {
              bwaste = waste;
              bo = o;
              bs = static_cast<int>(si);
            }
          }
        }
        if (bs < 0) return false;
        const Box ob = orient(b, bo);
        Placement p;
        p.item = pending[pending_pos];
        p.orientation = bo;
        p.x = slab[bs].x1;
        p.y = slab[bs].y1;
        p.z = slab[bs].z1;
        c.placements.push_back(p);
        subtract_box(slab, {p.x, p.y, p.z, p.x + ob.l, p.y + ob.w, p.z + ob.h});
        pending.erase(pending.begin() + pending_pos);
        return true;
      };

      try_place(first);
      for (std::size_t pi = 0; pi < pending.size();) {
        if (!try_place(static_cast<int>(pi))) ++pi;
      }
      layer_z += layer_h;
    }
    if (c.placements.empty()) {
      throw Error("layer packer failed to place any item in a fresh container");
    }
  }
  return to_results(open);
}

}  // namespace indsys
