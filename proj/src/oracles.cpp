#include "indsys/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace indsys {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// --- independent transport arithmetic -------------------------------------
// Rebuilt from the raw link table on purpose: the production path keeps its
// own index, and these two must be allowed to disagree in tests.

struct RawGraph {
  std::map<std::pair<Id, Id>, double> max_dist;  // (source, dest) -> max alternative
  std::vector<std::vector<Id>> nearby;           // unit -> warehouse ids
};

RawGraph raw_graph(const Dataset& d) {
  RawGraph g;
  for (const auto& l : d.links) {
    double m = 0;
    for (const auto& a : l.alternatives) m = std::max(m, a.distance_km);
    g.max_dist[{l.source, l.dest}] = m;
  }
  g.nearby.assign(d.units.size(), {});
  for (const auto& w : d.warehouses) {
    for (const auto& uid : w.nearby_units) {
      g.nearby[d.unit_index.at(uid)].push_back(w.id);
    }
  }
  return g;
}

double raw_pair_distance(const Dataset& d, const RawGraph& g, int u, int v) {
  if (u == v) return 0;
  const Id& a = d.units[u].id;
  const Id& b = d.units[v].id;
  const auto direct = g.max_dist.find({a, b});
  if (direct != g.max_dist.end()) return direct->second;

  double best = kInf;
  std::set<Id> singles(g.nearby[u].begin(), g.nearby[u].end());
  singles.insert(g.nearby[v].begin(), g.nearby[v].end());
  for (const Id& w : singles) {
    const auto in = g.max_dist.find({a, w});
    const auto out = g.max_dist.find({w, b});
    if (in != g.max_dist.end() && out != g.max_dist.end()) {
      best = std::min(best, in->second + out->second);
    }
  }
  for (const Id& ws : g.nearby[u]) {
    for (const Id& wt : g.nearby[v]) {
      if (ws == wt) continue;
      const auto h1 = g.max_dist.find({a, ws});
      const auto h2 = g.max_dist.find({ws, wt});
      const auto h3 = g.max_dist.find({wt, b});
      if (h1 != g.max_dist.end() && h2 != g.max_dist.end() && h3 != g.max_dist.end()) {
        best = std::min(best, h1->second + h2->second + h3->second);
      }
    }
  }
  return best;
}

// --- assignment enumeration -------------------------------------------------

struct EnumState {
  std::vector<double> country, supplier, unit;
  std::vector<std::vector<std::pair<int, double>>> chosen;  // part -> (unit, share)
};

bool caps_ok(const Dataset& d, const EnumState& s, int unit, double va) {
  return s.unit[unit] + va <= d.unit_va_max[unit] + 1e-9 &&
         s.supplier[d.unit_supplier[unit]] + va <=
             d.supplier_va_max[d.unit_supplier[unit]] + 1e-9 &&
         s.country[d.unit_country[unit]] + va <= d.country_va_max[d.unit_country[unit]] + 1e-9;
}

double assignment_distance(const Dataset& d, const RawGraph& g, const EnumState& s) {
  double total = 0;
  for (int part = 0; part < d.n_parts(); ++part) {
    const int parent = d.parent_of[part];
    if (parent < 0) continue;
    for (const auto& [pu, psh] : s.chosen[part]) {
      for (const auto& [cu, csh] : s.chosen[parent]) {
        if (pu == cu) continue;
        const double dist = raw_pair_distance(d, g, pu, cu);
        if (dist == kInf) return kInf;
        total += dist;
      }
    }
  }
  return total;
}

}  // namespace

AssignmentCensus enumerate_assignments(const Dataset& dataset, Sourcing mode, int fal_count,
                                       const OracleBudget& budget) {
  if (dataset.n_parts() > budget.max_parts) {
    throw BudgetError("oracle budget: too many parts");
  }
  if (dataset.n_units() > budget.max_units) {
    throw BudgetError("oracle budget: too many units");
  }
  if (mode == Sourcing::kDouble && fal_count != 1) {
    throw BudgetError("oracle supports parallel assembly in single mode only");
  }

  const RawGraph graph = raw_graph(dataset);
  AssignmentCensus census;
  census.best_dist = kInf;

  EnumState state;
  state.country.assign(dataset.countries.size(), 0);
  state.supplier.assign(dataset.suppliers.size(), 0);
  state.unit.assign(dataset.units.size(), 0);
  state.chosen.assign(dataset.n_parts(), {});

  // Share grid 0.2..0.8 in steps of 0.05 over unordered unit pairs; both
  // orientations of a split are reached because the full grid is scanned.
  std::vector<double> shares;
  for (int i = 0; i <= 12; ++i) shares.push_back(0.2 + 0.05 * i);
  if (mode == Sourcing::kDouble) {
    double states = 1;
    const double per_part =
        static_cast<double>(dataset.n_units()) * dataset.n_units() / 2.0 * shares.size();
    for (int p = 0; p < dataset.n_parts(); ++p) states *= per_part;
    if (states > 2e7) {
      throw BudgetError("oracle budget: double-sourcing enumeration too large");
    }
  }

  const std::function<void(int)> recurse = [&](int part) {
    if (part == dataset.n_parts()) {
      const double dist = assignment_distance(dataset, graph, state);
      if (dist == kInf) return;  // unreachable pair: not a valid industrial system
      census.feasible_count++;
      if (!census.found || dist < census.best_dist) {
        census.found = true;
        census.best_dist = dist;
        census.best.mode = mode;
        census.best.fal_count = fal_count;
        census.best.per_part.assign(dataset.n_parts(), {});
        for (int p = 0; p < dataset.n_parts(); ++p) {
          for (const auto& [u, sh] : state.chosen[p]) {
            census.best.per_part[p].push_back({u, sh});
          }
        }
      }
      return;
    }
    const double va = dataset.parts[part].value_added;
    const auto& producers = dataset.producers_of[part];

    const auto try_units = [&](const std::vector<std::pair<int, double>>& picks) {
      for (const auto& [u, sh] : picks) {
        state.unit[u] += va * sh;
        state.supplier[dataset.unit_supplier[u]] += va * sh;
        state.country[dataset.unit_country[u]] += va * sh;
      }
      state.chosen[part] = picks;
      recurse(part + 1);
      state.chosen[part].clear();
      for (const auto& [u, sh] : picks) {
        state.unit[u] -= va * sh;
        state.supplier[dataset.unit_supplier[u]] -= va * sh;
        state.country[dataset.unit_country[u]] -= va * sh;
      }
    };

    if (mode == Sourcing::kSingle) {
      if (part == dataset.root_part && fal_count > 1) {
        // Combinations of fal_count distinct units with equal shares.
        std::vector<int> combo;
        const double share = 1.0 / fal_count;
        const std::function<void(std::size_t)> pick = [&](std::size_t from) {
          if (static_cast<int>(combo.size()) == fal_count) {
            std::vector<std::pair<int, double>> picks;
            bool ok = true;
            EnumState probe = state;
            for (int u : combo) {
              if (!caps_ok(dataset, probe, u, va * share)) {
                ok = false;
                break;
              }
              probe.unit[u] += va * share;
              probe.supplier[dataset.unit_supplier[u]] += va * share;
              probe.country[dataset.unit_country[u]] += va * share;
              picks.push_back({u, share});
            }
            if (ok) try_units(picks);
            return;
          }
          for (std::size_t i = from; i < producers.size(); ++i) {
            combo.push_back(producers[i]);
            pick(i + 1);
            combo.pop_back();
          }
        };
        pick(0);
      } else {
        for (int u : producers) {
          if (caps_ok(dataset, state, u, va)) try_units({{u, 1.0}});
        }
      }
    } else {
      bool multi_country = false;
      for (int u : producers) {
        if (dataset.unit_country[u] != dataset.unit_country[producers.front()]) {
          multi_country = true;
          break;
        }
      }
      for (std::size_t i = 0; i < producers.size(); ++i) {
        for (std::size_t j = i + 1; j < producers.size(); ++j) {
          const int u1 = producers[i];
          const int u2 = producers[j];
          if (multi_country && dataset.unit_country[u1] == dataset.unit_country[u2]) continue;
          for (double a : shares) {
            if (!caps_ok(dataset, state, u1, va * a)) continue;
            EnumState probe = state;
            probe.unit[u1] += va * a;
            probe.supplier[dataset.unit_supplier[u1]] += va * a;
            probe.country[dataset.unit_country[u1]] += va * a;
            if (!caps_ok(dataset, probe, u2, va * (1 - a))) continue;
            try_units({{u1, a}, {u2, 1 - a}});
          }
        }
      }
    }
  };
  recurse(0);
  return census;
}

namespace {

// Single-batched ride count, recomputed from scratch: grid count over all six
// axis orders.
std::int64_t raw_rides(const Box& part, const Box& container, std::int64_t qty) {
  if (qty <= 0) return 0;
  const std::int64_t pd[3] = {part.l, part.w, part.h};
  const std::int64_t cd[3] = {container.l, container.w, container.h};
  std::int64_t best = 0;
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& p : perms) {
    if (pd[p[0]] > cd[0] || pd[p[1]] > cd[1] || pd[p[2]] > cd[2]) continue;
    best = std::max(best, (cd[0] / pd[p[0]]) * (cd[1] / pd[p[1]]) * (cd[2] / pd[p[2]]));
  }
  if (best == 0) return -1;  // does not fit at all
  return (qty + best - 1) / best;
}

double raw_alt_score(const Dataset& d, const Box& part, std::int64_t qty, int mean,
                     double distance_km, CriterionKind kind) {
  const TransportMean& m = d.transport_means[mean];
  const std::int64_t rides = raw_rides(part, m.container, qty);
  if (rides < 0) return kInf;
  const double n = static_cast<double>(rides);
  switch (kind) {
    case CriterionKind::kCo2: return n * distance_km * m.co2_g_per_km;
    case CriterionKind::kDuration: return n * distance_km / m.speed_km_per_h;
    case CriterionKind::kDistance: return n * distance_km;
    case CriterionKind::kCost: return n * distance_km * m.cost_eur_per_km;
    case CriterionKind::kTradeoff: break;
  }
  throw BudgetError("route oracle scores single criteria only");
}

}  // namespace

RoutePlanCensus enumerate_routes(const TransportNetwork& network, const DemandSchedule& schedule,
                                 const Dataset& dataset, const Criterion& criterion,
                                 const OracleBudget& budget) {
  RoutePlanCensus census;
  for (const auto& flow : network.flows) {
    if (static_cast<int>(flow.routes.size()) > budget.max_routes_per_flow) {
      throw BudgetError("oracle budget: too many routes for flow");
    }
    const Box& bbox = dataset.parts[flow.spec.part].bbox;
    const std::int64_t qty = schedule.flow_quantity[flow.spec.id];

    double best_total = kInf;
    double worst_total = -kInf;
    int best_route = -1;
    std::vector<int> best_means;
    for (std::size_t ri = 0; ri < flow.routes.size(); ++ri) {
      // Mean choices are independent per edge, so the route optimum is the
      // sum of per-edge minima; the worst plan takes per-edge maxima.
      double total_min = 0, total_max = 0;
      std::vector<int> means;
      bool usable = true;
      for (const auto& e : flow.routes[ri].edges) {
        double edge_min = kInf, edge_max = -kInf;
        int edge_mean = -1;
        // Lexicographic-by-mean-id scan keeps the shared tie rule.
        std::vector<const EdgeAlternative*> alts;
        for (const auto& a : e.alternatives) alts.push_back(&a);
        std::sort(alts.begin(), alts.end(), [&](const EdgeAlternative* a, const EdgeAlternative* b) {
          return dataset.transport_means[a->mean].id < dataset.transport_means[b->mean].id;
        });
        for (const EdgeAlternative* a : alts) {
          const double s = raw_alt_score(dataset, bbox, qty, a->mean, a->distance_km,
                                         criterion.kind);
          if (s == kInf) continue;
          if (s < edge_min) {
            edge_min = s;
            edge_mean = a->mean;
          }
          edge_max = std::max(edge_max, s);
        }
        if (edge_mean < 0) {
          usable = false;
          break;
        }
        total_min += edge_min;
        total_max += edge_max;
        means.push_back(edge_mean);
      }
      if (!usable) continue;
      if (total_min < best_total) {
        best_total = total_min;
        best_route = static_cast<int>(ri);
        best_means = means;
      }
      worst_total = std::max(worst_total, total_max);
    }
    if (best_route < 0) {
      throw Error("route oracle: flow " + std::to_string(flow.spec.id) + " has no usable route");
    }
    census.best_total += best_total;
    census.worst_total += worst_total;
    census.best_choices.push_back({flow.spec.id, best_route, best_total});
    census.best_means_per_edge.push_back(best_means);
  }
  return census;
}

namespace {

struct PlacedBox {
  std::int64_t x1, y1, z1, x2, y2, z2;
};

bool overlap(const PlacedBox& a, const PlacedBox& b) {
  return a.x1 < b.x2 && b.x1 < a.x2 && a.y1 < b.y2 && b.y1 < a.y2 && a.z1 < b.z2 && b.z1 < a.z2;
}

// Can `boxes` all be placed in one container? Positions come from the lattice
// of sums of other items' extents (origin plus each placed item's far faces).
bool lattice_feasible(const std::vector<Box>& boxes, const Box& container) {
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<PlacedBox> placed;
  const std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (i == boxes.size()) return true;
    const std::int64_t dims[3] = {boxes[i].l, boxes[i].w, boxes[i].h};
    std::set<std::int64_t> xs{0}, ys{0}, zs{0};
    for (const auto& p : placed) {
      xs.insert(p.x2);
      ys.insert(p.y2);
      zs.insert(p.z2);
    }
    for (const auto& perm : perms) {
      const std::int64_t dx = dims[perm[0]], dy = dims[perm[1]], dz = dims[perm[2]];
      if (dx > container.l || dy > container.w || dz > container.h) continue;
      for (std::int64_t x : xs) {
        if (x + dx > container.l) continue;
        for (std::int64_t y : ys) {
          if (y + dy > container.w) continue;
          for (std::int64_t z : zs) {
            if (z + dz > container.h) continue;
            const PlacedBox cand{x, y, z, x + dx, y + dy, z + dz};
            bool ok = true;
            for (const auto& p : placed) {
              if (overlap(cand, p)) {
                ok = false;
                break;
              }
            }
            if (!ok) continue;
            placed.push_back(cand);
            if (place(i + 1)) return true;
            placed.pop_back();
          }
        }
      }
    }
    return false;
  };
  return place(0);
}

}  // namespace

std::int64_t enumerate_packings(const std::vector<MixedItem>& items, const Box& container,
                                const OracleBudget& budget) {
  std::vector<Box> boxes;
  for (const auto& it : items) {
    for (std::int64_t q = 0; q < it.quantity; ++q) boxes.push_back(it.bbox);
  }
  if (static_cast<int>(boxes.size()) > budget.max_packed_items) {
    throw BudgetError("oracle budget: too many items to pack");
  }
  if (boxes.empty()) return 0;
  for (const auto& b : boxes) {
    bool any = false;
    const std::int64_t pd[3] = {b.l, b.w, b.h};
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) {
      if (pd[p[0]] <= container.l && pd[p[1]] <= container.w && pd[p[2]] <= container.h) {
        any = true;
        break;
      }
    }
    if (!any) return -1;  // infeasible: an item fits no orientation
  }

  const int n = static_cast<int>(boxes.size());
  for (int k = 1; k <= n; ++k) {
    // Assign items to k groups (first item pinned to group 0 for symmetry),
    // then check each group with the lattice search.
    std::vector<int> group(n, 0);
    const std::function<bool(int, int)> assign = [&](int i, int used) -> bool {
      if (i == n) {
        if (used != k) return false;
        for (int g = 0; g < k; ++g) {
          std::vector<Box> sub;
          for (int j = 0; j < n; ++j) {
            if (group[j] == g) sub.push_back(boxes[j]);
          }
          if (!lattice_feasible(sub, container)) return false;
        }
        return true;
      }
      for (int g = 0; g <= std::min(used, k - 1); ++g) {
        group[i] = g;
        if (assign(i + 1, std::max(used, g + 1))) return true;
      }
      return false;
    };
    if (assign(1, 1)) return k;
  }
  return n;
}

}  // namespace indsys
