#include "indsys/transport_index.hpp"

#include <algorithm>

namespace indsys {

Id node_id(const Dataset& d, int node) {
  if (node_is_unit(d, node)) return d.units[node].id;
  return d.warehouses[node_warehouse(d, node)].id;
}

TransportIndex::TransportIndex(const Dataset& dataset)
    : dataset_(dataset),
      n_units_(dataset.n_units()),
      n_nodes_(dataset.n_units() + dataset.n_warehouses()) {
  out_links_.assign(n_nodes_, {});
  link_lookup_.assign(static_cast<std::size_t>(n_nodes_) * n_nodes_, -1);
  link_max_distance_.assign(dataset.links.size(), 0.0);

  for (std::size_t li = 0; li < dataset.links.size(); ++li) {
    const MetaLink& l = dataset.links[li];
    const auto to_node = [&](const Id& id) {
      auto uit = dataset.unit_index.find(id);
      if (uit != dataset.unit_index.end()) return node_of_unit(uit->second);
      return node_of_warehouse(dataset, dataset.warehouse_index.at(id));
    };
    const int s = to_node(l.source);
    const int t = to_node(l.dest);
    out_links_[s].emplace_back(t, static_cast<int>(li));
    link_lookup_[static_cast<std::size_t>(s) * n_nodes_ + t] = static_cast<int>(li);
    double dmax = 0.0;
    for (const auto& a : l.alternatives) dmax = std::max(dmax, a.distance_km);
    link_max_distance_[li] = dmax;
  }
  for (auto& v : out_links_) std::sort(v.begin(), v.end());

  nearby_warehouses_.assign(n_units_, {});
  for (int wi = 0; wi < dataset.n_warehouses(); ++wi) {
    for (int u : dataset.warehouse_nearby[wi]) {
      nearby_warehouses_[u].push_back(wi);
    }
  }
  for (auto& v : nearby_warehouses_) std::sort(v.begin(), v.end());

  build_upper_bounds();
}

int TransportIndex::direct_link(int src_node, int dst_node) const {
  return link_lookup_[static_cast<std::size_t>(src_node) * n_nodes_ + dst_node];
}

std::vector<RoutePath> TransportIndex::routes(int src_unit, int dst_unit) const {
  std::vector<RoutePath> out;
  if (src_unit == dst_unit) return out;
  const int s = node_of_unit(src_unit);
  const int t = node_of_unit(dst_unit);

  const int direct = direct_link(s, t);
  if (direct >= 0) out.push_back({{s, t, direct}});

  // Single intervening warehouse, near the source or the target.
  std::vector<int> single;
  for (int w : nearby_warehouses_[src_unit]) single.push_back(w);
  for (int w : nearby_warehouses_[dst_unit]) single.push_back(w);
  std::sort(single.begin(), single.end());
  single.erase(std::unique(single.begin(), single.end()), single.end());
  for (int w : single) {
    const int wn = node_of_warehouse(dataset_, w);
    const int in = direct_link(s, wn);
    const int outl = direct_link(wn, t);
    if (in >= 0 && outl >= 0) {
      out.push_back({{s, wn, in}, {wn, t, outl}});
    }
  }

  // Source-side plus target-side warehouse.
  for (int ws : nearby_warehouses_[src_unit]) {
    for (int wt : nearby_warehouses_[dst_unit]) {
      if (ws == wt) continue;
      const int a = node_of_warehouse(dataset_, ws);
      const int b = node_of_warehouse(dataset_, wt);
      const int h1 = direct_link(s, a);
      const int h2 = direct_link(a, b);
      const int h3 = direct_link(b, t);
      if (h1 >= 0 && h2 >= 0 && h3 >= 0) {
        out.push_back({{s, a, h1}, {a, b, h2}, {b, t, h3}});
      }
    }
  }
  return out;
}

void TransportIndex::build_upper_bounds() {
  ub_distance_.assign(static_cast<std::size_t>(n_units_) * n_units_, kUnreachable);
  for (int u = 0; u < n_units_; ++u) {
    for (int v = 0; v < n_units_; ++v) {
      if (u == v) {
        ub_distance_[static_cast<std::size_t>(u) * n_units_ + v] = 0.0;
        continue;
      }
      const auto rs = routes(u, v);
      if (rs.empty()) continue;
      double best = kUnreachable;
      if (rs.front().size() == 1) {
        // Direct link present: its maximum alternative is the bound.
        best = link_max_distance_[rs.front().front().link];
      } else {
        for (const auto& r : rs) {
          double sum = 0.0;
          for (const auto& hop : r) sum += link_max_distance_[hop.link];
          best = std::min(best, sum);
        }
      }
      ub_distance_[static_cast<std::size_t>(u) * n_units_ + v] = best;
    }
  }
}

}  // namespace indsys
