#include "indsys/phase2.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include <json.hpp>

#include "indsys/batching.hpp"

namespace indsys {

namespace {

std::int64_t ceil_positive(double x) {
  return static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

}  // namespace

TransportNetwork build_network(const ProductionAssignment& assignment, const Dataset& dataset,
                               const TransportIndex& index) {
  TransportNetwork net;

  for (const auto& us : assignment.per_part[dataset.root_part]) {
    net.root_units.push_back(us.unit);
  }
  std::sort(net.root_units.begin(), net.root_units.end());

  for (int part = 0; part < dataset.n_parts(); ++part) {
    const int parent = dataset.parent_of[part];
    if (parent < 0) continue;
    for (const auto& producer : assignment.per_part[part]) {
      for (const auto& consumer : assignment.per_part[parent]) {
        if (producer.unit == consumer.unit) continue;  // made in house
        NetworkFlow flow;
        flow.spec.id = static_cast<int>(net.flows.size());
        flow.spec.part = part;
        flow.spec.parent_part = parent;
        flow.spec.producer_unit = producer.unit;
        flow.spec.consumer_unit = consumer.unit;
        flow.spec.producer_share = producer.share;
        flow.spec.consumer_share = consumer.share;

        const auto routes = index.routes(producer.unit, consumer.unit);
        if (routes.empty()) {
          throw ConnectivityError("no transport route from unit '" +
                                  dataset.units[producer.unit].id + "' to unit '" +
                                  dataset.units[consumer.unit].id + "' for part '" +
                                  dataset.parts[part].id + "'");
        }
        for (const auto& route : routes) {
          FlowRoute fr;
          for (const auto& hop : route) {
            NetworkEdge e;
            e.src_node = hop.src;
            e.dst_node = hop.dst;
            e.link = hop.link;
            for (const auto& alt : dataset.links[hop.link].alternatives) {
              EdgeAlternative a;
              a.mean = dataset.mean_index.at(alt.mean);
              a.distance_km = alt.distance_km;
              e.alternatives.push_back(a);
            }
            std::sort(e.alternatives.begin(), e.alternatives.end(),
                      [&](const EdgeAlternative& x, const EdgeAlternative& y) {
                        return dataset.transport_means[x.mean].id <
                               dataset.transport_means[y.mean].id;
                      });
            fr.edges.push_back(std::move(e));
          }
          flow.routes.push_back(std::move(fr));
        }
        net.flows.push_back(std::move(flow));
      }
    }
  }

  // Parts that could share a warehouse-fed physical edge; these are the mixed
  // batching candidates.
  std::map<int, std::set<int>> parts_on_link;
  for (const auto& flow : net.flows) {
    for (const auto& route : flow.routes) {
      for (const auto& e : route.edges) {
        if (!node_is_unit(dataset, e.src_node)) {
          parts_on_link[e.link].insert(flow.spec.part);
        }
      }
    }
  }
  for (auto& flow : net.flows) {
    for (auto& route : flow.routes) {
      for (auto& e : route.edges) {
        if (!node_is_unit(dataset, e.src_node)) {
          const auto& s = parts_on_link[e.link];
          e.shared_parts.assign(s.begin(), s.end());
        } else {
          e.shared_parts = {flow.spec.part};
        }
      }
    }
  }
  return net;
}

DemandSchedule propagate_demand(const TransportNetwork& network,
                                const ProductionAssignment& assignment, const Dataset& dataset,
                                int k_products, double takt_h) {
  if (k_products < 1) throw Error("k_products must be >= 1");
  if (takt_h <= 0) throw Error("takt_h must be positive");

  DemandSchedule s;
  s.k_products = k_products;
  s.takt_h = takt_h;
  s.window_h = k_products * takt_h;

  // Node quantities: every producer covers its share of the system-wide
  // demand for the part, rounded up so demand is never undersupplied.
  for (int part = 0; part < dataset.n_parts(); ++part) {
    const double total = static_cast<double>(k_products) *
                         static_cast<double>(dataset.root_path_quantity[part]);
    for (const auto& us : assignment.per_part[part]) {
      s.node_quantity[{part, us.unit}] = ceil_positive(total * us.share);
    }
  }

  // Flow quantities: the consumer's own need for the child part, split over
  // the child's producers by share, again rounded up per flow.
  s.flow_quantity.assign(network.flows.size(), 0);
  for (const auto& flow : network.flows) {
    const auto it = s.node_quantity.find({flow.spec.parent_part, flow.spec.consumer_unit});
    const std::int64_t parent_qty = it == s.node_quantity.end() ? 0 : it->second;
    const std::int64_t need =
        parent_qty * dataset.quantity_in_parent[flow.spec.part];
    s.flow_quantity[flow.spec.id] =
        ceil_positive(static_cast<double>(need) * flow.spec.producer_share);
  }

  // Completion offsets: hours before final completion by which a unit must
  // finish. Spread root-down; a producer serving several consumers takes the
  // maximum requirement. Transport duration is estimated with the fastest
  // alternative over the flow's routes.
  s.unit_offset_h.assign(dataset.units.size(), 0.0);
  std::vector<int> part_order;  // parents before children
  std::deque<int> queue{dataset.root_part};
  while (!queue.empty()) {
    const int p = queue.front();
    queue.pop_front();
    part_order.push_back(p);
    for (int c : dataset.children_of[p]) queue.push_back(c);
  }
  std::map<int, std::vector<const NetworkFlow*>> flows_by_part;
  for (const auto& flow : network.flows) {
    flows_by_part[flow.spec.part].push_back(&flow);
  }
  for (int p : part_order) {
    auto it = flows_by_part.find(p);
    if (it == flows_by_part.end()) continue;
    for (const NetworkFlow* flow : it->second) {
      double best = TransportIndex::kUnreachable;
      for (const auto& route : flow->routes) {
        double total = 0;
        for (const auto& e : route.edges) {
          double fastest = TransportIndex::kUnreachable;
          for (const auto& a : e.alternatives) {
            fastest = std::min(fastest,
                               a.distance_km / dataset.transport_means[a.mean].speed_km_per_h);
          }
          total += fastest;
        }
        best = std::min(best, total);
      }
      if (best == TransportIndex::kUnreachable) best = 0;
      const int consumer = flow->spec.consumer_unit;
      const double production =
          dataset.plants[dataset.unit_plant[consumer]].production_h;
      const double required = s.unit_offset_h[consumer] + production + best;
      s.unit_offset_h[flow->spec.producer_unit] =
          std::max(s.unit_offset_h[flow->spec.producer_unit], required);
    }
  }
  return s;
}

TransportNetwork prune_infeasible(const TransportNetwork& network, const Dataset& dataset) {
  TransportNetwork out = network;
  for (auto& flow : out.flows) {
    const Box& bbox = dataset.parts[flow.spec.part].bbox;
    std::vector<FlowRoute> kept;
    for (auto& route : flow.routes) {
      bool route_ok = true;
      for (auto& e : route.edges) {
        std::vector<EdgeAlternative> alts;
        for (const auto& a : e.alternatives) {
          if (fits(bbox, dataset.transport_means[a.mean].container)) alts.push_back(a);
        }
        e.alternatives = std::move(alts);
        if (e.alternatives.empty()) {
          route_ok = false;
          break;
        }
      }
      if (route_ok) kept.push_back(std::move(route));
    }
    if (kept.empty()) {
      throw ConnectivityError(
          "all routes for part '" + dataset.parts[flow.spec.part].id + "' from '" +
          dataset.units[flow.spec.producer_unit].id + "' to '" +
          dataset.units[flow.spec.consumer_unit].id +
          "' lost every transport alternative to container-fit pruning");
    }
    flow.routes = std::move(kept);
  }
  return out;
}

TransportNetwork apply_batching(const TransportNetwork& network, const DemandSchedule& schedule,
                                const Dataset& dataset) {
  TransportNetwork out = network;
  for (auto& flow : out.flows) {
    const std::int64_t qty = schedule.flow_quantity[flow.spec.id];
    const Box& bbox = dataset.parts[flow.spec.part].bbox;
    for (auto& route : flow.routes) {
      for (auto& e : route.edges) {
        for (auto& a : e.alternatives) {
          const TransportMean& mean = dataset.transport_means[a.mean];
          const BatchResult b = pack_single(bbox, mean.container, std::max<std::int64_t>(qty, 1));
          a.batch_size = b.per_container_count;
          a.rides = qty > 0 ? b.n_containers : 0;
          a.ride_duration_h = a.distance_km / mean.speed_km_per_h;
        }
      }
    }
  }
  return out;
}

std::string serialize_network(const TransportNetwork& network, const DemandSchedule& schedule,
                              const Dataset& dataset) {
  nlohmann::json doc;
  doc["schema"] = "indsys-network-1";
  doc["k_products"] = schedule.k_products;
  doc["takt_h"] = schedule.takt_h;
  doc["window_h"] = schedule.window_h;

  nlohmann::json roots = nlohmann::json::array();
  for (int u : network.root_units) roots.push_back(dataset.units[u].id);
  doc["final_assembly_units"] = roots;

  nlohmann::json nodes = nlohmann::json::object();
  for (const auto& [key, qty] : schedule.node_quantity) {
    nodes[dataset.units[key.second].id][dataset.parts[key.first].id] = qty;
  }
  doc["node_quantities"] = nodes;

  nlohmann::json offsets = nlohmann::json::object();
  for (std::size_t u = 0; u < dataset.units.size(); ++u) {
    if (schedule.unit_offset_h[u] > 0) {
      offsets[dataset.units[u].id] = schedule.unit_offset_h[u];
    }
  }
  doc["completion_offsets_h"] = offsets;

  nlohmann::json flows = nlohmann::json::array();
  for (const auto& flow : network.flows) {
    nlohmann::json jf;
    jf["id"] = flow.spec.id;
    jf["part"] = dataset.parts[flow.spec.part].id;
    jf["into_part"] = dataset.parts[flow.spec.parent_part].id;
    jf["producer"] = dataset.units[flow.spec.producer_unit].id;
    jf["consumer"] = dataset.units[flow.spec.consumer_unit].id;
    jf["producer_share"] = flow.spec.producer_share;
    jf["quantity"] = schedule.flow_quantity.empty()
                         ? 0
                         : schedule.flow_quantity[flow.spec.id];
    nlohmann::json routes = nlohmann::json::array();
    for (const auto& route : flow.routes) {
      nlohmann::json edges = nlohmann::json::array();
      for (const auto& e : route.edges) {
        nlohmann::json je;
        je["from"] = node_id(dataset, e.src_node);
        je["to"] = node_id(dataset, e.dst_node);
        je["mixed_candidate"] = e.mixed_candidate();
        nlohmann::json alts = nlohmann::json::array();
        for (const auto& a : e.alternatives) {
          alts.push_back({{"mean", dataset.transport_means[a.mean].id},
                          {"distance_km", a.distance_km},
                          {"batch_size", a.batch_size},
                          {"rides", a.rides},
                          {"ride_duration_h", a.ride_duration_h}});
        }
        je["alternatives"] = alts;
        edges.push_back(je);
      }
      routes.push_back({{"edges", edges}});
    }
    jf["routes"] = routes;
    flows.push_back(jf);
  }
  doc["flows"] = flows;
  return doc.dump(2) + "\n";
}

}  // namespace indsys
