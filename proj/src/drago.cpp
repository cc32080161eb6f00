#include "indsys/drago.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "indsys/rng.hpp"

namespace indsys {

const char* to_string(CriterionKind k) {
  switch (k) {
    case CriterionKind::kCo2: return "co2";
    case CriterionKind::kDuration: return "duration";
    case CriterionKind::kDistance: return "distance";
    case CriterionKind::kCost: return "cost";
    case CriterionKind::kTradeoff: return "tradeoff";
  }
  return "?";
}

CriterionKind criterion_from_string(const std::string& s) {
  if (s == "co2") return CriterionKind::kCo2;
  if (s == "duration") return CriterionKind::kDuration;
  if (s == "distance") return CriterionKind::kDistance;
  if (s == "cost") return CriterionKind::kCost;
  if (s == "tradeoff") return CriterionKind::kTradeoff;
  throw Error("unknown criterion '" + s + "'");
}

void Criterion::validate() const {
  if (kind != CriterionKind::kTradeoff) return;
  double sum = 0;
  for (const auto& [k, w] : weights) {
    if (k == CriterionKind::kTradeoff) throw Error("tradeoff cannot weight itself");
    if (w < 0) throw Error("tradeoff weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("tradeoff weights must sum to 1");
}

double LinkScores::of(CriterionKind k) const {
  switch (k) {
    case CriterionKind::kCo2: return co2_g;
    case CriterionKind::kDuration: return duration_h;
    case CriterionKind::kDistance: return distance_km;
    case CriterionKind::kCost: return cost_eur;
    case CriterionKind::kTradeoff: break;
  }
  throw Error("no direct score for the tradeoff criterion");
}

LinkScores link_scores(const EdgeAlternative& alt, const Dataset& dataset) {
  const TransportMean& mean = dataset.transport_means[alt.mean];
  const double n = static_cast<double>(alt.rides);
  LinkScores s;
  s.co2_g = n * alt.distance_km * mean.co2_g_per_km;
  s.duration_h = n * alt.distance_km / mean.speed_km_per_h;
  s.distance_km = n * alt.distance_km;
  s.cost_eur = n * alt.distance_km * mean.cost_eur_per_km;
  return s;
}

double score_link(const EdgeAlternative& alt, const Dataset& dataset, const Criterion& criterion,
                  const std::array<double, 4>& normalizers) {
  const LinkScores s = link_scores(alt, dataset);
  if (criterion.kind != CriterionKind::kTradeoff) return s.of(criterion.kind);
  double total = 0;
  static constexpr CriterionKind kinds[4] = {CriterionKind::kCo2, CriterionKind::kDuration,
                                             CriterionKind::kDistance, CriterionKind::kCost};
  for (int i = 0; i < 4; ++i) {
    const auto it = criterion.weights.find(kinds[i]);
    if (it == criterion.weights.end() || it->second == 0) continue;
    const double norm = normalizers[i] > 0 ? normalizers[i] : 1.0;
    total += it->second * s.of(kinds[i]) / norm;
  }
  return total;
}

namespace {

// Per-flow incoming-link index: for every node on the flow's candidate routes,
// the edges arriving there, deduplicated by meta-link.
struct FlowGraph {
  std::map<int, std::vector<const NetworkEdge*>> incoming;
};

FlowGraph flow_graph(const NetworkFlow& flow) {
  FlowGraph g;
  std::map<int, std::set<int>> seen;  // node -> links already registered
  for (const auto& route : flow.routes) {
    for (const auto& e : route.edges) {
      if (seen[e.dst_node].insert(e.link).second) {
        g.incoming[e.dst_node].push_back(&e);
      }
    }
  }
  for (auto& [node, edges] : g.incoming) {
    std::sort(edges.begin(), edges.end(), [](const NetworkEdge* a, const NetworkEdge* b) {
      return a->src_node < b->src_node;
    });
  }
  return g;
}

struct Traversal {
  const TransportNetwork& network;
  const Dataset& dataset;
  const Criterion& criterion;
  const std::array<double, 4>& normalizers;
  bool route_exact;

  std::vector<FlowGraph> graphs;
  std::map<int, std::vector<const NetworkFlow*>> flows_into_unit;
  std::set<std::pair<int, int>> resolved;  // (vertex, flow)
  std::set<int> visited_units;
  OptimalPath out;

  void run();
  void optimize_unit_inputs(int unit);
  void optimize_input(int vertex, const NetworkFlow& flow);
  void optimize_route_exact(const NetworkFlow& flow);
  ChosenLink make_chosen(const NetworkFlow& flow, const NetworkEdge& e,
                         const EdgeAlternative& alt) const;
};

// Candidate order realizes the tie rule: scan sorted by (mean id, source id),
// keep on strict improvement only.
std::vector<std::pair<const NetworkEdge*, const EdgeAlternative*>> ordered_candidates(
    const Dataset& dataset, const std::vector<const NetworkEdge*>& edges) {
  std::vector<std::pair<const NetworkEdge*, const EdgeAlternative*>> cands;
  for (const NetworkEdge* e : edges) {
    for (const auto& alt : e->alternatives) cands.push_back({e, &alt});
  }
  std::sort(cands.begin(), cands.end(), [&](const auto& a, const auto& b) {
    const Id& ma = dataset.transport_means[a.second->mean].id;
    const Id& mb = dataset.transport_means[b.second->mean].id;
    if (ma != mb) return ma < mb;
    return a.first->src_node < b.first->src_node;
  });
  return cands;
}

ChosenLink Traversal::make_chosen(const NetworkFlow& flow, const NetworkEdge& e,
                                  const EdgeAlternative& alt) const {
  ChosenLink c;
  c.flow = flow.spec.id;
  c.src_node = e.src_node;
  c.dst_node = e.dst_node;
  c.link = e.link;
  c.mean = alt.mean;
  c.distance_km = alt.distance_km;
  c.batch_size = alt.batch_size;
  c.rides = alt.rides;
  c.score = score_link(alt, dataset, criterion, normalizers);
  c.scores = link_scores(alt, dataset);
  return c;
}

void Traversal::optimize_input(int vertex, const NetworkFlow& flow) {
  if (!resolved.insert({vertex, flow.spec.id}).second) return;
  const FlowGraph& g = graphs[flow.spec.id];
  const auto it = g.incoming.find(vertex);
  if (it == g.incoming.end() || it->second.empty()) {
    throw ConnectivityError("no incoming link for part '" +
                            dataset.parts[flow.spec.part].id + "' at node '" +
                            node_id(dataset, vertex) + "'");
  }

  const auto cands = ordered_candidates(dataset, it->second);
  const NetworkEdge* best_edge = nullptr;
  const EdgeAlternative* best_alt = nullptr;
  double best_score = 0;
  bool mixed = false;
  for (const auto& [edge, alt] : cands) {
    const double score = score_link(*alt, dataset, criterion, normalizers);
    if (best_edge == nullptr || score < best_score) {
      best_edge = edge;
      best_alt = alt;
      best_score = score;
      if (edge->mixed_candidate()) {
        mixed = true;
        break;  // the pseudo-code stops scanning once the best is mixed
      }
    }
  }

  ChosenLink chosen = make_chosen(flow, *best_edge, *best_alt);
  out.selection_total += chosen.score;
  if (mixed) {
    out.mixed_batching_inputs.push_back({vertex, flow.spec.id, chosen});
  } else {
    out.links.push_back(chosen);
  }

  const int src = best_edge->src_node;
  if (node_is_unit(dataset, src)) {
    optimize_unit_inputs(src);
  } else {
    optimize_input(src, flow);
  }
}

void Traversal::optimize_route_exact(const NetworkFlow& flow) {
  if (!resolved.insert({node_of_unit(flow.spec.consumer_unit), flow.spec.id}).second) return;
  // Whole-route scoring: per edge the best alternative, routes compared by
  // their summed score.
  const FlowRoute* best_route = nullptr;
  double best_total = 0;
  std::vector<const EdgeAlternative*> best_alts;
  for (const auto& route : flow.routes) {
    double total = 0;
    std::vector<const EdgeAlternative*> alts;
    for (const auto& e : route.edges) {
      const auto cands = ordered_candidates(dataset, {&e});
      const EdgeAlternative* ba = nullptr;
      double bs = 0;
      for (const auto& [edge, alt] : cands) {
        (void)edge;
        const double score = score_link(*alt, dataset, criterion, normalizers);
        if (ba == nullptr || score < bs) {
          ba = alt;
          bs = score;
        }
      }
      alts.push_back(ba);
      total += bs;
    }
    if (best_route == nullptr || total < best_total) {
      best_route = &route;
      best_total = total;
      best_alts = std::move(alts);
    }
  }
  if (best_route == nullptr) {
    throw ConnectivityError("flow " + std::to_string(flow.spec.id) + " has no routes");
  }
  for (std::size_t i = 0; i < best_route->edges.size(); ++i) {
    const NetworkEdge& e = best_route->edges[i];
    ChosenLink chosen = make_chosen(flow, e, *best_alts[i]);
    out.selection_total += chosen.score;
    if (e.mixed_candidate()) {
      out.mixed_batching_inputs.push_back({e.dst_node, flow.spec.id, chosen});
    } else {
      out.links.push_back(chosen);
    }
  }
  optimize_unit_inputs(flow.spec.producer_unit);
}

void Traversal::optimize_unit_inputs(int unit) {
  if (!visited_units.insert(unit).second) return;
  const auto it = flows_into_unit.find(unit);
  if (it == flows_into_unit.end()) return;  // leaf producer
  for (const NetworkFlow* flow : it->second) {
    if (route_exact) {
      optimize_route_exact(*flow);
    } else {
      optimize_input(node_of_unit(flow->spec.consumer_unit), *flow);
    }
  }
}

void Traversal::run() {
  graphs.reserve(network.flows.size());
  for (const auto& flow : network.flows) graphs.push_back(flow_graph(flow));
  for (const auto& flow : network.flows) {
    flows_into_unit[flow.spec.consumer_unit].push_back(&flow);
  }
  for (auto& [unit, flows] : flows_into_unit) {
    std::sort(flows.begin(), flows.end(), [](const NetworkFlow* a, const NetworkFlow* b) {
      return a->spec.id < b->spec.id;
    });
  }
  for (int root : network.root_units) optimize_unit_inputs(root);
}

std::array<double, 4> tradeoff_normalizers(const TransportNetwork& network,
                                           const DemandSchedule& schedule,
                                           const Dataset& dataset, bool route_exact) {
  std::array<double, 4> norms{1, 1, 1, 1};
  static constexpr CriterionKind kinds[4] = {CriterionKind::kCo2, CriterionKind::kDuration,
                                             CriterionKind::kDistance, CriterionKind::kCost};
  for (int i = 0; i < 4; ++i) {
    Criterion single{kinds[i], {}};
    const OptimalPath p = drago_optimize(network, schedule, dataset, single, route_exact);
    double total = 0;
    for (const auto& l : p.links) total += l.scores.of(kinds[i]);
    for (const auto& m : p.mixed_batching_inputs) total += m.chosen.scores.of(kinds[i]);
    norms[i] = total > 0 ? total : 1.0;
  }
  return norms;
}

}  // namespace

OptimalPath drago_optimize(const TransportNetwork& network, const DemandSchedule& schedule,
                           const Dataset& dataset, const Criterion& criterion,
                           bool route_exact) {
  criterion.validate();
  (void)schedule;  // quantities are already baked into the edge alternatives
  std::array<double, 4> normalizers{1, 1, 1, 1};
  if (criterion.kind == CriterionKind::kTradeoff) {
    normalizers = tradeoff_normalizers(network, schedule, dataset, route_exact);
  }
  Traversal t{network, dataset, criterion, normalizers, route_exact, {}, {}, {}, {}, {}};
  t.run();
  return std::move(t.out);
}

void resolve_mixed_batches(OptimalPath& path, const TransportNetwork& network,
                           const DemandSchedule& schedule, const Dataset& dataset,
                           PackerKind packer, const GraspParams& grasp) {
  path.mixed.clear();
  if (path.mixed_batching_inputs.empty()) return;

  // Joint groups share the same physical link and transport mean.
  std::map<std::pair<int, int>, std::vector<const DeferredInput*>> groups;
  for (const auto& d : path.mixed_batching_inputs) {
    groups[{d.chosen.link, d.chosen.mean}].push_back(&d);
  }

  for (const auto& [key, members] : groups) {
    const auto [link, mean_idx] = key;
    const TransportMean& mean = dataset.transport_means[mean_idx];

    std::vector<MixedItem> items;
    std::int64_t singles_rides = 0;
    for (const DeferredInput* d : members) {
      const auto& spec = network.flows[d->flow].spec;
      const std::int64_t qty = schedule.flow_quantity[spec.id];
      if (qty > 0) items.push_back({dataset.parts[spec.part].bbox, qty});
      singles_rides += d->chosen.rides;
    }

    std::int64_t joint_rides = 0;
    bool fallback = false;
    if (!items.empty()) {
      try {
        // Restart budget shrinks with instance size to keep joint sizing
        // affordable on large demands.
        std::int64_t n_items = 0;
        for (const auto& i : items) n_items += i.quantity;
        GraspParams params = grasp;
        params.iterations = std::max<int>(
            4, static_cast<int>(std::min<std::int64_t>(params.iterations,
                                                       params.iterations * 12 / std::max<std::int64_t>(n_items, 1))));
        std::vector<BatchResult> packed;
        if (packer == PackerKind::kLaff) {
          packed = pack_laff(items, mean.container);
        } else {
          Rng rng(Rng::derive(0x6d69786564ULL, static_cast<std::uint64_t>(link),
                              static_cast<std::uint64_t>(mean_idx)));
          packed = pack_mixed(items, mean.container, rng, params);
        }
        joint_rides = static_cast<std::int64_t>(packed.size());
      } catch (const Error& e) {
        fallback = true;
        path.warnings.push_back(std::string("mixed batching fell back to singles: ") + e.what());
      }
    }
    if (!fallback && joint_rides > singles_rides) {
      // Joint packing should never do worse than separate single batches.
      joint_rides = singles_rides;
    }

    if (fallback) {
      for (const DeferredInput* d : members) path.links.push_back(d->chosen);
      continue;
    }

    MixedResolution r;
    r.link = link;
    r.mean = mean_idx;
    r.src_node = members.front()->chosen.src_node;
    r.dst_node = members.front()->chosen.dst_node;
    r.distance_km = members.front()->chosen.distance_km;
    for (const DeferredInput* d : members) r.flows.push_back(d->flow);
    std::sort(r.flows.begin(), r.flows.end());
    r.rides = joint_rides;
    const double n = static_cast<double>(joint_rides);
    r.scores.co2_g = n * r.distance_km * mean.co2_g_per_km;
    r.scores.duration_h = n * r.distance_km / mean.speed_km_per_h;
    r.scores.distance_km = n * r.distance_km;
    r.scores.cost_eur = n * r.distance_km * mean.cost_eur_per_km;
    path.mixed.push_back(std::move(r));
  }
}

std::string serialize_plan(const OptimalPath& path, const TransportNetwork& network,
                           const Dataset& dataset, const Criterion& criterion) {
  nlohmann::json doc;
  doc["schema"] = "indsys-plan-1";
  doc["criterion"] = to_string(criterion.kind);
  if (criterion.kind == CriterionKind::kTradeoff) {
    nlohmann::json w = nlohmann::json::object();
    for (const auto& [k, v] : criterion.weights) w[to_string(k)] = v;
    doc["weights"] = w;
  }
  doc["selection_total"] = path.selection_total;

  const auto link_json = [&](const ChosenLink& l) {
    const auto& spec = network.flows[l.flow].spec;
    return nlohmann::json{{"flow", l.flow},
                          {"part", dataset.parts[spec.part].id},
                          {"from", node_id(dataset, l.src_node)},
                          {"to", node_id(dataset, l.dst_node)},
                          {"mean", dataset.transport_means[l.mean].id},
                          {"distance_km", l.distance_km},
                          {"batch_size", l.batch_size},
                          {"rides", l.rides},
                          {"co2_g", l.scores.co2_g},
                          {"duration_h", l.scores.duration_h},
                          {"total_distance_km", l.scores.distance_km},
                          {"cost_eur", l.scores.cost_eur}};
  };

  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : path.links) links.push_back(link_json(l));
  doc["links"] = links;

  nlohmann::json mixed = nlohmann::json::array();
  for (const auto& m : path.mixed) {
    nlohmann::json parts = nlohmann::json::array();
    for (int f : m.flows) parts.push_back(dataset.parts[network.flows[f].spec.part].id);
    mixed.push_back({{"from", node_id(dataset, m.src_node)},
                     {"to", node_id(dataset, m.dst_node)},
                     {"mean", dataset.transport_means[m.mean].id},
                     {"flows", m.flows},
                     {"parts", parts},
                     {"distance_km", m.distance_km},
                     {"rides", m.rides},
                     {"co2_g", m.scores.co2_g},
                     {"duration_h", m.scores.duration_h},
                     {"total_distance_km", m.scores.distance_km},
                     {"cost_eur", m.scores.cost_eur}});
  }
  doc["mixed_batches"] = mixed;
  if (!path.warnings.empty()) doc["warnings"] = path.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace indsys
