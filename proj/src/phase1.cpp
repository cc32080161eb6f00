#include "indsys/phase1.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "indsys/dataset_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace indsys {

namespace {

constexpr double kEps = 1e-9;

// Incremental constraint state during decoding.
struct DecodeState {
  std::vector<double> country_load;
  std::vector<double> supplier_load;
  std::vector<double> unit_load;
  std::vector<bool> unit_used;

  explicit DecodeState(const Dataset& d)
      : country_load(d.countries.size(), 0.0),
        supplier_load(d.suppliers.size(), 0.0),
        unit_load(d.units.size(), 0.0),
        unit_used(d.units.size(), false) {}

  bool admits(const Dataset& d, int unit, double va) const {
    return unit_load[unit] + va <= d.unit_va_max[unit] + kEps &&
           supplier_load[d.unit_supplier[unit]] + va <=
               d.supplier_va_max[d.unit_supplier[unit]] + kEps &&
           country_load[d.unit_country[unit]] + va <= d.country_va_max[d.unit_country[unit]] + kEps;
  }

  void commit(const Dataset& d, int unit, double va) {
    unit_load[unit] += va;
    supplier_load[d.unit_supplier[unit]] += va;
    country_load[d.unit_country[unit]] += va;
    unit_used[unit] = true;
  }
};

// Transport feasibility of placing `part` at `unit` against already placed
// BOM neighbours: the part must reach every consumer of its parent and be
// reachable from every producer of its children.
bool transport_ok(const Dataset& d, const TransportIndex& index,
                  const ProductionAssignment& a, int part, int unit) {
  const int parent = d.parent_of[part];
  if (parent >= 0) {
    for (const auto& us : a.per_part[parent]) {
      if (us.unit != unit && !index.reachable(unit, us.unit)) return false;
    }
  }
  for (int child : d.children_of[part]) {
    for (const auto& us : a.per_part[child]) {
      if (us.unit != unit && !index.reachable(us.unit, unit)) return false;
    }
  }
  return true;
}

std::vector<int> feasible_units(const Dataset& d, const TransportIndex& index,
                                const DecodeState& state, const ProductionAssignment& a,
                                int part, double share) {
  std::vector<int> out;
  const double va = d.parts[part].value_added * share;
  for (int u : d.producers_of[part]) {
    if (!state.admits(d, u, va)) continue;
    if (!transport_ok(d, index, a, part, u)) continue;
    out.push_back(u);
  }
  return out;
}

// Uniform pick, preferring units that do not produce anything yet.
int pick_preferring_unused(const std::vector<int>& units, const DecodeState& state, Rng& rng) {
  std::vector<int> unused;
  for (int u : units) {
    if (!state.unit_used[u]) unused.push_back(u);
  }
  const std::vector<int>& pool = unused.empty() ? units : unused;
  return pool[static_cast<std::size_t>(rng.bounded(pool.size()))];
}

// Places `part` at `count` distinct units with equal shares (parallel final
// assembly). Backtracks over earlier picks when a later slot runs dry.
bool place_equal_split(const Dataset& d, const TransportIndex& index, DecodeState& state,
                       ProductionAssignment& a, int part, int count, Rng& rng) {
  const double share = 1.0 / count;
  const double va = d.parts[part].value_added * share;
  std::vector<int> chosen;
  std::function<bool()> step = [&]() -> bool {
    if (static_cast<int>(chosen.size()) == count) return true;
    std::vector<int> options = feasible_units(d, index, state, a, part, share);
    options.erase(std::remove_if(options.begin(), options.end(),
                                 [&](int u) {
                                   return std::find(chosen.begin(), chosen.end(), u) !=
                                          chosen.end();
                                 }),
                  options.end());
    // Unused first, random order within each block.
    std::vector<int> unused, used;
    for (int u : options) (state.unit_used[u] ? used : unused).push_back(u);
    rng.shuffle(unused);
    rng.shuffle(used);
    unused.insert(unused.end(), used.begin(), used.end());
    for (int u : unused) {
      chosen.push_back(u);
      state.commit(d, u, va);
      if (step()) return true;
      chosen.pop_back();
      state.unit_load[u] -= va;
      state.supplier_load[d.unit_supplier[u]] -= va;
      state.country_load[d.unit_country[u]] -= va;
      // unit_used stays set only if some other part used it; recompute lazily:
      // a unit is "used" when it carries load or was used before this part.
      // We conservatively clear only if its load is now zero and it was first
      // used here.
      if (state.unit_load[u] <= kEps) state.unit_used[u] = false;
    }
    return false;
  };
  if (!step()) return false;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    a.per_part[part].push_back({chosen[i], share});
  }
  std::sort(a.per_part[part].begin(), a.per_part[part].end(),
            [](const UnitShare& x, const UnitShare& y) { return x.unit < y.unit; });
  return true;
}

// Double sourcing: two distinct units with split a : (1-a); different
// countries whenever the part's producers span more than one country.
bool place_double(const Dataset& d, const TransportIndex& index, DecodeState& state,
                  ProductionAssignment& a, int part, bool continuous_shares, Rng& rng) {
  double split;
  if (continuous_shares) {
    split = rng.uniform_real(0.2, 0.8);
  } else {
    // Grid 0.20, 0.25, ..., 0.80.
    split = 0.2 + 0.05 * static_cast<double>(rng.bounded(13));
  }

  bool multi_country = false;
  {
    const auto& prods = d.producers_of[part];
    if (!prods.empty()) {
      const int c0 = d.unit_country[prods.front()];
      for (int u : prods) {
        if (d.unit_country[u] != c0) {
          multi_country = true;
          break;
        }
      }
    }
  }

  std::vector<int> first = feasible_units(d, index, state, a, part, split);
  std::vector<int> unused, used;
  for (int u : first) (state.unit_used[u] ? used : unused).push_back(u);
  rng.shuffle(unused);
  rng.shuffle(used);
  unused.insert(unused.end(), used.begin(), used.end());

  const double va1 = d.parts[part].value_added * split;
  for (int u1 : unused) {
    state.commit(d, u1, va1);
    std::vector<int> second = feasible_units(d, index, state, a, part, 1.0 - split);
    second.erase(std::remove_if(second.begin(), second.end(),
                                [&](int u2) {
                                  if (u2 == u1) return true;
                                  return multi_country &&
                                         d.unit_country[u2] == d.unit_country[u1];
                                }),
                 second.end());
    if (!second.empty()) {
      std::vector<int> unused2, used2;
      for (int u : second) (state.unit_used[u] ? used2 : unused2).push_back(u);
      const std::vector<int>& pool = unused2.empty() ? used2 : unused2;
      const int u2 = pool[static_cast<std::size_t>(rng.bounded(pool.size()))];
      state.commit(d, u2, d.parts[part].value_added * (1.0 - split));
      a.per_part[part].push_back({u1, split});
      a.per_part[part].push_back({u2, 1.0 - split});
      std::sort(a.per_part[part].begin(), a.per_part[part].end(),
                [](const UnitShare& x, const UnitShare& y) { return x.unit < y.unit; });
      return true;
    }
    // Roll u1 back and try the next first unit.
    state.unit_load[u1] -= va1;
    state.supplier_load[d.unit_supplier[u1]] -= va1;
    state.country_load[d.unit_country[u1]] -= va1;
    if (state.unit_load[u1] <= kEps) state.unit_used[u1] = false;
  }
  return false;
}

struct RankKey {
  double sr;
  double dist_key;
  int origin;  // 0 = interpop, 1 = pop
  std::size_t index;
};

bool rank_less(const RankKey& a, const RankKey& b) {
  if (a.sr != b.sr) return a.sr > b.sr;
  if (a.dist_key != b.dist_key) return a.dist_key < b.dist_key;
  if (a.origin != b.origin) return a.origin < b.origin;
  return a.index < b.index;
}

double dist_key_of(const Candidate& c) { return c.complete() ? c.dist : 0.0; }

}  // namespace

void EaConfig::validate() const {
  if (population_size < 1 || generations < 0 || tournament_size < 1 ||
      elite_return_count < 1) {
    throw Error("EA sizes must be positive");
  }
  if (tournament_size > population_size) {
    throw Error("tournament size cannot exceed the population size");
  }
  if (crossover_rate < 0 || crossover_rate > 1 || mutation_rate < 0 || mutation_rate > 1) {
    throw Error("EA rates must lie in [0, 1]");
  }
  if (fal_count < 1 || fal_count > 5) {
    throw Error("fal_count must lie in [1, 5]");
  }
}

Candidate decode(const std::vector<int>& priority, const Dataset& dataset,
                 const TransportIndex& index, Sourcing mode, int fal_count,
                 bool continuous_shares, Rng& rng) {
  Candidate c;
  c.priority = priority;
  c.assignment.mode = mode;
  c.assignment.fal_count = fal_count;
  c.assignment.per_part.assign(dataset.n_parts(), {});

  DecodeState state(dataset);
  int placed = 0;
  for (int part : priority) {
    bool ok;
    if (mode == Sourcing::kDouble) {
      ok = place_double(dataset, index, state, c.assignment, part, continuous_shares, rng);
    } else if (part == dataset.root_part && fal_count > 1) {
      ok = place_equal_split(dataset, index, state, c.assignment, part, fal_count, rng);
    } else {
      const std::vector<int> options =
          feasible_units(dataset, index, state, c.assignment, part, 1.0);
      if (options.empty()) {
        ok = false;
      } else {
        const int u = pick_preferring_unused(options, state, rng);
        state.commit(dataset, u, dataset.parts[part].value_added);
        c.assignment.per_part[part].push_back({u, 1.0});
        ok = true;
      }
    }
    if (!ok) {
      c.first_blocked_part = part;
      break;
    }
    ++placed;
  }
  c.sr = static_cast<double>(placed) / static_cast<double>(dataset.n_parts());
  if (c.complete()) {
    c.dist = dist_upper_bound(c.assignment, dataset, index);
  }
  return c;
}

double dist_upper_bound(const ProductionAssignment& assignment, const Dataset& dataset,
                        const TransportIndex& index) {
  double total = 0.0;
  for (int part = 0; part < dataset.n_parts(); ++part) {
    const int parent = dataset.parent_of[part];
    if (parent < 0) continue;
    for (const auto& producer : assignment.per_part[part]) {
      for (const auto& consumer : assignment.per_part[parent]) {
        if (producer.unit == consumer.unit) continue;
        total += index.upper_bound_distance(producer.unit, consumer.unit);
      }
    }
  }
  return total;
}

std::vector<int> crossover_1pt(const std::vector<int>& parent1, const std::vector<int>& parent2,
                               int k) {
  std::vector<int> child(parent1.begin(), parent1.begin() + k);
  std::vector<bool> in_head(parent1.size() + parent2.size(), false);
  for (int p : child) in_head[p] = true;
  for (int p : parent2) {
    if (!in_head[p]) child.push_back(p);
  }
  return child;
}

std::vector<int> crossover_1pt(const std::vector<int>& parent1, const std::vector<int>& parent2,
                               Rng& rng) {
  const int m = static_cast<int>(parent1.size());
  if (m < 2) return parent1;
  return crossover_1pt(parent1, parent2, rng.uniform_int(1, m - 1));
}

std::vector<int> mutate_reposition(const std::vector<int>& parent, int from, int to) {
  std::vector<int> child = parent;
  const int value = child[from];
  child.erase(child.begin() + from);
  child.insert(child.begin() + to, value);
  return child;
}

std::vector<int> mutate_reposition(const std::vector<int>& parent, Rng& rng) {
  const int m = static_cast<int>(parent.size());
  if (m < 2) return parent;
  const int from = static_cast<int>(rng.bounded(m));
  int to = static_cast<int>(rng.bounded(m - 1));
  if (to >= from) ++to;
  return mutate_reposition(parent, from, to);
}

bool is_better(const Candidate& a, const Candidate& b) {
  if (a.sr > b.sr) return true;
  if (a.sr < b.sr) return false;
  // Distances are only defined for complete candidates; otherwise they
  // compare as equal and the <= of the rule returns true.
  if (!a.complete() || !b.complete()) return true;
  return a.dist <= b.dist;
}

std::vector<Candidate> merge_populations(const std::vector<Candidate>& pop,
                                         const std::vector<Candidate>& interpop) {
  const std::size_t target = pop.size();
  std::vector<const Candidate*> all;
  std::vector<RankKey> keys;
  all.reserve(pop.size() + interpop.size());
  for (std::size_t i = 0; i < interpop.size(); ++i) {
    all.push_back(&interpop[i]);
    keys.push_back({interpop[i].sr, dist_key_of(interpop[i]), 0, i});
  }
  for (std::size_t i = 0; i < pop.size(); ++i) {
    all.push_back(&pop[i]);
    keys.push_back({pop[i].sr, dist_key_of(pop[i]), 1, i});
  }
  std::vector<std::size_t> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rank_less(keys[a], keys[b]); });

  std::vector<Candidate> out;
  out.reserve(target);
  std::set<std::vector<int>> seen;
  std::vector<std::size_t> skipped;
  for (std::size_t oi : order) {
    if (out.size() == target) break;
    if (seen.insert(all[oi]->priority).second) {
      out.push_back(*all[oi]);
    } else {
      skipped.push_back(oi);
    }
  }
  // Not enough unique lists (tiny search spaces): readmit duplicates by rank.
  for (std::size_t oi : skipped) {
    if (out.size() == target) break;
    out.push_back(*all[oi]);
  }
  return out;
}

void evaluate_candidates(std::vector<Candidate>& candidates, const Dataset& dataset,
                         const TransportIndex& index, const EaConfig& config,
                         std::uint64_t generation) {
  const int n = static_cast<int>(candidates.size());
  if (config.threads == 1) {
    for (int i = 0; i < n; ++i) {
      Rng rng(Rng::derive(config.seed, generation, static_cast<std::uint64_t>(i)));
      candidates[i] = decode(candidates[i].priority, dataset, index, config.mode,
                             config.fal_count, config.continuous_shares, rng);
    }
    return;
  }
#ifdef _OPENMP
  if (config.threads > 1) omp_set_num_threads(config.threads);
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n; ++i) {
    Rng rng(Rng::derive(config.seed, generation, static_cast<std::uint64_t>(i)));
    candidates[i] = decode(candidates[i].priority, dataset, index, config.mode, config.fal_count,
                           config.continuous_shares, rng);
  }
}

namespace {

bool strictly_better(const Candidate& a, const Candidate& b) {
  if (a.sr != b.sr) return a.sr > b.sr;
  if (a.complete() && b.complete()) return a.dist < b.dist;
  return false;
}

GenerationStats stats_of(const std::vector<Candidate>& pop, int generation) {
  GenerationStats s;
  s.generation = generation;
  const Candidate* best = &pop.front();
  double sum_sr = 0;
  for (const auto& c : pop) {
    sum_sr += c.sr;
    if (strictly_better(c, *best)) best = &c;
  }
  s.best_sr = best->sr;
  s.mean_sr = sum_sr / static_cast<double>(pop.size());
  s.best_dist_defined = best->complete();
  s.best_dist = s.best_dist_defined ? best->dist : 0.0;
  return s;
}

int tournament(const std::vector<Candidate>& pop, int size, Rng& rng) {
  int best = static_cast<int>(rng.bounded(pop.size()));
  for (int t = 1; t < size; ++t) {
    const int challenger = static_cast<int>(rng.bounded(pop.size()));
    if (is_better(pop[challenger], pop[best])) best = challenger;
  }
  return best;
}

}  // namespace

Phase1Result run_phase1(const Dataset& dataset, const TransportIndex& index,
                        const EaConfig& config) {
  config.validate();
  const int m = dataset.n_parts();
  Rng master(config.seed);

  std::vector<Candidate> pop(config.population_size);
  std::vector<int> identity(m);
  for (int i = 0; i < m; ++i) identity[i] = i;
  for (auto& c : pop) {
    c.priority = identity;
    master.shuffle(c.priority);
  }
  evaluate_candidates(pop, dataset, index, config, 0);

  Phase1Result result;
  result.trace.push_back(stats_of(pop, 0));

  for (int gen = 1; gen <= config.generations; ++gen) {
    std::vector<Candidate> interpop;
    interpop.reserve(pop.size());
    while (interpop.size() < pop.size()) {
      const Candidate& p1 = pop[tournament(pop, config.tournament_size, master)];
      const Candidate& p2 = pop[tournament(pop, config.tournament_size, master)];
      Candidate child;
      if (master.chance(config.crossover_rate)) {
        child.priority = crossover_1pt(p1.priority, p2.priority, master);
        if (master.chance(config.mutation_rate)) {
          child.priority = mutate_reposition(child.priority, master);
        }
      } else {
        child.priority = mutate_reposition(p1.priority, master);
      }
      interpop.push_back(std::move(child));
    }
    evaluate_candidates(interpop, dataset, index, config,
                        static_cast<std::uint64_t>(gen));
    pop = merge_populations(pop, interpop);
    result.trace.push_back(stats_of(pop, gen));
  }

  // Rank the final population and return the n best.
  std::vector<std::size_t> order(pop.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const RankKey ka{pop[a].sr, dist_key_of(pop[a]), 0, a};
    const RankKey kb{pop[b].sr, dist_key_of(pop[b]), 0, b};
    return rank_less(ka, kb);
  });
  const int n_out = std::min<int>(config.elite_return_count, static_cast<int>(pop.size()));
  for (int i = 0; i < n_out; ++i) result.best.push_back(pop[order[i]]);

  if (!result.best.front().complete()) {
    std::map<int, int> blocked;
    for (const auto& c : pop) {
      if (c.first_blocked_part >= 0) blocked[c.first_blocked_part]++;
    }
    int worst_part = -1, worst_count = 0;
    for (const auto& [part, count] : blocked) {
      if (count > worst_count) {
        worst_part = part;
        worst_count = count;
      }
    }
    std::ostringstream os;
    os << "no complete assignment found (best sr " << result.best.front().sr << ")";
    if (worst_part >= 0) {
      os << "; most frequent blocking part: '" << dataset.parts[worst_part].id << "' ("
         << worst_count << " of " << pop.size() << " candidates)";
    }
    result.diagnostic = os.str();
  }
  return result;
}

std::string trace_to_csv(const std::vector<GenerationStats>& trace) {
  std::ostringstream os;
  os << "gen,best_sr,mean_sr,best_dist\n";
  for (const auto& s : trace) {
    os << s.generation << "," << s.best_sr << "," << s.mean_sr << ",";
    if (s.best_dist_defined) os << s.best_dist;
    os << "\n";
  }
  return os.str();
}

std::string serialize_assignment(const ProductionAssignment& assignment, const Dataset& dataset,
                                 double sr, double dist) {
  nlohmann::json doc;
  doc["schema"] = "indsys-solution-1";
  doc["sourcing"] = to_string(assignment.mode);
  doc["fal_count"] = assignment.fal_count;
  doc["sr"] = sr;
  if (sr == 1.0) doc["dist_km"] = dist;
  nlohmann::json parts = nlohmann::json::object();
  for (int pi = 0; pi < dataset.n_parts(); ++pi) {
    if (assignment.per_part[pi].empty()) continue;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& us : assignment.per_part[pi]) {
      entries.push_back({{"unit", dataset.units[us.unit].id}, {"share", us.share}});
    }
    parts[dataset.parts[pi].id] = entries;
  }
  doc["parts"] = parts;
  return doc.dump(2) + "\n";
}

ProductionAssignment parse_assignment(const std::string& text, const Dataset& dataset) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("solution file is not valid JSON: ") + e.what());
  }
  ProductionAssignment a;
  a.mode = sourcing_from_string(doc.value("sourcing", "single"));
  a.fal_count = doc.value("fal_count", 1);
  a.per_part.assign(dataset.n_parts(), {});
  for (const auto& [part_id, entries] : doc.at("parts").items()) {
    auto it = dataset.part_index.find(part_id);
    if (it == dataset.part_index.end()) {
      throw ReferenceError("solution references unknown part '" + part_id + "'");
    }
    for (const auto& e : entries) {
      const std::string unit_id = e.at("unit").get<std::string>();
      auto uit = dataset.unit_index.find(unit_id);
      if (uit == dataset.unit_index.end()) {
        throw ReferenceError("solution references unknown unit '" + unit_id + "'");
      }
      a.per_part[it->second].push_back({uit->second, e.at("share").get<double>()});
    }
  }
  return a;
}

}  // namespace indsys
