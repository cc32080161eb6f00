#include "indsys/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace indsys {

namespace {

constexpr double kShareEps = 1e-9;

template <typename T>
std::map<Id, int> index_by_id(const std::vector<T>& items, const char* kind) {
  std::map<Id, int> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id.empty()) {
      throw Error(std::string(kind) + " with empty id");
    }
    auto [it, inserted] = out.emplace(items[i].id, static_cast<int>(i));
    if (!inserted) {
      throw Error(std::string("duplicate ") + kind + " id '" + items[i].id + "'");
    }
  }
  return out;
}

int resolve(const std::map<Id, int>& index, const Id& id, const char* kind,
            const Id& owner) {
  auto it = index.find(id);
  if (it == index.end()) {
    throw ReferenceError("unknown " + std::string(kind) + " '" + id + "' referenced by '" +
                         owner + "'");
  }
  return it->second;
}

void require_positive_box(const Box& b, const std::string& what) {
  if (b.l <= 0 || b.w <= 0 || b.h <= 0) {
    throw Error(what + " must have positive dimensions");
  }
}

}  // namespace

const char* to_string(Sourcing s) {
  return s == Sourcing::kSingle ? "single" : "double";
}

Sourcing sourcing_from_string(const std::string& s) {
  if (s == "single") return Sourcing::kSingle;
  if (s == "double") return Sourcing::kDouble;
  throw Error("unknown sourcing mode '" + s + "'");
}

int ProductionAssignment::placed_count() const {
  int n = 0;
  for (const auto& e : per_part) n += e.empty() ? 0 : 1;
  return n;
}

void Dataset::finalize() {
  part_index = index_by_id(parts, "part");
  country_index = index_by_id(countries, "country");
  supplier_index = index_by_id(suppliers, "supplier");
  site_index = index_by_id(sites, "site");
  plant_index = index_by_id(plants, "plant");
  unit_index = index_by_id(units, "unit");
  warehouse_index = index_by_id(warehouses, "warehouse");
  mean_index = index_by_id(transport_means, "transport mean");

  for (const auto& p : parts) {
    require_positive_box(p.bbox, "part '" + p.id + "' bbox");
    if (!(p.value_added > 0.0 && p.value_added < 1.0)) {
      throw Error("part '" + p.id + "' value_added must lie in (0,1)");
    }
  }
  for (const auto& c : countries) {
    if (c.va_min < 0 || c.va_max > 1 || (c.va_max >= 0 && c.va_min > c.va_max)) {
      throw Error("country '" + c.id + "' value-added bounds out of order");
    }
  }
  for (const auto& s : suppliers) {
    if (s.va_min < 0 || s.va_max > 1 || (s.va_max >= 0 && s.va_min > s.va_max)) {
      throw Error("supplier '" + s.id + "' value-added bounds out of order");
    }
  }
  for (const auto& m : transport_means) {
    if (m.co2_g_per_km <= 0 || m.speed_km_per_h <= 0 || m.cost_eur_per_km <= 0) {
      throw Error("transport mean '" + m.id + "' rates must be positive");
    }
    require_positive_box(m.container, "transport mean '" + m.id + "' container");
  }

  for (const auto& s : sites) {
    resolve(country_index, s.country, "country", s.id);
  }
  for (const auto& f : plants) {
    resolve(site_index, f.site, "site", f.id);
    for (const auto& pid : f.producible) {
      resolve(part_index, pid, "part", f.id);
    }
  }

  const int np = n_parts();
  unit_country.assign(units.size(), -1);
  unit_supplier.assign(units.size(), -1);
  unit_plant.assign(units.size(), -1);
  unit_va_max.assign(units.size(), bounds.va_u_max_default);
  producers_of.assign(np, {});

  std::map<std::pair<int, int>, Id> supplier_plant_seen;
  for (std::size_t ui = 0; ui < units.size(); ++ui) {
    const auto& u = units[ui];
    const int si = resolve(supplier_index, u.supplier, "supplier", u.id);
    const int fi = resolve(plant_index, u.plant, "plant", u.id);
    auto [it, inserted] = supplier_plant_seen.emplace(std::make_pair(si, fi), u.id);
    if (!inserted) {
      throw Error("units '" + it->second + "' and '" + u.id +
                  "' share the same (supplier, plant) pair");
    }
    unit_supplier[ui] = si;
    unit_plant[ui] = fi;
    unit_country[ui] = country_index.at(sites[site_index.at(plants[fi].site)].country);
    if (u.va_max >= 0) unit_va_max[ui] = u.va_max;
    for (const auto& pid : plants[fi].producible) {
      producers_of[part_index.at(pid)].push_back(static_cast<int>(ui));
    }
  }
  for (auto& v : producers_of) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  country_va_max.assign(countries.size(), bounds.va_c_max_default);
  for (std::size_t i = 0; i < countries.size(); ++i) {
    if (countries[i].va_max >= 0) country_va_max[i] = countries[i].va_max;
  }
  supplier_va_max.assign(suppliers.size(), bounds.va_s_max_default);
  for (std::size_t i = 0; i < suppliers.size(); ++i) {
    if (suppliers[i].va_max >= 0) supplier_va_max[i] = suppliers[i].va_max;
  }

  warehouse_nearby.assign(warehouses.size(), {});
  for (std::size_t wi = 0; wi < warehouses.size(); ++wi) {
    const auto& w = warehouses[wi];
    resolve(site_index, w.site, "site", w.id);
    for (const auto& uid : w.nearby_units) {
      warehouse_nearby[wi].push_back(resolve(unit_index, uid, "unit", w.id));
    }
    std::sort(warehouse_nearby[wi].begin(), warehouse_nearby[wi].end());
    warehouse_nearby[wi].erase(
        std::unique(warehouse_nearby[wi].begin(), warehouse_nearby[wi].end()),
        warehouse_nearby[wi].end());
  }

  for (const auto& l : links) {
    const bool src_ok = unit_index.count(l.source) || warehouse_index.count(l.source);
    const bool dst_ok = unit_index.count(l.dest) || warehouse_index.count(l.dest);
    if (!src_ok) throw ReferenceError("link source '" + l.source + "' is not a unit or warehouse");
    if (!dst_ok) throw ReferenceError("link dest '" + l.dest + "' is not a unit or warehouse");
    if (l.source == l.dest) throw Error("link '" + l.source + "' -> itself is not allowed");
    if (l.alternatives.empty()) {
      throw Error("link '" + l.source + "' -> '" + l.dest + "' has no alternatives");
    }
    std::vector<Id> seen;
    for (const auto& a : l.alternatives) {
      resolve(mean_index, a.mean, "transport mean", l.source + "->" + l.dest);
      if (a.distance_km <= 0) {
        throw Error("link '" + l.source + "' -> '" + l.dest + "' has non-positive distance");
      }
      if (std::find(seen.begin(), seen.end(), a.mean) != seen.end()) {
        throw Error("link '" + l.source + "' -> '" + l.dest + "' repeats mean '" + a.mean + "'");
      }
      seen.push_back(a.mean);
    }
  }

  // BOM: every part except the root must appear as a child exactly once, and
  // the child graph must be acyclic.
  if (final_product.empty()) throw Error("final_product is not set");
  root_part = resolve(part_index, final_product, "part", "final_product");
  parent_of.assign(np, -1);
  quantity_in_parent.assign(np, 1);
  children_of.assign(np, {});
  for (int pi = 0; pi < np; ++pi) {
    for (const auto& e : parts[pi].children) {
      const int ci = resolve(part_index, e.child, "part", parts[pi].id);
      if (e.quantity < 1) {
        throw Error("BOM edge '" + parts[pi].id + "' -> '" + e.child + "' needs quantity >= 1");
      }
      if (parent_of[ci] != -1) {
        throw Error("part '" + e.child + "' has more than one parent in the BOM");
      }
      if (ci == root_part) throw Error("final product cannot be a child in the BOM");
      parent_of[ci] = pi;
      quantity_in_parent[ci] = e.quantity;
      children_of[pi].push_back(ci);
    }
  }
  for (int pi = 0; pi < np; ++pi) {
    if (pi != root_part && parent_of[pi] == -1) {
      throw Error("BOM is not a single tree: part '" + parts[pi].id +
                  "' is not reachable from the final product");
    }
  }
  // Walk to the root from every part; a cycle would never terminate, so cap
  // the walk at np steps.
  root_path_quantity.assign(np, 1);
  for (int pi = 0; pi < np; ++pi) {
    std::int64_t q = 1;
    int cur = pi;
    int steps = 0;
    while (cur != root_part) {
      q *= quantity_in_parent[cur];
      cur = parent_of[cur];
      if (++steps > np) throw Error("BOM contains a cycle involving part '" + parts[pi].id + "'");
    }
    root_path_quantity[pi] = q;
  }
}

ValueAddedRollup aggregate_value_added(const ProductionAssignment& assignment,
                                       const Dataset& dataset) {
  ValueAddedRollup r;
  r.per_country.assign(dataset.countries.size(), 0.0);
  r.per_supplier.assign(dataset.suppliers.size(), 0.0);
  r.per_unit.assign(dataset.units.size(), 0.0);
  if (assignment.per_part.size() != static_cast<std::size_t>(dataset.n_parts())) {
    throw ReferenceError("assignment part count does not match dataset");
  }
  for (int pi = 0; pi < dataset.n_parts(); ++pi) {
    for (const auto& us : assignment.per_part[pi]) {
      if (us.unit < 0 || us.unit >= dataset.n_units()) {
        throw ReferenceError("assignment references unknown unit index for part '" +
                             dataset.parts[pi].id + "'");
      }
      const double va = dataset.parts[pi].value_added * us.share;
      r.per_unit[us.unit] += va;
      r.per_country[dataset.unit_country[us.unit]] += va;
      r.per_supplier[dataset.unit_supplier[us.unit]] += va;
    }
  }
  return r;
}

std::vector<ConstraintViolation> check_constraints(const ProductionAssignment& assignment,
                                                   const Dataset& dataset) {
  std::vector<ConstraintViolation> out;
  const auto add = [&out](int c, const Id& subject, double observed, double bound,
                          std::string msg) {
    out.push_back({c, subject, observed, bound, std::move(msg)});
  };

  for (int pi = 0; pi < dataset.n_parts(); ++pi) {
    const auto& entries = assignment.per_part[pi];
    if (entries.empty()) continue;
    const Id& part_id = dataset.parts[pi].id;

    double share_sum = 0.0;
    for (const auto& us : entries) {
      share_sum += us.share;
      const auto& caps = dataset.producers_of[pi];
      if (!std::binary_search(caps.begin(), caps.end(), us.unit)) {
        add(1, part_id, 0, 0,
            "part '" + part_id + "' assigned to unit '" + dataset.units[us.unit].id +
                "' which cannot produce it");
      }
    }
    if (std::abs(share_sum - 1.0) > kShareEps) {
      add(3, part_id, share_sum, 1.0, "shares of part '" + part_id + "' do not sum to 1");
    }

    if (assignment.mode == Sourcing::kDouble) {
      if (entries.size() != 2) {
        add(2, part_id, static_cast<double>(entries.size()), 2.0,
            "double sourcing requires exactly two units for part '" + part_id + "'");
      } else {
        bool multi_country_possible = false;
        const int c0 = dataset.unit_country[dataset.producers_of[pi].front()];
        for (int u : dataset.producers_of[pi]) {
          if (dataset.unit_country[u] != c0) {
            multi_country_possible = true;
            break;
          }
        }
        if (entries[0].unit == entries[1].unit) {
          add(2, part_id, 0, 0, "part '" + part_id + "' assigned twice to the same unit");
        } else if (multi_country_possible &&
                   dataset.unit_country[entries[0].unit] ==
                       dataset.unit_country[entries[1].unit]) {
          add(2, part_id, 0, 0,
              "part '" + part_id + "' double-sourced within one country although producers in "
              "several countries exist");
        }
        for (const auto& us : entries) {
          if (us.share < 0.2 - kShareEps || us.share > 0.8 + kShareEps) {
            add(3, part_id, us.share, us.share < 0.5 ? 0.2 : 0.8,
                "split share of part '" + part_id + "' outside [0.2, 0.8]");
          }
        }
      }
    }
  }

  const ValueAddedRollup rollup = aggregate_value_added(assignment, dataset);
  for (std::size_t ci = 0; ci < dataset.countries.size(); ++ci) {
    if (rollup.per_country[ci] > dataset.country_va_max[ci] + kShareEps) {
      add(4, dataset.countries[ci].id, rollup.per_country[ci], dataset.country_va_max[ci],
          "country '" + dataset.countries[ci].id + "' exceeds its value-added bound");
    }
  }
  for (std::size_t si = 0; si < dataset.suppliers.size(); ++si) {
    if (rollup.per_supplier[si] > dataset.supplier_va_max[si] + kShareEps) {
      add(5, dataset.suppliers[si].id, rollup.per_supplier[si], dataset.supplier_va_max[si],
          "supplier '" + dataset.suppliers[si].id + "' exceeds its value-added bound");
    }
  }
  for (std::size_t ui = 0; ui < dataset.units.size(); ++ui) {
    if (rollup.per_unit[ui] > dataset.unit_va_max[ui] + kShareEps) {
      add(6, dataset.units[ui].id, rollup.per_unit[ui], dataset.unit_va_max[ui],
          "unit '" + dataset.units[ui].id + "' exceeds its value-added bound");
    }
  }

  return out;
}

}  // namespace indsys
