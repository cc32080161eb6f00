#include "indsys/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "indsys/rng.hpp"

namespace indsys {

namespace {

std::string tag(const char* prefix, int i) {
  std::ostringstream os;
  os << prefix;
  if (i < 10) os << "00";
  else if (i < 100) os << "0";
  os << i;
  return os.str();
}

double round_to(double v, double step) { return std::round(v / step) * step; }

struct Point {
  double x = 0, y = 0;
};

struct Caps {
  std::vector<double> country;
  double supplier = 0;
  double unit = 0;
};

struct Loads {
  std::vector<double> country, supplier, unit;
};

struct GenWorld {
  const SyntheticProfile& p;
  Rng rng;

  std::vector<double> part_va;
  std::vector<int> part_parent;     // -1 for root
  std::vector<int> part_qty;
  std::vector<Box> part_bbox;
  std::vector<bool> part_heavy;

  std::vector<int> site_country;
  std::vector<int> unit_supplier;
  std::vector<int> unit_site;
  std::vector<Point> country_center;
  std::vector<Point> site_pos;

  // warehouse -> country, site, nearby unit list
  std::vector<int> wh_country;
  std::vector<int> wh_site;
  std::vector<std::vector<int>> wh_nearby;
  std::vector<int> unit_hub;  // -1 when the unit has no warehouse

  Caps caps;
  std::vector<std::set<int>> capability;  // unit -> parts

  GenWorld(const SyntheticProfile& profile, std::uint64_t stream)
      : p(profile), rng(stream) {}
};

double dist_km(const Point& a, const Point& b, double factor, double min_km) {
  const double d = std::hypot(a.x - b.x, a.y - b.y) * factor;
  return std::max(round_to(d, 0.1), min_km);
}

void make_parts(GenWorld& w) {
  const int n = w.p.parts;
  w.part_va.assign(n, 0.0);
  w.part_parent.assign(n, -1);
  w.part_qty.assign(n, 1);
  w.part_bbox.assign(n, {});
  w.part_heavy.assign(n, false);

  const bool big = n >= 12 && !w.p.tight_unit_bounds;
  if (w.p.tight_unit_bounds) {
    for (int i = 0; i < n; ++i) {
      w.part_va[i] = (0.9 + 0.2 * w.rng.next_double()) / n;
    }
  } else if (big) {
    w.part_va[0] = 0.11;  // final product
    w.part_va[1] = 0.1;   // the two heavy components
    w.part_va[2] = 0.1;
    w.part_heavy[1] = w.part_heavy[2] = true;
    double raw_sum = 0;
    std::vector<double> raw(n, 0.0);
    for (int i = 3; i < n; ++i) {
      const double r = w.rng.next_double();
      raw[i] = 0.35 + 2.2 * r * r;
      raw_sum += raw[i];
    }
    for (int i = 3; i < n; ++i) {
      w.part_va[i] =
          std::clamp(round_to(0.69 * raw[i] / raw_sum, 0.0001), 0.004, 0.095);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      w.part_va[i] = std::clamp((0.7 + 0.6 * w.rng.next_double()) / n, 0.01, 0.9);
    }
  }

  // Random tree: insert parts in shuffled order under an already inserted
  // parent, capping fan-out.
  std::vector<int> order;
  for (int i = 1; i < n; ++i) order.push_back(i);
  w.rng.shuffle(order);
  std::vector<int> inserted{0};
  std::vector<int> fanout(n, 0);
  for (int part : order) {
    int parent = inserted[static_cast<std::size_t>(w.rng.bounded(inserted.size()))];
    for (int tries = 0; tries < 5 && fanout[parent] >= 6; ++tries) {
      parent = inserted[static_cast<std::size_t>(w.rng.bounded(inserted.size()))];
    }
    w.part_parent[part] = parent;
    fanout[parent]++;
    w.part_qty[part] = w.rng.chance(0.15) ? 2 : 1;
    inserted.push_back(part);
  }

  for (int i = 0; i < n; ++i) {
    if (w.part_heavy[i] || (big && i == 0)) {
      w.part_bbox[i] = {10000 + static_cast<std::int64_t>(w.rng.bounded(5000)),
                        2400 + static_cast<std::int64_t>(w.rng.bounded(900)),
                        1800 + static_cast<std::int64_t>(w.rng.bounded(1200))};
    } else {
      w.part_bbox[i] = {800 + static_cast<std::int64_t>(w.rng.bounded(14200)),
                        400 + static_cast<std::int64_t>(w.rng.bounded(2900)),
                        300 + static_cast<std::int64_t>(w.rng.bounded(2700))};
    }
  }
}

void make_geography(GenWorld& w) {
  w.country_center.resize(w.p.countries);
  for (auto& c : w.country_center) {
    c = {w.rng.uniform_real(0, 9000), w.rng.uniform_real(0, 9000)};
  }
  w.site_country.resize(w.p.sites);
  w.site_pos.resize(w.p.sites);
  for (int i = 0; i < w.p.sites; ++i) {
    w.site_country[i] = i % w.p.countries;
    const Point& c = w.country_center[w.site_country[i]];
    w.site_pos[i] = {c.x + w.rng.uniform_real(-250, 250), c.y + w.rng.uniform_real(-250, 250)};
  }
}

void make_units(GenWorld& w) {
  w.unit_supplier.resize(w.p.units);
  w.unit_site.resize(w.p.units);
  std::set<std::pair<int, int>> taken;
  for (int i = 0; i < w.p.units; ++i) {
    const int supplier = i % w.p.suppliers;
    int site = -1;
    const int start = static_cast<int>(w.rng.bounded(w.p.sites));
    for (int k = 0; k < w.p.sites; ++k) {
      const int cand = (start + k) % w.p.sites;
      if (!taken.count({supplier, cand})) {
        site = cand;
        break;
      }
    }
    if (site < 0) {
      throw ProfileError("profile asks for more units than supplier/site pairs allow");
    }
    taken.insert({supplier, site});
    w.unit_supplier[i] = supplier;
    w.unit_site[i] = site;
  }
}

void make_warehouses(GenWorld& w) {
  w.unit_hub.assign(w.p.units, -1);
  if (w.p.warehouses == 0) return;

  std::map<int, std::vector<int>> units_by_country;
  for (int u = 0; u < w.p.units; ++u) {
    units_by_country[w.site_country[w.unit_site[u]]].push_back(u);
  }
  std::vector<int> countries_with_units;
  for (const auto& [c, us] : units_by_country) countries_with_units.push_back(c);

  // Cycle warehouses over producing countries without exceeding the number of
  // units there (so no warehouse ends up near nothing).
  std::vector<int> wh_count(w.p.countries, 0);
  int placed = 0;
  int cursor = 0;
  w.wh_country.assign(w.p.warehouses, -1);
  while (placed < w.p.warehouses) {
    bool progress = false;
    for (std::size_t k = 0; k < countries_with_units.size() && placed < w.p.warehouses; ++k) {
      const int c = countries_with_units[(cursor + k) % countries_with_units.size()];
      if (wh_count[c] < static_cast<int>(units_by_country[c].size())) {
        w.wh_country[placed++] = c;
        wh_count[c]++;
        progress = true;
      }
    }
    cursor++;
    if (!progress) break;  // more warehouses than units; park the rest below
  }
  for (int i = placed; i < w.p.warehouses; ++i) {
    w.wh_country[i] = countries_with_units.front();
  }

  // Site in the warehouse country (there is one by construction when the
  // country has units).
  w.wh_site.assign(w.p.warehouses, 0);
  for (int i = 0; i < w.p.warehouses; ++i) {
    std::vector<int> sites;
    for (int s = 0; s < w.p.sites; ++s) {
      if (w.site_country[s] == w.wh_country[i]) sites.push_back(s);
    }
    w.wh_site[i] = sites[static_cast<std::size_t>(w.rng.bounded(sites.size()))];
  }

  // Partition each country's units over its warehouses; each unit gets one
  // hub feeding its cross-country traffic.
  w.wh_nearby.assign(w.p.warehouses, {});
  for (const auto& [c, us] : units_by_country) {
    std::vector<int> whs;
    for (int i = 0; i < w.p.warehouses; ++i) {
      if (w.wh_country[i] == c) whs.push_back(i);
    }
    if (whs.empty()) continue;
    for (std::size_t k = 0; k < us.size(); ++k) {
      const int wh = whs[k % whs.size()];
      w.wh_nearby[wh].push_back(us[k]);
      if (w.unit_hub[us[k]] < 0) w.unit_hub[us[k]] = wh;
      if (w.p.route_diversity) {
        // Broader coverage: every warehouse of the country is nearby.
        for (int other : whs) {
          if (other != wh) w.wh_nearby[other].push_back(us[k]);
        }
      }
    }
  }
  for (auto& v : w.wh_nearby) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

void make_caps(GenWorld& w) {
  w.caps.country.assign(w.p.countries, 0.0);
  if (w.p.tight_unit_bounds) {
    for (auto& c : w.caps.country) c = 0.9;
    w.caps.supplier = 0.9;
    w.caps.unit = 1.35 / w.p.parts;
    return;
  }
  const double base_c = std::max(0.1, 1.6 / w.p.countries);
  const double overrides[3] = {0.22, 0.12, 0.2};
  for (int c = 0; c < w.p.countries; ++c) {
    w.caps.country[c] = base_c;
    if (c < 3) w.caps.country[c] = std::max(base_c, overrides[c]);
  }
  w.caps.supplier = std::max(0.15, 1.6 / w.p.suppliers);
  w.caps.unit = std::max(0.15, 2.6 / w.p.units);
}

bool load_fits(const GenWorld& w, const Loads& loads, int unit, double va) {
  const int c = w.site_country[w.unit_site[unit]];
  const int s = w.unit_supplier[unit];
  return loads.unit[unit] + va <= w.caps.unit + 1e-9 &&
         loads.supplier[s] + va <= w.caps.supplier + 1e-9 &&
         loads.country[c] + va <= w.caps.country[c] + 1e-9;
}

void commit_load(const GenWorld& w, Loads& loads, int unit, double va) {
  loads.unit[unit] += va;
  loads.supplier[w.unit_supplier[unit]] += va;
  loads.country[w.site_country[w.unit_site[unit]]] += va;
}

// Feasible units for a witness placement, optionally restricted to a country
// set, ranked by relative country headroom with a random pick among the best.
int pick_witness_unit(GenWorld& w, const Loads& loads, double va,
                      const std::set<int>* allowed_countries, const std::set<int>& exclude) {
  struct Cand {
    int unit;
    double key;
  };
  std::vector<Cand> cands;
  for (int u = 0; u < w.p.units; ++u) {
    if (exclude.count(u)) continue;
    const int c = w.site_country[w.unit_site[u]];
    if (allowed_countries && !allowed_countries->count(c)) continue;
    if (!load_fits(w, loads, u, va)) continue;
    cands.push_back({u, (loads.country[c] + va) / w.caps.country[c] + 0.10 * loads.unit[u]});
  }
  if (cands.empty()) return -1;
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Cand& a, const Cand& b) { return a.key < b.key; });
  const std::size_t beam = std::min<std::size_t>(cands.size(), 3);
  return cands[static_cast<std::size_t>(w.rng.bounded(beam))].unit;
}

// Places one witness assignment per sourcing mode and records the capability
// every placement needs. Returns false when some part cannot be placed; the
// caller retries with a fresh stream.
bool make_capabilities(GenWorld& w) {
  w.capability.assign(w.p.units, {});
  const bool big = w.p.parts >= 12 && !w.p.tight_unit_bounds;
  std::set<int> heavy_countries{0, 2};  // the generous override countries

  std::vector<int> order(w.p.parts);
  for (int i = 0; i < w.p.parts; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return w.part_va[a] > w.part_va[b]; });

  // Single-sourcing witness (also covers the parallel final-assembly option:
  // the root gets extra capable units below).
  {
    Loads loads{std::vector<double>(w.p.countries, 0), std::vector<double>(w.p.suppliers, 0),
                std::vector<double>(w.p.units, 0)};
    for (int part : order) {
      const std::set<int>* allowed =
          (big && w.part_heavy[part] && w.p.countries >= 4) ? &heavy_countries : nullptr;
      const int u = pick_witness_unit(w, loads, w.part_va[part], allowed, {});
      if (u < 0) return false;
      commit_load(w, loads, u, w.part_va[part]);
      w.capability[u].insert(part);
    }
  }

  // Double-sourcing witness: two units in different countries at half share.
  if (w.p.double_sourcing_feasible) {
    Loads loads{std::vector<double>(w.p.countries, 0), std::vector<double>(w.p.suppliers, 0),
                std::vector<double>(w.p.units, 0)};
    for (int part : order) {
      const double half = 0.5 * w.part_va[part];
      const std::set<int>* allowed =
          (big && w.part_heavy[part] && w.p.countries >= 4) ? &heavy_countries : nullptr;
      const int u1 = pick_witness_unit(w, loads, half, allowed, {});
      if (u1 < 0) return false;
      commit_load(w, loads, u1, half);
      // Second source in another country.
      std::set<int> other_countries;
      for (int c = 0; c < w.p.countries; ++c) {
        if (c != w.site_country[w.unit_site[u1]] && (!allowed || allowed->count(c))) {
          other_countries.insert(c);
        }
      }
      const int u2 = pick_witness_unit(w, loads, half, &other_countries, {u1});
      if (u2 < 0) return false;
      commit_load(w, loads, u2, half);
      w.capability[u1].insert(part);
      w.capability[u2].insert(part);
    }
  }

  // The root needs parallel-assembly slack: two to three capable units.
  {
    std::set<int> root_units;
    for (int u = 0; u < w.p.units; ++u) {
      if (w.capability[u].count(0)) root_units.insert(u);
    }
    while (root_units.size() < 2) {
      const int u = static_cast<int>(w.rng.bounded(w.p.units));
      if (root_units.insert(u).second) w.capability[u].insert(0);
    }
  }

  // Random extra capabilities widen the search space.
  for (int part = 0; part < w.p.parts; ++part) {
    const int extra = w.p.tight_unit_bounds ? w.rng.uniform_int(1, 2) : w.rng.uniform_int(1, 3);
    for (int k = 0; k < extra; ++k) {
      const int u = static_cast<int>(w.rng.bounded(w.p.units));
      if (big && w.part_heavy[part] && w.p.countries >= 4 &&
          !heavy_countries.count(w.site_country[w.unit_site[u]])) {
        continue;  // heavy components stay in their certified countries
      }
      w.capability[u].insert(part);
    }
  }

  // Guarantee producers in at least two countries per part when requested.
  if (w.p.double_sourcing_feasible) {
    for (int part = 0; part < w.p.parts; ++part) {
      std::set<int> countries;
      std::vector<int> producers;
      for (int u = 0; u < w.p.units; ++u) {
        if (w.capability[u].count(part)) {
          countries.insert(w.site_country[w.unit_site[u]]);
          producers.push_back(u);
        }
      }
      int guard = 0;
      while (countries.size() < 2 && ++guard < 1000) {
        const int u = static_cast<int>(w.rng.bounded(w.p.units));
        const int c = w.site_country[w.unit_site[u]];
        if (big && w.part_heavy[part] && w.p.countries >= 4 && !heavy_countries.count(c)) {
          continue;
        }
        if (!countries.count(c)) {
          w.capability[u].insert(part);
          countries.insert(c);
        }
      }
      if (countries.size() < 2) return false;
    }
  }
  return true;
}

struct MeanPlan {
  std::vector<int> sea, road, air;  // indices into the means vector
  int oversized_sea = -1, oversized_road = -1, oversized_air = -1;
};

MeanPlan make_means(GenWorld& w, std::vector<TransportMean>& means) {
  MeanPlan plan;
  const int n = w.p.means;
  int n_sea = 0, n_air = 0, n_road = 0;
  if (n == 1) {
    n_road = 1;
  } else if (n == 2) {
    n_road = 1;
    n_sea = 1;
  } else {
    n_sea = std::max(1, static_cast<int>(std::lround(n * 9.0 / 17.0)));
    n_air = std::max(1, static_cast<int>(std::lround(n * 2.0 / 17.0)));
    n_road = n - n_sea - n_air;
    if (n_road < 1) {
      n_road = 1;
      n_sea = n - n_air - n_road;
    }
  }
  const Box oversize{16000, 3600, 3200};

  int idx = 0;
  const auto add = [&](const std::string& name, double co2, double speed, double cost, Box box) {
    TransportMean m;
    m.id = tag("T", idx++);
    m.name = name;
    m.co2_g_per_km = round_to(co2, 0.1);
    m.speed_km_per_h = round_to(speed, 0.1);
    m.cost_eur_per_km = round_to(cost, 0.01);
    m.container = box;
    means.push_back(std::move(m));
    return idx - 1;
  };

  for (int i = 0; i < n_sea; ++i) {
    const bool oversized = i == n_sea - 1;
    const Box box = oversized ? oversize
                              : Box{12190 + static_cast<std::int64_t>(w.rng.bounded(7)) * 400,
                                    2440 + static_cast<std::int64_t>(w.rng.bounded(5)) * 60,
                                    2590 + static_cast<std::int64_t>(w.rng.bounded(5)) * 90};
    const int mi = add(oversized ? "RoRo Ship Oversized" : "Container Ship " + std::string(1, static_cast<char>('A' + i)),
                       oversized ? w.rng.uniform_real(90, 160) : w.rng.uniform_real(35, 130),
                       oversized ? w.rng.uniform_real(18, 30) : w.rng.uniform_real(22, 42),
                       oversized ? w.rng.uniform_real(6, 14) : w.rng.uniform_real(2, 9), box);
    plan.sea.push_back(mi);
    if (oversized) plan.oversized_sea = mi;
  }
  for (int i = 0; i < n_road; ++i) {
    const bool oversized = i == n_road - 1;
    const Box box = oversized ? oversize
                              : Box{13620 + static_cast<std::int64_t>(w.rng.bounded(4)) * 300,
                                    2480 + static_cast<std::int64_t>(w.rng.bounded(4)) * 40,
                                    2700 + static_cast<std::int64_t>(w.rng.bounded(4)) * 80};
    const int mi = add(oversized ? "Truck Oversized Low Bed" : "Truck Standard " + std::string(1, static_cast<char>('A' + i)),
                       oversized ? w.rng.uniform_real(900, 1400) : w.rng.uniform_real(500, 950),
                       oversized ? w.rng.uniform_real(45, 60) : w.rng.uniform_real(55, 85),
                       oversized ? w.rng.uniform_real(4, 9) : w.rng.uniform_real(1.3, 3.5), box);
    plan.road.push_back(mi);
    if (oversized) plan.oversized_road = mi;
  }
  for (int i = 0; i < n_air; ++i) {
    const bool oversized = i == n_air - 1;
    const Box box = oversized ? oversize : Box{9000, 3000, 2800};
    const int mi =
        add(oversized ? "Outsize Cargo Freighter" : "Cargo Freighter " + std::string(1, static_cast<char>('A' + i)),
            w.rng.uniform_real(14000, 26000), w.rng.uniform_real(650, 880),
            oversized ? w.rng.uniform_real(20, 40) : w.rng.uniform_real(14, 32), box);
    plan.air.push_back(mi);
    if (oversized) plan.oversized_air = mi;
  }
  // A profile without air needs the sea/road oversize to exist regardless;
  // they always do by construction.
  return plan;
}

}  // namespace

Dataset gen_synthetic(const SyntheticProfile& profile, std::uint64_t seed) {
  if (profile.parts < 1 || profile.countries < 1 || profile.suppliers < 1 ||
      profile.sites < 1 || profile.units < 1 || profile.means < 1 || profile.warehouses < 0) {
    throw ProfileError("profile counts must be positive (warehouses may be zero)");
  }
  if (profile.double_sourcing_feasible && profile.countries < 2) {
    throw ProfileError("double-sourcing feasibility needs at least two countries");
  }
  if (profile.units > profile.suppliers * profile.sites) {
    throw ProfileError("profile asks for more units than supplier/site pairs allow");
  }

  for (int attempt = 0; attempt < 25; ++attempt) {
    GenWorld w(profile, Rng::derive(seed, 0x67656eULL, static_cast<std::uint64_t>(attempt)));
    make_parts(w);
    make_geography(w);
    make_units(w);
    make_warehouses(w);
    make_caps(w);
    if (!make_capabilities(w)) continue;

    Dataset d;
    d.bounds.va_c_max_default = w.p.tight_unit_bounds ? 0.9 : std::max(0.1, 1.6 / profile.countries);
    d.bounds.va_s_max_default = w.caps.supplier;
    d.bounds.va_u_max_default = w.caps.unit;

    for (int c = 0; c < profile.countries; ++c) {
      Country country;
      country.id = tag("C", c);
      country.va_min = 0.0;
      if (std::abs(w.caps.country[c] - d.bounds.va_c_max_default) > 1e-12) {
        country.va_max = w.caps.country[c];
      }
      d.countries.push_back(std::move(country));
    }
    for (int s = 0; s < profile.suppliers; ++s) {
      d.suppliers.push_back({tag("S", s), 0.0, -1.0});
    }
    for (int s = 0; s < profile.sites; ++s) {
      d.sites.push_back({tag("L", s), tag("C", w.site_country[s])});
    }
    for (int i = 0; i < profile.parts; ++i) {
      Part part;
      part.id = tag("P", i);
      part.name = i == 0 ? "Final Product" : "Part " + tag("", i);
      part.bbox = w.part_bbox[i];
      part.value_added = w.part_va[i];
      d.parts.push_back(std::move(part));
    }
    for (int i = 0; i < profile.parts; ++i) {
      if (w.part_parent[i] >= 0) {
        d.parts[w.part_parent[i]].children.push_back({tag("P", i), w.part_qty[i]});
      }
    }
    d.final_product = "P000";

    for (int u = 0; u < profile.units; ++u) {
      Plant plant;
      plant.id = tag("F", u);
      plant.site = tag("L", w.unit_site[u]);
      for (int part : w.capability[u]) plant.producible.push_back(tag("P", part));
      d.plants.push_back(std::move(plant));
      d.units.push_back({tag("U", u), tag("S", w.unit_supplier[u]), tag("F", u), -1.0});
    }
    for (int i = 0; i < profile.warehouses; ++i) {
      Warehouse wh;
      wh.id = tag("W", i);
      wh.site = tag("L", w.wh_site[i]);
      for (int u : w.wh_nearby[i]) wh.nearby_units.push_back(tag("U", u));
      d.warehouses.push_back(std::move(wh));
    }

    MeanPlan means = make_means(w, d.transport_means);

    // Link fabric. Every link carries an oversize alternative so any part of
    // this world can ride it.
    const auto unit_pos = [&](int u) { return w.site_pos[w.unit_site[u]]; };
    const auto wh_pos = [&](int i) { return w.site_pos[w.wh_site[i]]; };
    const auto road_alts = [&](double km) {
      std::vector<LinkAlternative> alts;
      for (int mi : means.road) alts.push_back({d.transport_means[mi].id, km});
      return alts;
    };
    const auto longhaul_alts = [&](const Point& a, const Point& b) {
      std::vector<LinkAlternative> alts;
      const double sea_km = dist_km(a, b, 1.65, 120);
      const double air_km = dist_km(a, b, 1.05, 150);
      // Two to four maritime options, always including the oversized vessel.
      std::set<int> picked{means.oversized_sea};
      const int extra = w.rng.uniform_int(1, std::max<int>(1, std::min<int>(3, static_cast<int>(means.sea.size()) - 1)));
      for (int k = 0; k < extra; ++k) {
        picked.insert(means.sea[static_cast<std::size_t>(w.rng.bounded(means.sea.size()))]);
      }
      for (int mi : picked) {
        if (mi >= 0) alts.push_back({d.transport_means[mi].id, sea_km});
      }
      if (means.oversized_air >= 0) {
        alts.push_back({d.transport_means[means.oversized_air].id, air_km});
        for (int mi : means.air) {
          if (mi != means.oversized_air && w.rng.chance(0.4)) {
            alts.push_back({d.transport_means[mi].id, air_km});
          }
        }
      }
      return alts;
    };

    const int nu = profile.units;
    for (int u = 0; u < nu; ++u) {
      for (int v = 0; v < nu; ++v) {
        if (u == v) continue;
        const int cu = w.site_country[w.unit_site[u]];
        const int cv = w.site_country[w.unit_site[v]];
        if (cu == cv) {
          d.links.push_back(
              {tag("U", u), tag("U", v), road_alts(dist_km(unit_pos(u), unit_pos(v), 1.25, 40))});
        } else if (profile.warehouses == 0 ||
                   (profile.route_diversity && w.rng.chance(0.35))) {
          d.links.push_back({tag("U", u), tag("U", v), longhaul_alts(unit_pos(u), unit_pos(v))});
        } else if (w.unit_hub[u] < 0 || w.unit_hub[v] < 0) {
          // A country without a warehouse still has to trade across borders.
          d.links.push_back({tag("U", u), tag("U", v), longhaul_alts(unit_pos(u), unit_pos(v))});
        }
      }
    }
    for (int i = 0; i < profile.warehouses; ++i) {
      for (int u : w.wh_nearby[i]) {
        const double km = dist_km(unit_pos(u), wh_pos(i), 1.25, 40);
        d.links.push_back({tag("U", u), tag("W", i), road_alts(km)});
        d.links.push_back({tag("W", i), tag("U", u), road_alts(km)});
      }
      for (int j = 0; j < profile.warehouses; ++j) {
        if (i == j) continue;
        if (w.wh_country[i] != w.wh_country[j]) {
          d.links.push_back({tag("W", i), tag("W", j), longhaul_alts(wh_pos(i), wh_pos(j))});
        } else if (profile.route_diversity) {
          d.links.push_back(
              {tag("W", i), tag("W", j), road_alts(dist_km(wh_pos(i), wh_pos(j), 1.25, 40))});
        }
      }
    }

    d.finalize();
    return d;
  }
  throw ProfileError("could not realize a feasible world for this profile and seed");
}

}  // namespace indsys
