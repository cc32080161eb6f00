#include "indsys/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "indsys/batching.hpp"
#include "indsys/transport_index.hpp"

namespace indsys {

namespace {

using nlohmann::json;

constexpr const char* kSchemaVersion = "indsys-1";

Box box_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) {
    throw ParseError(what + " must be a [l, w, h] triple");
  }
  return Box{j[0].get<std::int64_t>(), j[1].get<std::int64_t>(), j[2].get<std::int64_t>()};
}

json box_to_json(const Box& b) { return json::array({b.l, b.w, b.h}); }

template <typename F>
void for_each_section(const json& doc, const char* key, F&& f) {
  if (!doc.contains(key)) return;
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(std::string("section '") + key + "' must be an array");
  for (const auto& item : arr) f(item);
}

}  // namespace

bool ConsistencyReport::ok() const { return error_count() == 0; }

int ConsistencyReport::error_count() const {
  int n = 0;
  for (const auto& f : findings) n += f.severity == Severity::kError ? 1 : 0;
  return n;
}

std::string ConsistencyReport::to_text() const {
  std::ostringstream os;
  for (const auto& f : findings) {
    os << (f.severity == Severity::kError ? "error" : "warning") << " " << f.code << " ["
       << f.subject << "] " << f.message << "\n";
  }
  os << findings.size() << " finding(s), " << error_count() << " error(s)\n";
  return os.str();
}

Dataset load_dataset(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("dataset is not valid JSON: ") + e.what());
  }

  Dataset d;
  try {
    if (!doc.contains("meta") || !doc["meta"].contains("schema_version")) {
      throw ParseError("missing meta.schema_version");
    }
    d.schema_version = doc["meta"]["schema_version"].get<std::string>();
    if (d.schema_version != kSchemaVersion) {
      throw ParseError("unsupported schema version '" + d.schema_version + "', expected '" +
                       kSchemaVersion + "'");
    }
    if (doc.contains("bounds")) {
      const json& b = doc["bounds"];
      d.bounds.va_c_max_default = b.value("va_c_max_default", d.bounds.va_c_max_default);
      d.bounds.va_s_max_default = b.value("va_s_max_default", d.bounds.va_s_max_default);
      d.bounds.va_u_max_default = b.value("va_u_max_default", d.bounds.va_u_max_default);
    }
    d.final_product = doc.value("final_product", "");

    for_each_section(doc, "parts", [&](const json& j) {
      Part p;
      p.id = j.at("id").get<std::string>();
      p.name = j.value("name", p.id);
      p.bbox = box_from_json(j.at("bbox_mm"), "part '" + p.id + "' bbox_mm");
      p.value_added = j.at("value_added").get<double>();
      if (j.contains("children")) {
        for (const auto& c : j["children"]) {
          BomEdge e;
          e.child = c.at("part").get<std::string>();
          e.quantity = c.value("quantity", 1);
          p.children.push_back(e);
        }
      }
      d.parts.push_back(std::move(p));
    });
    for_each_section(doc, "countries", [&](const json& j) {
      Country c;
      c.id = j.at("id").get<std::string>();
      c.va_min = j.value("va_min", 0.0);
      c.va_max = j.value("va_max", -1.0);
      d.countries.push_back(std::move(c));
    });
    for_each_section(doc, "suppliers", [&](const json& j) {
      Supplier s;
      s.id = j.at("id").get<std::string>();
      s.va_min = j.value("va_min", 0.0);
      s.va_max = j.value("va_max", -1.0);
      d.suppliers.push_back(std::move(s));
    });
    for_each_section(doc, "sites", [&](const json& j) {
      d.sites.push_back({j.at("id").get<std::string>(), j.at("country").get<std::string>()});
    });
    for_each_section(doc, "plants", [&](const json& j) {
      Plant f;
      f.id = j.at("id").get<std::string>();
      f.site = j.at("site").get<std::string>();
      if (j.contains("producible")) {
        for (const auto& p : j["producible"]) f.producible.push_back(p.get<std::string>());
      }
      f.production_h = j.value("production_h", 0.0);
      d.plants.push_back(std::move(f));
    });
    for_each_section(doc, "units", [&](const json& j) {
      ProductionUnit u;
      u.id = j.at("id").get<std::string>();
      u.supplier = j.at("supplier").get<std::string>();
      u.plant = j.at("plant").get<std::string>();
      u.va_max = j.value("va_max", -1.0);
      d.units.push_back(std::move(u));
    });
    for_each_section(doc, "warehouses", [&](const json& j) {
      Warehouse w;
      w.id = j.at("id").get<std::string>();
      w.site = j.at("site").get<std::string>();
      if (j.contains("nearby_units")) {
        for (const auto& u : j["nearby_units"]) w.nearby_units.push_back(u.get<std::string>());
      }
      d.warehouses.push_back(std::move(w));
    });
    for_each_section(doc, "transport_means", [&](const json& j) {
      TransportMean m;
      m.id = j.at("id").get<std::string>();
      m.name = j.value("name", m.id);
      m.co2_g_per_km = j.at("co2_g_per_km").get<double>();
      m.speed_km_per_h = j.at("speed_km_per_h").get<double>();
      m.cost_eur_per_km = j.at("cost_eur_per_km").get<double>();
      m.container = box_from_json(j.at("container_mm"), "mean '" + m.id + "' container_mm");
      d.transport_means.push_back(std::move(m));
    });
    for_each_section(doc, "links", [&](const json& j) {
      MetaLink l;
      l.source = j.at("source").get<std::string>();
      l.dest = j.at("dest").get<std::string>();
      for (const auto& a : j.at("alternatives")) {
        l.alternatives.push_back(
            {a.at("mean").get<std::string>(), a.at("distance_km").get<double>()});
      }
      d.links.push_back(std::move(l));
    });
  } catch (const json::exception& e) {
    throw ParseError(std::string("dataset field error: ") + e.what());
  }

  d.finalize();
  return d;
}

Dataset load_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file '" + path + "'");
  return load_dataset(in);
}

std::string serialize_dataset(const Dataset& d) {
  json doc;
  doc["meta"] = {{"schema_version", d.schema_version}};
  doc["bounds"] = {{"va_c_max_default", d.bounds.va_c_max_default},
                   {"va_s_max_default", d.bounds.va_s_max_default},
                   {"va_u_max_default", d.bounds.va_u_max_default}};
  doc["final_product"] = d.final_product;

  doc["parts"] = json::array();
  for (const auto& p : d.parts) {
    json j{{"id", p.id},
           {"name", p.name},
           {"bbox_mm", box_to_json(p.bbox)},
           {"value_added", p.value_added}};
    if (!p.children.empty()) {
      json ch = json::array();
      for (const auto& e : p.children) ch.push_back({{"part", e.child}, {"quantity", e.quantity}});
      j["children"] = ch;
    }
    doc["parts"].push_back(j);
  }
  doc["countries"] = json::array();
  for (const auto& c : d.countries) {
    json j{{"id", c.id}, {"va_min", c.va_min}};
    if (c.va_max >= 0) j["va_max"] = c.va_max;
    doc["countries"].push_back(j);
  }
  doc["suppliers"] = json::array();
  for (const auto& s : d.suppliers) {
    json j{{"id", s.id}, {"va_min", s.va_min}};
    if (s.va_max >= 0) j["va_max"] = s.va_max;
    doc["suppliers"].push_back(j);
  }
  doc["sites"] = json::array();
  for (const auto& s : d.sites) doc["sites"].push_back({{"id", s.id}, {"country", s.country}});
  doc["plants"] = json::array();
  for (const auto& f : d.plants) {
    json j{{"id", f.id}, {"site", f.site}, {"producible", f.producible}};
    if (f.production_h > 0) j["production_h"] = f.production_h;
    doc["plants"].push_back(j);
  }
  doc["units"] = json::array();
  for (const auto& u : d.units) {
    json j{{"id", u.id}, {"supplier", u.supplier}, {"plant", u.plant}};
    if (u.va_max >= 0) j["va_max"] = u.va_max;
    doc["units"].push_back(j);
  }
  doc["warehouses"] = json::array();
  for (const auto& w : d.warehouses) {
    doc["warehouses"].push_back(
        {{"id", w.id}, {"site", w.site}, {"nearby_units", w.nearby_units}});
  }
  doc["transport_means"] = json::array();
  for (const auto& m : d.transport_means) {
    doc["transport_means"].push_back({{"id", m.id},
                                      {"name", m.name},
                                      {"co2_g_per_km", m.co2_g_per_km},
                                      {"speed_km_per_h", m.speed_km_per_h},
                                      {"cost_eur_per_km", m.cost_eur_per_km},
                                      {"container_mm", box_to_json(m.container)}});
  }
  doc["links"] = json::array();
  for (const auto& l : d.links) {
    json alts = json::array();
    for (const auto& a : l.alternatives) {
      alts.push_back({{"mean", a.mean}, {"distance_km", a.distance_km}});
    }
    doc["links"].push_back({{"source", l.source}, {"dest", l.dest}, {"alternatives", alts}});
  }
  return doc.dump(2) + "\n";
}

void save_dataset_file(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset file '" + path + "'");
  out << serialize_dataset(dataset);
}

ConsistencyReport validate_consistency(const Dataset& d) {
  ConsistencyReport report;
  const auto add = [&report](Severity sev, std::string code, std::string subject,
                             std::string message) {
    report.findings.push_back({sev, std::move(code), std::move(subject), std::move(message)});
  };

  for (int pi = 0; pi < d.n_parts(); ++pi) {
    if (d.producers_of[pi].empty()) {
      add(Severity::kWarning, "W_PART_NO_PRODUCER", d.parts[pi].id,
          "no production unit can produce this part");
    }
  }
  for (std::size_t wi = 0; wi < d.warehouses.size(); ++wi) {
    if (d.warehouse_nearby[wi].empty()) {
      add(Severity::kWarning, "W_WAREHOUSE_ISOLATED", d.warehouses[wi].id,
          "warehouse is near no production unit");
    }
  }

  const TransportIndex index(d);
  std::vector<bool> node_touched(d.n_units() + d.n_warehouses(), false);
  for (const auto& l : d.links) {
    const auto touch = [&](const Id& id) {
      auto it = d.unit_index.find(id);
      if (it != d.unit_index.end()) {
        node_touched[it->second] = true;
      } else {
        node_touched[d.n_units() + d.warehouse_index.at(id)] = true;
      }
    };
    touch(l.source);
    touch(l.dest);
  }
  for (int u = 0; u < d.n_units(); ++u) {
    if (!node_touched[u]) {
      add(Severity::kWarning, "W_UNIT_UNREACHABLE", d.units[u].id,
          "unit has no transport link in or out");
    }
  }

  // Fit check on every link a part could be routed over: for part p those are
  // the hops of candidate routes between any producer of p and any producer
  // of p's parent. A link where p fits none of the offered containers would
  // strand the flow later, so it is an error now.
  std::vector<std::set<int>> links_for_part(d.n_parts());
  for (int pi = 0; pi < d.n_parts(); ++pi) {
    const int parent = d.parent_of[pi];
    if (parent < 0) continue;
    for (int u : d.producers_of[pi]) {
      for (int v : d.producers_of[parent]) {
        if (u == v) continue;
        for (const auto& route : index.routes(u, v)) {
          for (const auto& hop : route) links_for_part[pi].insert(hop.link);
        }
      }
    }
  }
  for (int pi = 0; pi < d.n_parts(); ++pi) {
    for (int li : links_for_part[pi]) {
      const MetaLink& l = d.links[li];
      bool any_fit = false;
      for (const auto& a : l.alternatives) {
        if (fits(d.parts[pi].bbox, d.transport_means[d.mean_index.at(a.mean)].container)) {
          any_fit = true;
          break;
        }
      }
      if (!any_fit) {
        add(Severity::kError, "E_NO_FITTING_MEAN", d.parts[pi].id + "/" + l.source + "->" + l.dest,
            "part fits no transport alternative of a link it could be routed over");
      }
    }
  }

  std::stable_sort(report.findings.begin(), report.findings.end(),
                   [](const Finding& a, const Finding& b) {
                     return std::tie(a.code, a.subject) < std::tie(b.code, b.subject);
                   });
  return report;
}

}  // namespace indsys
