#include "indsys/kpi.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

namespace indsys {

KpiReport compute_kpis(const OptimalPath& path, const TransportNetwork& network,
                       const DemandSchedule& schedule, const Dataset& dataset) {
  (void)network;
  KpiReport r;
  r.k_products = schedule.k_products;

  std::map<Id, KpiRow> rows;
  const auto account = [&](int mean, const LinkScores& s) {
    const TransportMean& m = dataset.transport_means[mean];
    KpiRow& row = rows[m.id];
    row.mean_id = m.id;
    row.mean_name = m.name;
    row.duration_h += s.duration_h;
    row.distance_km += s.distance_km;
    row.co2_g += s.co2_g;
    row.cost_eur += s.cost_eur;
  };
  for (const auto& l : path.links) account(l.mean, l.scores);
  for (const auto& m : path.mixed) account(m.mean, m.scores);

  for (auto& [id, row] : rows) {
    r.duration_h += row.duration_h;
    r.distance_km += row.distance_km;
    r.co2_g += row.co2_g;
    r.cost_eur += row.cost_eur;
    r.by_mean.push_back(row);
  }
  std::sort(r.by_mean.begin(), r.by_mean.end(), [](const KpiRow& a, const KpiRow& b) {
    if (a.mean_name != b.mean_name) return a.mean_name < b.mean_name;
    return a.mean_id < b.mean_id;
  });
  return r;
}

namespace {

std::string fixed(double v, int precision = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

void pad_row(std::ostringstream& os, const std::vector<std::string>& cells,
             const std::vector<std::size_t>& widths) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    os << (i == 0 ? "" : "  ");
    if (i == 0) {
      os << std::left << std::setw(static_cast<int>(widths[i])) << cells[i];
    } else {
      os << std::right << std::setw(static_cast<int>(widths[i])) << cells[i];
    }
  }
  os << "\n";
}

std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::ostringstream os;
  for (const auto& row : rows) pad_row(os, row, widths);
  return os.str();
}

}  // namespace

std::string render_report_table(const KpiReport& report) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Transport mean", "Duration [h]", "Distance [km]", "CO2 [g]", "Costs [EUR]"});
  for (const auto& row : report.by_mean) {
    rows.push_back({row.mean_name, fixed(row.duration_h), fixed(row.distance_km),
                    fixed(row.co2_g), fixed(row.cost_eur)});
  }
  rows.push_back({"TOTAL", fixed(report.duration_h), fixed(report.distance_km),
                  fixed(report.co2_g), fixed(report.cost_eur)});
  std::ostringstream os;
  os << "criterion: " << report.criterion << "   products: " << report.k_products
     << "   seed: " << report.seed << "\n";
  os << table(rows);
  return os.str();
}

std::string render_report_records(const KpiReport& report) {
  nlohmann::json doc;
  doc["schema"] = "indsys-report-1";
  doc["criterion"] = report.criterion;
  doc["k_products"] = report.k_products;
  doc["seed"] = report.seed;
  doc["totals"] = {{"duration_h", report.duration_h},
                   {"distance_km", report.distance_km},
                   {"co2_g", report.co2_g},
                   {"cost_eur", report.cost_eur},
                   // Historical label for the same number.
                   {"cost_eur_per_km", report.cost_eur}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.by_mean) {
    rows.push_back({{"mean", row.mean_id},
                    {"name", row.mean_name},
                    {"duration_h", row.duration_h},
                    {"distance_km", row.distance_km},
                    {"co2_g", row.co2_g},
                    {"cost_eur", row.cost_eur}});
  }
  doc["by_mean"] = rows;
  return doc.dump(2) + "\n";
}

KpiReport parse_report_records(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  KpiReport r;
  r.criterion = doc.value("criterion", "");
  r.k_products = doc.value("k_products", 0);
  r.seed = doc.value("seed", std::uint64_t{0});
  r.duration_h = doc["totals"]["duration_h"].get<double>();
  r.distance_km = doc["totals"]["distance_km"].get<double>();
  r.co2_g = doc["totals"]["co2_g"].get<double>();
  r.cost_eur = doc["totals"]["cost_eur"].get<double>();
  for (const auto& j : doc["by_mean"]) {
    KpiRow row;
    row.mean_id = j.at("mean").get<std::string>();
    row.mean_name = j.value("name", row.mean_id);
    row.duration_h = j.at("duration_h").get<double>();
    row.distance_km = j.at("distance_km").get<double>();
    row.co2_g = j.at("co2_g").get<double>();
    row.cost_eur = j.at("cost_eur").get<double>();
    r.by_mean.push_back(row);
  }
  return r;
}

std::string render_comparison_table(const std::vector<KpiReport>& reports) {
  std::ostringstream os;

  std::vector<std::vector<std::string>> summary;
  summary.push_back(
      {"run", "Duration [h]", "Distance [km]", "CO2 [g]", "Costs [EUR]"});
  for (const auto& r : reports) {
    summary.push_back({r.criterion + " optimization", fixed(r.duration_h), fixed(r.distance_km),
                       fixed(r.co2_g), fixed(r.cost_eur)});
  }
  os << table(summary) << "\n";

  // All mean rows that appear anywhere, in display order.
  std::vector<std::pair<Id, std::string>> means;
  for (const auto& r : reports) {
    for (const auto& row : r.by_mean) {
      if (std::find_if(means.begin(), means.end(), [&](const auto& m) {
            return m.first == row.mean_id;
          }) == means.end()) {
        means.push_back({row.mean_id, row.mean_name});
      }
    }
  }
  std::sort(means.begin(), means.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });

  struct Metric {
    const char* title;
    double KpiRow::* field;
  };
  const Metric metrics[4] = {{"Duration [h]", &KpiRow::duration_h},
                             {"Distance [km]", &KpiRow::distance_km},
                             {"CO2 emissions [g]", &KpiRow::co2_g},
                             {"Transportation costs [EUR]", &KpiRow::cost_eur}};
  for (const auto& metric : metrics) {
    os << metric.title << "\n";
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"Transport mean"};
    for (const auto& r : reports) header.push_back(r.criterion + " opt.");
    rows.push_back(header);
    for (const auto& [id, name] : means) {
      std::vector<std::string> row{name};
      for (const auto& r : reports) {
        double v = 0;
        for (const auto& mr : r.by_mean) {
          if (mr.mean_id == id) v = mr.*(metric.field);
        }
        row.push_back(fixed(v));
      }
      rows.push_back(row);
    }
    os << table(rows) << "\n";
  }
  return os.str();
}

}  // namespace indsys
