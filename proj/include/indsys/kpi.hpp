#ifndef INDSYS_KPI_HPP
#define INDSYS_KPI_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "indsys/drago.hpp"

namespace indsys {

struct KpiRow {
  Id mean_id;
  std::string mean_name;
  double duration_h = 0;
  double distance_km = 0;
  double co2_g = 0;
  double cost_eur = 0;
};

// Objective totals for a completed plan plus their per-transport-mean
// partition. Each total equals the sum of its breakdown column.
struct KpiReport {
  double duration_h = 0;
  double distance_km = 0;
  double co2_g = 0;
  double cost_eur = 0;  // rate [EUR/km] times kilometres ridden
  std::vector<KpiRow> by_mean;  // sorted by mean name, then id

  std::string criterion;
  int k_products = 0;
  std::uint64_t seed = 0;
};

KpiReport compute_kpis(const OptimalPath& path, const TransportNetwork& network,
                       const DemandSchedule& schedule, const Dataset& dataset);

std::string render_report_table(const KpiReport& report);
std::string render_report_records(const KpiReport& report);  // machine-readable
KpiReport parse_report_records(const std::string& text);

// Side-by-side rendering of several runs: one summary block (run rows, KPI
// columns) and one block per KPI with per-mean rows and one column per run.
std::string render_comparison_table(const std::vector<KpiReport>& reports);

}  // namespace indsys

#endif  // INDSYS_KPI_HPP
