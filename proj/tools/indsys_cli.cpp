#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "indsys/dataset_io.hpp"
#include "indsys/drago.hpp"
#include "indsys/kpi.hpp"
#include "indsys/phase1.hpp"
#include "indsys/phase2.hpp"
#include "indsys/synthetic.hpp"

namespace {

namespace fs = std::filesystem;
using namespace indsys;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitUsage = 4;

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct CommonOpts {
  std::string dataset_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
};

struct Phase1Opts {
  std::string sourcing = "single";
  int pop_size = 500;
  int generations = 200;
  int tournament = 3;
  double pc = 0.8;
  double pm = 0.1;
  int fal_count = 1;
  int elites = 5;
  int threads = 1;
  bool continuous_shares = false;
};

struct Phase2Opts {
  int products = 40;
  double takt_h = 168.0;
  std::string criterion = "co2";
  std::string weights;
  std::string packer = "grasp";
  bool route_exact = false;
};

EaConfig ea_config(const Phase1Opts& p1, std::uint64_t seed) {
  EaConfig cfg;
  cfg.population_size = p1.pop_size;
  cfg.generations = p1.generations;
  cfg.tournament_size = p1.tournament;
  cfg.crossover_rate = p1.pc;
  cfg.mutation_rate = p1.pm;
  cfg.elite_return_count = p1.elites;
  cfg.seed = seed;
  cfg.mode = sourcing_from_string(p1.sourcing);
  cfg.fal_count = p1.fal_count;
  cfg.continuous_shares = p1.continuous_shares;
  cfg.threads = p1.threads;
  return cfg;
}

Criterion parse_criterion(const std::string& name, const std::string& weights) {
  Criterion c;
  c.kind = criterion_from_string(name);
  if (c.kind == CriterionKind::kTradeoff) {
    if (weights.empty()) throw Error("tradeoff needs --weights, e.g. co2=0.5,duration=0.5");
    std::stringstream ss(weights);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error("weight format is kind=value");
      c.weights[criterion_from_string(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
    }
  }
  c.validate();
  return c;
}

nlohmann::json config_json(const CommonOpts& common, const Phase1Opts* p1,
                           const Phase2Opts* p2) {
  nlohmann::json j;
  j["dataset"] = common.dataset_path;
  j["seed"] = common.seed;
  if (p1 != nullptr) {
    j["phase1"] = {{"sourcing", p1->sourcing},
                   {"pop_size", p1->pop_size},
                   {"generations", p1->generations},
                   {"tournament", p1->tournament},
                   {"pc", p1->pc},
                   {"pm", p1->pm},
                   {"fal_count", p1->fal_count},
                   {"elites", p1->elites},
                   {"continuous_shares", p1->continuous_shares}};
  }
  if (p2 != nullptr) {
    j["phase2"] = {{"products", p2->products},
                   {"takt_h", p2->takt_h},
                   {"criterion", p2->criterion},
                   {"weights", p2->weights},
                   {"packer", p2->packer},
                   {"route_exact", p2->route_exact}};
  }
  return j;
}

int run_phase1_cmd(const CommonOpts& common, const Phase1Opts& p1) {
  const Dataset dataset = load_dataset_file(common.dataset_path);
  const ConsistencyReport report = validate_consistency(dataset);
  if (!report.ok()) {
    std::cerr << report.to_text();
    return kExitValidation;
  }
  const TransportIndex index(dataset);
  const EaConfig cfg = ea_config(p1, common.seed);
  const Phase1Result result = run_phase1(dataset, index, cfg);

  const fs::path dir(common.out_dir);
  write_file(dir / "config.json", config_json(common, &p1, nullptr).dump(2) + "\n");
  write_file(dir / "trace.csv", trace_to_csv(result.trace));
  const Candidate& best = result.best.front();
  write_file(dir / "solution.json",
             serialize_assignment(best.assignment, dataset, best.sr, best.dist));

  // Value-added lower bounds are informational only.
  const ValueAddedRollup rollup = aggregate_value_added(best.assignment, dataset);
  for (std::size_t c = 0; c < dataset.countries.size(); ++c) {
    if (dataset.countries[c].va_min > 0 && rollup.per_country[c] < dataset.countries[c].va_min) {
      std::cerr << "warning: country " << dataset.countries[c].id
                << " stays under its va_min target\n";
    }
  }

  std::cout << "phase1: best sr " << best.sr;
  if (best.complete()) std::cout << ", dist " << best.dist << " km";
  std::cout << " (" << result.trace.size() - 1 << " generations)\n";
  if (!result.diagnostic.empty()) {
    std::cerr << "phase1: " << result.diagnostic << "\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int run_phase2_cmd(const CommonOpts& common, const Phase2Opts& p2,
                   const std::string& solution_path) {
  const Dataset dataset = load_dataset_file(common.dataset_path);
  const ProductionAssignment assignment =
      parse_assignment(read_file(solution_path), dataset);
  const TransportIndex index(dataset);

  const TransportNetwork network = build_network(assignment, dataset, index);
  const DemandSchedule schedule =
      propagate_demand(network, assignment, dataset, p2.products, p2.takt_h);
  const TransportNetwork pruned = prune_infeasible(network, dataset);
  const TransportNetwork batched = apply_batching(pruned, schedule, dataset);

  const fs::path dir(common.out_dir);
  write_file(dir / "network.json", serialize_network(batched, schedule, dataset));

  const PackerKind packer =
      p2.packer == "laff" ? PackerKind::kLaff : PackerKind::kGrasp;
  if (p2.packer != "laff" && p2.packer != "grasp") {
    throw Error("unknown packer '" + p2.packer + "'");
  }

  std::vector<std::string> runs;
  if (p2.criterion == "all") {
    runs = {"co2", "duration", "distance", "cost"};
  } else {
    runs = {p2.criterion};
  }
  std::vector<KpiReport> reports;
  for (const std::string& name : runs) {
    const Criterion criterion = parse_criterion(name, p2.weights);
    OptimalPath path = drago_optimize(batched, schedule, dataset, criterion, p2.route_exact);
    resolve_mixed_batches(path, batched, schedule, dataset, packer);
    for (const auto& w : path.warnings) std::cerr << "warning: " << w << "\n";

    KpiReport report = compute_kpis(path, batched, schedule, dataset);
    report.criterion = name;
    report.seed = common.seed;
    reports.push_back(report);

    write_file(dir / ("plan_" + name + ".json"),
               serialize_plan(path, batched, dataset, criterion));
    write_file(dir / ("report_" + name + ".json"), render_report_records(report));
    write_file(dir / ("report_" + name + ".txt"), render_report_table(report));
    std::cout << render_report_table(report);
  }
  if (reports.size() > 1) {
    const std::string cmp = render_comparison_table(reports);
    write_file(dir / "comparison.txt", cmp);
    std::cout << cmp;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase manufacturing-network and transport optimizer"};
  app.require_subcommand(1);

  CommonOpts common;
  Phase1Opts p1;
  Phase2Opts p2;
  std::string solution_path;
  std::string report_format = "table";
  std::vector<std::string> report_inputs;

  SyntheticProfile profile;
  std::string gen_out = "dataset.json";
  bool no_double_feasible = false;

  auto* gen = app.add_subcommand("gen", "Synthesize a dataset");
  gen->add_option("--out", gen_out, "Output dataset file");
  gen->add_option("--seed", common.seed, "Generator seed");
  gen->add_option("--parts", profile.parts);
  gen->add_option("--countries", profile.countries);
  gen->add_option("--suppliers", profile.suppliers);
  gen->add_option("--sites", profile.sites);
  gen->add_option("--units", profile.units);
  gen->add_option("--warehouses", profile.warehouses);
  gen->add_option("--means", profile.means);
  gen->add_flag("--route-diversity", profile.route_diversity,
                "Add redundant routes between producers and consumers");
  gen->add_flag("--tight-unit-bounds", profile.tight_unit_bounds,
                "Cap units at roughly one part (small benchmark worlds)");
  gen->add_flag("--no-double-feasible", no_double_feasible,
                "Do not guarantee two producer countries per part");

  auto* validate = app.add_subcommand("validate", "Check a dataset for consistency");
  validate->add_option("--dataset", common.dataset_path, "Dataset file")->required();
  std::string validate_out;
  validate->add_option("--out", validate_out, "Also write the report to this file");

  auto* phase1 = app.add_subcommand("phase1", "Evolve a production assignment");
  auto* phase2 = app.add_subcommand("phase2", "Build the transport network and pick links");
  auto* optimize = app.add_subcommand("optimize", "Full pipeline: phase1 then phase2");
  for (CLI::App* cmd : {phase1, phase2, optimize}) {
    cmd->add_option("--dataset", common.dataset_path, "Dataset file")->required();
    cmd->add_option("--out", common.out_dir, "Output directory");
    cmd->add_option("--seed", common.seed, "Run seed");
  }
  for (CLI::App* cmd : {phase1, optimize}) {
    cmd->add_option("--sourcing", p1.sourcing, "single or double");
    cmd->add_option("--pop-size", p1.pop_size);
    cmd->add_option("--generations", p1.generations);
    cmd->add_option("--tournament", p1.tournament);
    cmd->add_option("--pc", p1.pc, "Crossover rate");
    cmd->add_option("--pm", p1.pm, "Mutation rate");
    cmd->add_option("--fal-count", p1.fal_count, "Parallel final-assembly units (single mode)");
    cmd->add_option("--elites", p1.elites, "Solutions returned from the final population");
    cmd->add_option("--threads", p1.threads, "Evaluation workers (1 = serial)");
    cmd->add_flag("--continuous-shares", p1.continuous_shares,
                  "Draw double-sourcing splits continuously instead of the 5% grid");
  }
  for (CLI::App* cmd : {phase2, optimize}) {
    cmd->add_option("--products", p2.products, "Number of final products (K)");
    cmd->add_option("--takt-h", p2.takt_h, "Takt in hours between final completions");
    cmd->add_option("--criterion", p2.criterion,
                    "co2|duration|distance|cost|tradeoff|all");
    cmd->add_option("--weights", p2.weights, "Tradeoff weights, e.g. co2=0.5,duration=0.5");
    cmd->add_option("--packer", p2.packer, "grasp|laff mixed-batching backend");
    cmd->add_flag("--route-exact", p2.route_exact,
                  "Score whole routes instead of one incoming edge at a time");
  }
  phase2->add_option("--solution", solution_path, "Phase 1 solution file")->required();

  auto* report = app.add_subcommand("report", "Render stored reports");
  report->add_option("--in", report_inputs, "Report records file(s)")->required();
  report->add_option("--format", report_format, "table|records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      profile.double_sourcing_feasible = !no_double_feasible;
      const Dataset dataset = gen_synthetic(profile, common.seed);
      write_file(gen_out, serialize_dataset(dataset));
      std::cout << "wrote " << gen_out << " (" << dataset.parts.size() << " parts, "
                << dataset.units.size() << " units, " << dataset.links.size() << " links)\n";
      return kExitOk;
    }
    if (validate->parsed()) {
      const Dataset dataset = load_dataset_file(common.dataset_path);
      const ConsistencyReport rep = validate_consistency(dataset);
      std::cout << rep.to_text();
      if (!validate_out.empty()) write_file(validate_out, rep.to_text());
      return rep.ok() ? kExitOk : kExitValidation;
    }
    if (phase1->parsed()) {
      return run_phase1_cmd(common, p1);
    }
    if (phase2->parsed()) {
      return run_phase2_cmd(common, p2, solution_path);
    }
    if (optimize->parsed()) {
      const int rc = run_phase1_cmd(common, p1);
      if (rc != kExitOk) return rc;
      const fs::path dir(common.out_dir);
      write_file(dir / "config.json", config_json(common, &p1, &p2).dump(2) + "\n");
      return run_phase2_cmd(common, p2, (dir / "solution.json").string());
    }
    if (report->parsed()) {
      std::vector<KpiReport> reports;
      for (const auto& path : report_inputs) {
        reports.push_back(parse_report_records(read_file(path)));
      }
      if (report_format == "records") {
        for (const auto& r : reports) std::cout << render_report_records(r);
      } else if (report_format == "table") {
        if (reports.size() == 1) {
          std::cout << render_report_table(reports.front());
        } else {
          std::cout << render_comparison_table(reports);
        }
      } else {
        throw Error("unknown format '" + report_format + "'");
      }
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ReferenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConnectivityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ProfileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
