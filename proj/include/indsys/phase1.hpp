#ifndef INDSYS_PHASE1_HPP
#define INDSYS_PHASE1_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "indsys/model.hpp"
#include "indsys/rng.hpp"
#include "indsys/transport_index.hpp"

namespace indsys {

// Priority-list candidate: the permutation is the genotype, the decoded
// assignment and its two fitness measures are cached on evaluation.
struct Candidate {
  std::vector<int> priority;  // permutation of part indices
  double sr = 0.0;            // satisfaction ratio, placed / total
  double dist = 0.0;          // upper-bound distance, defined iff sr == 1
  ProductionAssignment assignment;
  int first_blocked_part = -1;  // part that stopped the decode, -1 when none

  bool complete() const { return sr == 1.0; }
};

struct EaConfig {
  int population_size = 500;
  int generations = 200;
  int tournament_size = 3;
  double crossover_rate = 0.8;
  double mutation_rate = 0.1;
  int elite_return_count = 5;
  std::uint64_t seed = 1;
  Sourcing mode = Sourcing::kSingle;
  int fal_count = 1;               // parallel final-assembly units, single mode
  bool continuous_shares = false;  // double-sourcing split: grid by default
  int threads = 1;                 // 1 = serial reference evaluation

  void validate() const;
};

struct GenerationStats {
  int generation = 0;
  double best_sr = 0;
  double mean_sr = 0;
  double best_dist = 0;
  bool best_dist_defined = false;
};

struct Phase1Result {
  std::vector<Candidate> best;  // elite_return_count best of the final population
  std::vector<GenerationStats> trace;
  std::string diagnostic;  // non-empty when no complete assignment was found
};

// Maps a priority list to a production assignment, inserting parts in list
// order. For every part the feasible units are those that keep Constraints
// 1-6 satisfied and stay transport-reachable from/to already placed BOM
// neighbours; the pick is uniform, preferring units not used yet. Decoding
// stops at the first part with no feasible choice; the (possibly partial)
// result is always constraint-valid.
Candidate decode(const std::vector<int>& priority, const Dataset& dataset,
                 const TransportIndex& index, Sourcing mode, int fal_count,
                 bool continuous_shares, Rng& rng);

// Sum over all BOM-implied (producer, consumer) unit pairs of the pairwise
// upper-bound distance. Infinity when some pair is unreachable.
double dist_upper_bound(const ProductionAssignment& assignment, const Dataset& dataset,
                        const TransportIndex& index);

// Head of parent1 up to k, then the missing parts in parent2's order.
std::vector<int> crossover_1pt(const std::vector<int>& parent1, const std::vector<int>& parent2,
                               int k);
std::vector<int> crossover_1pt(const std::vector<int>& parent1, const std::vector<int>& parent2,
                               Rng& rng);

// Moves the element at `from` so it ends up at index `to` (!= from).
std::vector<int> mutate_reposition(const std::vector<int>& parent, int from, int to);
std::vector<int> mutate_reposition(const std::vector<int>& parent, Rng& rng);

// Selection rule: higher satisfaction ratio wins; on equal ratio the smaller
// distance wins, with undefined distances (sr < 1) comparing as equal.
bool is_better(const Candidate& a, const Candidate& b);

// Keeps population size constant: the union is ranked (sr desc, dist asc,
// interpop before pop on ties), duplicate priority lists collapse to their
// best-ranked copy, and only if unique lists run out are duplicates readmitted.
std::vector<Candidate> merge_populations(const std::vector<Candidate>& pop,
                                         const std::vector<Candidate>& interpop);

// Evaluates candidates[i] with an independent generator derived from
// (seed, generation, i); with threads != 1 the loop runs under OpenMP and is
// guaranteed to produce results identical to the serial reference.
void evaluate_candidates(std::vector<Candidate>& candidates, const Dataset& dataset,
                         const TransportIndex& index, const EaConfig& config,
                         std::uint64_t generation);

Phase1Result run_phase1(const Dataset& dataset, const TransportIndex& index,
                        const EaConfig& config);

// Trace/solution serialization used by the command-line driver.
std::string trace_to_csv(const std::vector<GenerationStats>& trace);
std::string serialize_assignment(const ProductionAssignment& assignment, const Dataset& dataset,
                                 double sr, double dist);
ProductionAssignment parse_assignment(const std::string& text, const Dataset& dataset);

}  // namespace indsys

#endif  // INDSYS_PHASE1_HPP
