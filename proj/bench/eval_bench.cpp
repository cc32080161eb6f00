// Compares the serial reference population evaluation against the OpenMP
// path: identical results required, wall time reported per worker count.
#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "indsys/phase1.hpp"
#include "indsys/synthetic.hpp"

using namespace indsys;
using Clock = std::chrono::steady_clock;

namespace {

std::vector<Candidate> make_population(const Dataset& dataset, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> identity(dataset.n_parts());
  for (int i = 0; i < dataset.n_parts(); ++i) identity[i] = i;
  std::vector<Candidate> pop(n);
  for (auto& c : pop) {
    c.priority = identity;
    rng.shuffle(c.priority);
  }
  return pop;
}

bool same_results(const std::vector<Candidate>& a, const std::vector<Candidate>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].sr != b[i].sr || a[i].dist != b[i].dist ||
        a[i].assignment.per_part != b[i].assignment.per_part) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int pop_size = argc > 1 ? std::atoi(argv[1]) : 2000;
  const std::uint64_t seed = 99;

  std::printf("generating benchmark world...\n");
  const Dataset dataset = gen_synthetic(SyntheticProfile{}, seed);
  const TransportIndex index(dataset);
  const std::vector<Candidate> pop = make_population(dataset, pop_size, seed);

  EaConfig cfg;
  cfg.seed = seed;

  cfg.threads = 1;
  std::vector<Candidate> serial = pop;
  const auto t0 = Clock::now();
  evaluate_candidates(serial, dataset, index, cfg, 0);
  const double serial_s = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("%-10s %8.3f s  %9.0f cand/s  (reference)\n", "serial", serial_s,
              pop_size / serial_s);

  int max_threads = 2;
#ifdef _OPENMP
  max_threads = omp_get_max_threads();
#endif
  for (int threads = 2; threads <= max_threads; threads *= 2) {
    std::vector<Candidate> parallel = pop;
    cfg.threads = threads;
    const auto t1 = Clock::now();
    evaluate_candidates(parallel, dataset, index, cfg, 0);
    const double par_s = std::chrono::duration<double>(Clock::now() - t1).count();
    const bool ok = same_results(serial, parallel);
    std::printf("%d threads  %8.3f s  %9.0f cand/s  speedup %.2fx  results %s\n", threads, par_s,
                pop_size / par_s, serial_s / par_s, ok ? "identical" : "DIVERGED");
    if (!ok) return 1;
  }
  return 0;
}
