// Benchmark: the OpenMP-parallel production kernels against the serial
// reference implementations (which also use the slower pair-walking distance
// route), with an equality check on every comparison so a speedup never
// hides a divergence. On a single-core host the ratio shows the route
// difference alone; the thread count is printed so that is visible.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <vector>

#include "pcons/consensus.hpp"
#include "pcons/distance.hpp"
#include "pcons/experiments.hpp"
#include "pcons/metaclustering.hpp"
#include "pcons/universe.hpp"

using namespace pcons;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    f();
    double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (dt < best) best = dt;
  }
  return best;
}

int g_mismatches = 0;

void report(const char* name, double reference, double kernel, bool equal) {
  std::printf("%-36s reference %8.3f s   kernel %8.3f s   x%.1f   %s\n", name, reference, kernel,
              reference / kernel, equal ? "results equal" : "RESULTS DIFFER");
  if (!equal) ++g_mismatches;
}

void bench_consensus(int n) {
  auto u = enumerate_universe(n, Constraint::full());
  ConsensusResult a, b;
  double ts = best_of(3, [&] { a = consensus_serial(u.members, u.members, DistanceSpec::uncd()); });
  double tp = best_of(3, [&] { b = consensus(u.members, u.members, DistanceSpec::uncd()); });
  bool equal = a.minimizer_indices == b.minimizer_indices && a.totals == b.totals &&
               a.min_scaled_total == b.min_scaled_total;
  char name[64];
  std::snprintf(name, sizeof name, "consensus scan, n=%d (%zu^2)", n, u.size());
  report(name, ts, tp, equal);
}

void bench_matrix(int n) {
  auto u = enumerate_universe(n, Constraint::full());
  DistanceMatrix a, b;
  double ts = best_of(3, [&] { a = build_distance_matrix_serial(u.members, DistanceSpec::uncd()); });
  double tp = best_of(3, [&] { b = build_distance_matrix(u.members, DistanceSpec::uncd()); });
  bool equal = a.size() == b.size();
  for (size_t i = 0; equal && i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j)
      if (a.at(i, j) != b.at(i, j)) {
        equal = false;
        break;
      }
  char name[64];
  std::snprintf(name, sizeof name, "distance matrix, n=%d (%zu^2)", n, u.size());
  report(name, ts, tp, equal);
}

void bench_experiment_row() {
  ExperimentSpec spec;
  spec.table = TableId::T1;
  spec.n = 7;
  spec.fraction = 0.05;
  spec.trials = 200;

  const int threads = omp_get_max_threads();
  std::vector<ExperimentRow> a, b;
  omp_set_num_threads(1);
  double ts = best_of(2, [&] { a = run_experiment(spec); });
  omp_set_num_threads(threads);
  double tp = best_of(2, [&] { b = run_experiment(spec); });
  bool equal = a.size() == b.size() &&
               a[0].hits_total_separation == b[0].hits_total_separation &&
               a[0].hits_unique == b[0].hits_unique;
  report("experiment row, T1 n=7 s=44 x200", ts, tp, equal);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  bench_consensus(6);
  bench_consensus(7);
  bench_matrix(6);
  bench_matrix(7);
  bench_experiment_row();
  return g_mismatches == 0 ? 0 : 2;
}
