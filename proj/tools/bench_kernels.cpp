// Times the parallel kernels against their serial reference paths: the
// exhaustive per-path oracle and the admissibility audit. Both fan
// independent conic programs across threads, so the comparison shows the
// thread scaling of the solve layer on one machine.

#include <chrono>
#include <cstdio>

#include "gcs/graph.hpp"
#include "gcs/heuristics.hpp"
#include "gcs/oracle.hpp"
#include "gcs/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using h_clock = std::chrono::steady_clock;

namespace {

double seconds_since(h_clock::time_point t0) {
  return std::chrono::duration<double>(h_clock::now() - t0).count();
}

gcs::GcsGraph dense_random_graph(std::uint64_t seed, int n) {
  gcs::SplitMix64 rng(seed);
  std::vector<gcs::ConvexSet> sets;
  for (int v = 0; v < n; ++v) {
    Eigen::VectorXd lo(2), hi(2);
    lo << 10.0 * rng.uniform(), 10.0 * rng.uniform();
    hi << lo[0] + 0.5 + rng.uniform(), lo[1] + 0.5 + rng.uniform();
    sets.push_back(gcs::ConvexSet::make_box(lo, hi));
  }
  std::vector<gcs::Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && (v == u + 1 || rng.uniform() < 0.45))
        edges.emplace_back(u, v);
  return gcs::GcsGraph(2, std::move(sets), std::move(edges), 0, n - 1);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  const gcs::GcsGraph graph = dense_random_graph(12345, 9);
  const int paths = static_cast<int>(
      gcs::enumerate_paths(graph, graph.origin(), graph.destination()).size());
  std::printf("oracle instance: %d vertices, %d edges, %d simple paths\n",
              graph.num_vertices(), graph.num_edges(), paths);

  std::printf("%-28s %10s %10s %8s\n", "kernel", "serial(s)", "parallel(s)",
              "speedup");

  {
    const auto t0 = h_clock::now();
    const auto serial =
        gcs::exact_opt(graph, graph.origin(), graph.destination(),
                       gcs::kDefaultPathCap, gcs::Execution::kSerial);
    const double ts = seconds_since(t0);
    const auto t1 = h_clock::now();
    const auto parallel =
        gcs::exact_opt(graph, graph.origin(), graph.destination(),
                       gcs::kDefaultPathCap, gcs::Execution::kParallel);
    const double tp = seconds_since(t1);
    std::printf("%-28s %10.3f %10.3f %8.2fx\n", "exact_opt", ts, tp, ts / tp);
    if (serial.c_opt != parallel.c_opt) {
      std::printf("MISMATCH: serial %.12f vs parallel %.12f\n", serial.c_opt,
                  parallel.c_opt);
      return 1;
    }
  }

  {
    const gcs::HeuristicTable h = gcs::h1_table(graph);
    const auto t0 = h_clock::now();
    const auto serial = gcs::check_admissible(graph, h, gcs::kDefaultPathCap,
                                              gcs::Execution::kSerial);
    const double ts = seconds_since(t0);
    const auto t1 = h_clock::now();
    const auto parallel = gcs::check_admissible(
        graph, h, gcs::kDefaultPathCap, gcs::Execution::kParallel);
    const double tp = seconds_since(t1);
    std::printf("%-28s %10.3f %10.3f %8.2fx\n", "check_admissible", ts, tp,
                ts / tp);
    if (serial.violations.size() != parallel.violations.size()) {
      std::printf("MISMATCH in admissibility reports\n");
      return 1;
    }
  }

  return 0;
}
