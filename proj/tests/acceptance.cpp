// Acceptance suite: one pass/fail line per criterion. Exits nonzero when
// any criterion fails. Criteria 1-8 run in process; criterion 9 drives the
// command-line binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "gcs/astar_gcs.hpp"
#include "gcs/errors.hpp"
#include "gcs/heuristics.hpp"
#include "gcs/instances.hpp"
#include "gcs/oracle.hpp"
#include "gcs/rng.hpp"
#include "test_helpers.hpp"

using namespace gcs;
using gcs::testing::random_small_graph;
using gcs::testing::relaxation_residuals;
using gcs::testing::sample_point;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  (%s)\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool below(double value, double bound, double scale = 1.0) {
  return value <= bound + 1e-6 * std::max(1.0, scale);
}

// 1. Every bound reported by the driver on random small instances stays
//    below the exhaustive optimum; every feasible cost stays above it.
void criterion_oracle_bound_validity() {
  const auto t0 = Clock::now();
  int runs = 0;
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 100 && ok; ++seed) {
    const GcsGraph g = random_small_graph(seed);
    const double c_opt = exact_opt(g, g.origin(), g.destination()).c_opt;
    const HeuristicTable h1 = h1_table(g);
    const HeuristicTable h2 = h2_expand_freeze(g);
    for (double w : {0.0, 0.5, 1.0}) {
      const HeuristicTable h = blend(h1, h2, w);
      for (int mode = 0; mode < 2 && ok; ++mode) {
        const VertexSet s_init = mode == 0 ? VertexSet{g.origin()}
                                           : sinit_from_astar(g, h);
        RunOptions opts;
        opts.seed = seed;
        const RunResult res = run_astar_gcs(g, h, s_init, opts);
        ++runs;
        for (const auto& rec : res.trace) {
          if (!below(rec.c_lb, c_opt, c_opt)) {
            ok = false;
            detail = "bound above optimum on seed " + std::to_string(seed);
          }
        }
        if (!below(res.c_lb, c_opt, c_opt)) ok = false;
        if (res.best_feasible &&
            res.best_feasible->cost < c_opt - 1e-6) {
          ok = false;
          detail = "feasible below optimum on seed " + std::to_string(seed);
        }
      }
    }
  }
  std::ostringstream ss;
  ss << runs << " runs over 100 instances, " << elapsed_s(t0) << " s";
  if (!detail.empty()) ss << "; " << detail;
  report(1, ok, ss.str());
}

// 2. Frontier and two-terminal relaxations lower-bound the optimum on
//    random cut-sets.
void criterion_relaxation_bounds() {
  const auto t0 = Clock::now();
  bool ok = true;
  int checked = 0;
  std::string detail;
  SplitMix64 rng(20240921);
  for (std::uint64_t seed = 1; checked < 200 && ok; ++seed) {
    const GcsGraph g = random_small_graph(seed);
    const double c_opt = exact_opt(g, g.origin(), g.destination()).c_opt;
    const HeuristicTable h0 = HeuristicTable::zeros(g.num_vertices());
    for (int trial = 0; trial < 3 && checked < 200; ++trial) {
      VertexSet S{g.origin()};
      for (int v = 0; v < g.num_vertices(); ++v)
        if (v != g.destination() && v != g.origin() && rng.bounded(2))
          S.insert(v);
      const VertexSet frontier = neighborhood(g, S);
      if (frontier.empty()) continue;
      ++checked;

      const RelaxedSolution full = solve_sppstar(g, S, frontier, h0);
      if (!full.optimal() || !below(full.objective, c_opt, c_opt)) {
        ok = false;
        detail = "frontier bound failed on seed " + std::to_string(seed);
        break;
      }
      if (frontier.count(g.destination())) {
        const RelaxedSolution dest =
            solve_sppstar(g, S, {g.destination()}, h0);
        VertexSet rest = frontier;
        rest.erase(g.destination());
        double bound = dest.optimal() ? dest.objective : kInf;
        if (!rest.empty()) {
          const RelaxedSolution side = solve_sppstar(g, S, rest, h0);
          bound = std::min(bound,
                           side.optimal() ? side.objective : kInf);
        }
        if (!below(bound, c_opt, c_opt)) {
          ok = false;
          detail = "two-terminal bound failed on seed " +
                   std::to_string(seed);
          break;
        }
      }
    }
  }
  std::ostringstream ss;
  ss << checked << " random cut-sets, " << elapsed_s(t0) << " s";
  if (!detail.empty()) ss << "; " << detail;
  report(2, ok, ss.str());
}

// 3. On singleton graphs with a consistent heuristic the driver recovers
//    the classic A* optimum from the origin.
void criterion_singleton_degeneration() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 50 && ok; ++seed) {
    const GcsGraph g = random_small_graph(seed, /*singletons_only=*/true);
    const HeuristicTable h = h1_table(g);
    const double astar_cost =
        classic_astar(g, centroid_points(g), h).cost;
    const RunResult res =
        run_astar_gcs(g, h, VertexSet{g.origin()}, RunOptions{});
    if (std::fabs(res.c_lb - astar_cost) > 1e-6) {
      ok = false;
      detail = "bound mismatch on seed " + std::to_string(seed);
    }
    if (res.growth_iterations > g.num_vertices() - 1) {
      ok = false;
      detail = "iteration overrun on seed " + std::to_string(seed);
    }
  }
  report(3, ok,
         "50 singleton graphs, " + std::to_string(elapsed_s(t0)) + " s" +
             (detail.empty() ? "" : "; " + detail));
}

// 4. Termination bookkeeping: iteration counts within |V|-1 and strictly
//    growing cut-sets, across both initialization modes.
void criterion_termination() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  int runs = 0;
  for (std::uint64_t seed = 1; seed <= 60 && ok; ++seed) {
    const GcsGraph g = random_small_graph(seed);
    const HeuristicTable h = h1_table(g);
    for (int mode = 0; mode < 2 && ok; ++mode) {
      const VertexSet s_init =
          mode == 0 ? VertexSet{g.origin()} : sinit_from_astar(g, h);
      const RunResult res = run_astar_gcs(g, h, s_init, RunOptions{});
      ++runs;
      if (res.growth_iterations > g.num_vertices() - 1) {
        ok = false;
        detail = "too many iterations on seed " + std::to_string(seed);
      }
      for (size_t i = 1; i < res.trace.size(); ++i)
        if (res.trace[i].cut_size <= res.trace[i - 1].cut_size) {
          ok = false;
          detail = "cut-set growth stalled on seed " + std::to_string(seed);
        }
    }
  }
  report(4, ok,
         std::to_string(runs) + " runs, " + std::to_string(elapsed_s(t0)) +
             " s" + (detail.empty() ? "" : "; " + detail));
}

// 5. Heuristic admissibility audits, including the collapse path.
void criterion_admissibility() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 25 && ok; ++seed) {
    const GcsGraph g = random_small_graph(seed);
    const HeuristicTable h1 = h1_table(g);
    if (!check_admissible(g, h1).ok()) {
      ok = false;
      detail = "h1 violation on seed " + std::to_string(seed);
      break;
    }
    for (int n_max : {3, 100}) {
      const HeuristicTable h2 = h2_expand_freeze(g, n_max);
      if (!check_admissible(g, h2).ok()) {
        ok = false;
        detail = "h2 violation on seed " + std::to_string(seed) +
                 " n_max " + std::to_string(n_max);
        break;
      }
      for (double w : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        if (!check_admissible(g, blend(h1, h2, w)).ok()) {
          ok = false;
          detail = "blend violation on seed " + std::to_string(seed);
          break;
        }
      }
      if (!ok) break;
    }
  }
  report(5, ok,
         "25 instances x {h1, h2(3), h2(100), blends}, " +
             std::to_string(elapsed_s(t0)) + " s" +
             (detail.empty() ? "" : "; " + detail));
}

// 6. Desk-scale reproduction on one generated 20x20 maze.
void criterion_maze_reproduction() {
  const auto t0 = Clock::now();
  const Instance maze = gen_maze(20, 20, 2024);
  const int full_cut = maze.graph.num_vertices() - 1;
  const HeuristicTable h1 = h1_table(maze.graph);
  const HeuristicTable h2 = h2_expand_freeze(maze.graph);
  const HeuristicTable h = blend(h1, h2, 1.0);

  SplitMix64 rng(555);
  std::vector<VertexId> origins;
  while (origins.size() < 20) {
    const int v = static_cast<int>(rng.bounded(maze.graph.num_vertices()));
    if (v == maze.graph.origin() || v == maze.graph.destination()) continue;
    if (std::find(origins.begin(), origins.end(), v) != origins.end())
      continue;
    origins.push_back(v);
  }

  int shrunk = 0;
  int first_faster = 0;
  bool gaps_close = true;
  std::vector<double> reductions;
  for (VertexId v : origins) {
    const Instance inst = rebase_origin(maze, v);
    RunOptions opts;
    opts.seed = 99;
    const VertexSet s_init = sinit_from_astar(inst.graph, h);

    RunOptions first_opts = opts;
    first_opts.max_iters = 1;
    const RunResult first =
        run_astar_gcs(inst.graph, h, s_init, first_opts);
    const RunResult full = run_astar_gcs(inst.graph, h, s_init, opts);
    const RunResult baseline = run_baseline(inst.graph, opts);

    const int cut = static_cast<int>(full.final_cut_set.size());
    if (cut < full_cut) ++shrunk;
    reductions.push_back(1.0 - static_cast<double>(cut) / full_cut);
    if (first.wall_millis < baseline.wall_millis) ++first_faster;

    const auto gap_full = full.gap_percent();
    const auto gap_base = baseline.gap_percent();
    if (!gap_full || !gap_base ||
        std::fabs(*gap_full - *gap_base) > 1.0)
      gaps_close = false;
  }
  std::sort(reductions.begin(), reductions.end());
  const double median_reduction =
      0.5 * (reductions[9] + reductions[10]);

  const bool ok_shrunk = shrunk >= 18;  // 90% of 20
  const bool ok_median = median_reduction >= 0.30;
  const bool ok_speed = 2 * first_faster >= 20;
  std::ostringstream ss;
  ss << "shrunk " << shrunk << "/20, median reduction "
     << static_cast<int>(100 * median_reduction) << "%, first-iteration "
     << "faster " << first_faster << "/20, gaps within 1pp "
     << (gaps_close ? "yes" : "no") << ", " << elapsed_s(t0) << " s";
  report(6, ok_shrunk && ok_median && ok_speed && gaps_close, ss.str());
}

// 7. Perspective membership over sampled interior and exterior points,
//    plus full residual audits of solved relaxations.
void criterion_perspective() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  SplitMix64 rng(777);

  Eigen::MatrixXd A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  Eigen::VectorXd b(4);
  b << 2, 0, 1, 0;
  const ConvexSet sets[] = {
      ConvexSet::make_point(gcs::testing::v2(1.5, -2.0)),
      ConvexSet::make_segment(gcs::testing::v2(0, 0),
                              gcs::testing::v2(3, 1)),
      ConvexSet::make_box(gcs::testing::v2(-1, -1),
                          gcs::testing::v2(2, 0.5)),
      ConvexSet::make_polytope(A, b, gcs::testing::v2(0, 0),
                               gcs::testing::v2(2, 1)),
  };
  for (const ConvexSet& set : sets) {
    for (int trial = 0; trial < 1000 && ok; ++trial) {
      const double lambda = 10.0 * rng.uniform();
      const Eigen::VectorXd x =
          sample_point(set, rng.uniform(), rng.uniform());
      if (!perspective_membership(set, lambda * x, lambda, 1e-7)) {
        ok = false;
        detail = "interior point rejected";
      }
      // exterior: push far outside the scaled bounding region
      Eigen::VectorXd far = lambda * x;
      far.array() += (lambda + 1.0) * 50.0;
      if (perspective_membership(set, far, lambda, 1e-7)) {
        ok = false;
        detail = "exterior point accepted";
      }
    }
  }

  for (std::uint64_t seed = 301; seed <= 310 && ok; ++seed) {
    const GcsGraph g = random_small_graph(seed);
    VertexSet S{g.origin()};
    const VertexSet frontier = neighborhood(g, S);
    const RelaxedSolution sol =
        solve_sppstar(g, S, frontier, h1_table(g));
    if (!sol.optimal()) continue;
    const std::string err = relaxation_residuals(g, sol, 1e-6);
    if (!err.empty()) {
      ok = false;
      detail = "residual check: " + err;
    }
  }
  report(7, ok,
         "4 kinds x 1000 samples each way + 10 residual audits, " +
             std::to_string(elapsed_s(t0)) + " s" +
             (detail.empty() ? "" : "; " + detail));
}

// 8. The two-step upper bound never beats the optimum and never loses to
//    the raw centroid path.
void criterion_two_step() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 40 && ok; ++seed) {
    const GcsGraph g = random_small_graph(seed);
    const double c_opt = exact_opt(g, g.origin(), g.destination()).c_opt;
    const HeuristicTable h = h1_table(g);
    const auto points = centroid_points(g);
    const AstarResult astar = classic_astar(g, points, h);
    double centroid_cost = 0.0;
    for (size_t i = 0; i + 1 < astar.path.size(); ++i)
      centroid_cost +=
          (points[astar.path[i]] - points[astar.path[i + 1]]).norm();
    const FeasibleSolution two = two_step_feasible(g, h);
    if (two.cost > centroid_cost + 1e-9) {
      ok = false;
      detail = "re-optimization worsened seed " + std::to_string(seed);
    }
    if (two.cost < c_opt - 1e-6) {
      ok = false;
      detail = "upper bound below optimum on seed " + std::to_string(seed);
    }
  }
  report(8, ok,
         "40 instances, " + std::to_string(elapsed_s(t0)) + " s" +
             (detail.empty() ? "" : "; " + detail));
}

// 9. Repeated bench sweeps with a fixed seed are byte-identical up to the
//    millis column.
void criterion_bench_determinism() {
  const auto t0 = Clock::now();
#ifndef GCS_CLI_PATH
  report(9, false, "CLI path not configured");
  return;
#else
  const fs::path dir =
      fs::temp_directory_path() /
      ("gcs_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string maze = (dir / "maze.json").string();
  const std::string cli = GCS_CLI_PATH;
  auto sh = [](const std::string& cmd) {
    return WEXITSTATUS(std::system((cmd + " > /dev/null 2>&1").c_str()));
  };
  bool ok =
      sh(cli + " generate --type maze --rows 4 --cols 4 --seed 77 -o " +
         maze) == 0;
  const std::string bench_cmd = cli + " bench -i " + maze +
                                " --weights 0,1 --origins 3 --seed 5 -o ";
  ok = ok && sh(bench_cmd + (dir / "a.csv").string()) == 0;
  ok = ok && sh(bench_cmd + (dir / "b.csv").string()) == 0;
  auto strip = [](const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
      out << line.substr(0, line.rfind(',')) << "\n";
    return out.str();
  };
  std::string detail = "two sweeps compared";
  if (ok) {
    const std::string a = strip((dir / "a.csv").string());
    const std::string b = strip((dir / "b.csv").string());
    ok = !a.empty() && a == b;
    if (!ok) detail = "sweeps differ";
  } else {
    detail = "CLI invocation failed";
  }
  fs::remove_all(dir);
  report(9, ok, detail + ", " + std::to_string(elapsed_s(t0)) + " s");
#endif
}

}  // namespace

int main() {
  criterion_oracle_bound_validity();
  criterion_relaxation_bounds();
  criterion_singleton_degeneration();
  criterion_termination();
  criterion_admissibility();
  criterion_maze_reproduction();
  criterion_perspective();
  criterion_two_step();
  criterion_bench_determinism();
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return 1;
}
