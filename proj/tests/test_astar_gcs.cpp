#include "gcs/astar_gcs.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gcs/errors.hpp"
#include "gcs/heuristics.hpp"
#include "gcs/oracle.hpp"
#include "test_helpers.hpp"

using namespace gcs;
using gcs::testing::chain_graph;
using gcs::testing::random_small_graph;
using gcs::testing::tri_graph;
using gcs::testing::tri_offset_graph;
using gcs::testing::v2;

namespace {

/// Hand-built relaxed solution for the subset-update and rounding rules.
RelaxedSolution synthetic_solution(std::vector<Edge> edges,
                                   std::vector<double> y, VertexSet S,
                                   VertexSet S_prime, double objective) {
  RelaxedSolution sol;
  sol.status = SolveStatus::kOptimal;
  sol.objective = objective;
  sol.edges = std::move(edges);
  sol.y = std::move(y);
  sol.S = std::move(S);
  sol.S_prime = std::move(S_prime);
  return sol;
}

}  // namespace

TEST_CASE("update_subset pulls in every activated frontier vertex") {
  // s=0, frontier {1, 2, 3}
  const auto sol = synthetic_solution({{0, 1}, {0, 2}, {0, 3}},
                                      {0.7, 0.3, 0.0}, {0}, {1, 2, 3}, 1.0);
  CHECK(update_subset({0}, {1, 2, 3}, sol) == VertexSet{0, 1, 2});

  const auto single =
      synthetic_solution({{0, 1}}, {1.0}, {0}, {1}, 1.0);
  CHECK(update_subset({0}, {1}, single) == VertexSet{0, 1});
}

TEST_CASE("update_subset flags growth below the activation threshold") {
  const auto sol = synthetic_solution({{0, 1}}, {5e-7}, {0}, {1}, 1.0);
  CHECK_THROWS_AS(update_subset({0}, {1}, sol, 1e-6), InternalError);
}

TEST_CASE("extract_feasible rounds an integral solution to its path") {
  const GcsGraph g = tri_graph();
  VertexSet S{0, 1};
  const RelaxedSolution sol =
      solve_sppstar(g, S, {2}, HeuristicTable::zeros(3));
  REQUIRE(sol.optimal());
  const auto f = extract_feasible(g, sol, Rounding::kGreedy);
  REQUIRE(f.has_value());
  CHECK(f->path == std::vector<VertexId>{0, 1, 2});
  CHECK(f->cost == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("greedy rounding follows the heavier branch") {
  auto sol = synthetic_solution({{0, 1}, {0, 2}, {1, 3}, {2, 3}},
                                {0.6, 0.4, 0.6, 0.4}, {0, 1, 2}, {3}, 1.0);
  const GcsGraph g = gcs::testing::diamond_points_graph();
  const auto f = extract_feasible(g, sol, Rounding::kGreedy);
  REQUIRE(f.has_value());
  CHECK(f->path == std::vector<VertexId>{0, 1, 3});
}

TEST_CASE("rounding reports absence when every walk dead-ends") {
  // all activation runs into vertex 1, which has no outgoing activation
  auto sol = synthetic_solution({{0, 1}, {1, 3}}, {1.0, 0.0}, {0, 1}, {3},
                                1.0);
  const GcsGraph g = gcs::testing::diamond_points_graph();
  CHECK_FALSE(extract_feasible(g, sol, Rounding::kGreedy).has_value());
  CHECK_FALSE(
      extract_feasible(g, sol, Rounding::kSampled, 8, 3).has_value());
}

TEST_CASE("sampled rounding is deterministic in the seed") {
  const GcsGraph g = gcs::testing::diamond_points_graph();
  VertexSet S{0, 1, 2};
  const RelaxedSolution sol =
      solve_sppstar(g, S, {3}, HeuristicTable::zeros(4));
  const auto a = extract_feasible(g, sol, Rounding::kSampled, 16, 42);
  const auto b = extract_feasible(g, sol, Rounding::kSampled, 16, 42);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(a->path == b->path);
  CHECK(a->cost == b->cost);
}

TEST_CASE("update_feasible keeps the cheaper candidate") {
  FeasibleSolution cheap;
  cheap.cost = 4.0;
  FeasibleSolution dear;
  dear.cost = 5.0;
  CHECK(update_feasible(dear, cheap)->cost == 4.0);
  CHECK(update_feasible(std::nullopt, dear)->cost == 5.0);
  CHECK(update_feasible(cheap, std::nullopt)->cost == 4.0);
  CHECK_FALSE(update_feasible(std::nullopt, std::nullopt).has_value());
}

TEST_CASE("two_step_feasible re-optimizes the centroid path") {
  // centroid path and optimal path agree on the symmetric instance
  CHECK(two_step_feasible(tri_graph(), HeuristicTable::zeros(3)).cost ==
        doctest::Approx(2.0).epsilon(1e-6));

  // strictly improves on the offset instance
  const GcsGraph off = tri_offset_graph();
  const auto points = centroid_points(off);
  const AstarResult astar =
      classic_astar(off, points, HeuristicTable::zeros(3));
  double centroid_cost = 0.0;
  for (size_t i = 0; i + 1 < astar.path.size(); ++i)
    centroid_cost +=
        (points[astar.path[i]] - points[astar.path[i + 1]]).norm();
  const FeasibleSolution two = two_step_feasible(off, HeuristicTable::zeros(3));
  CHECK(two.cost <= centroid_cost + 1e-9);
  CHECK(two.cost == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(centroid_cost > 2.5);  // the improvement is strict

  // chain has no freedom at all
  CHECK(two_step_feasible(chain_graph(), HeuristicTable::zeros(3)).cost ==
        doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("run_astar_gcs walks the tri instance through both phases") {
  const GcsGraph g = tri_graph();
  const RunResult res =
      run_astar_gcs(g, HeuristicTable::zeros(3), {0}, RunOptions{});
  CHECK(res.termination == Termination::kFrontierExhausted);
  CHECK(res.c_lb == doctest::Approx(2.0).epsilon(1e-6));
  REQUIRE(res.best_feasible.has_value());
  CHECK(res.best_feasible->cost == doctest::Approx(2.0).epsilon(1e-6));
  REQUIRE(res.trace.size() == 2);
  CHECK(res.trace[0].phase == 1);
  CHECK(res.trace[0].r_star_frontier == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.trace[1].phase == 2);
  CHECK(res.final_cut_set == VertexSet{0, 1});
  REQUIRE(res.gap_percent().has_value());
  CHECK(*res.gap_percent() < 1e-4);
}

TEST_CASE("astar-informed initialization skips phase 1") {
  for (std::uint64_t seed = 121; seed <= 128; ++seed) {
    const GcsGraph g = random_small_graph(seed);
    const HeuristicTable h1 = h1_table(g);
    const VertexSet s_init = sinit_from_astar(g, h1);
    const RunResult res = run_astar_gcs(g, h1, s_init, RunOptions{});
    for (const auto& rec : res.trace) CHECK(rec.phase == 2);
  }
}

TEST_CASE("trace cut sizes increase strictly and respect the vertex cap") {
  for (std::uint64_t seed = 131; seed <= 140; ++seed) {
    const GcsGraph g = random_small_graph(seed);
    const RunResult res = run_astar_gcs(
        g, HeuristicTable::zeros(g.num_vertices()), {g.origin()},
        RunOptions{});
    CHECK(res.growth_iterations <= g.num_vertices() - 1);
    for (size_t i = 1; i < res.trace.size(); ++i)
      CHECK(res.trace[i].cut_size > res.trace[i - 1].cut_size);
    REQUIRE(!res.trace.empty());
  }
}

TEST_CASE("every reported bound stays below the exhaustive optimum") {
  for (std::uint64_t seed = 141; seed <= 148; ++seed) {
    const GcsGraph g = random_small_graph(seed);
    const double c_opt = exact_opt(g, g.origin(), g.destination()).c_opt;
    const RunResult res = run_astar_gcs(
        g, h1_table(g), {g.origin()}, RunOptions{});
    for (const auto& rec : res.trace)
      CHECK(rec.c_lb <= c_opt + 1e-6 * std::max(1.0, c_opt));
    REQUIRE(res.best_feasible.has_value());
    CHECK(res.best_feasible->cost >= res.c_lb - 1e-6);
    CHECK(gcs::testing::feasible_violations(g, *res.best_feasible).empty());
  }
}

TEST_CASE("singleton instances with a consistent heuristic match classic A*") {
  for (std::uint64_t seed = 151; seed <= 158; ++seed) {
    const GcsGraph g = random_small_graph(seed, /*singletons_only=*/true);
    const double astar_cost =
        classic_astar(g, centroid_points(g), h1_table(g)).cost;
    const RunResult res =
        run_astar_gcs(g, h1_table(g), {g.origin()}, RunOptions{});
    CHECK(res.c_lb == doctest::Approx(astar_cost).epsilon(1e-6));
  }
}

TEST_CASE("preemption returns a valid partial run") {
  const GcsGraph g = random_small_graph(161);
  RunOptions opts;
  opts.max_iters = 1;
  const RunResult res =
      run_astar_gcs(g, h1_table(g), {g.origin()}, opts);
  CHECK(res.growth_iterations <= 1);
  CHECK(!res.trace.empty());
  const double c_opt = exact_opt(g, g.origin(), g.destination()).c_opt;
  CHECK(res.c_lb <= c_opt + 1e-6 * std::max(1.0, c_opt));
}

TEST_CASE("identical runs produce identical traces") {
  const GcsGraph g = random_small_graph(162);
  RunOptions opts;
  opts.seed = 7;
  const RunResult a = run_astar_gcs(g, h1_table(g), {g.origin()}, opts);
  const RunResult b = run_astar_gcs(g, h1_table(g), {g.origin()}, opts);
  CHECK(a.c_lb == b.c_lb);
  CHECK(a.final_cut_set == b.final_cut_set);
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].cut_size == b.trace[i].cut_size);
    CHECK(a.trace[i].r_star_frontier == b.trace[i].r_star_frontier);
    CHECK(a.trace[i].r_star_dest == b.trace[i].r_star_dest);
    CHECK(a.trace[i].c_lb == b.trace[i].c_lb);
  }
  CHECK((a.best_feasible ? a.best_feasible->cost : -1.0) ==
        (b.best_feasible ? b.best_feasible->cost : -1.0));
}

TEST_CASE("baseline solves the full cut once") {
  const GcsGraph g = tri_graph();
  const RunResult res = run_baseline(g, RunOptions{});
  CHECK(res.c_lb == doctest::Approx(2.0).epsilon(1e-6));
  REQUIRE(res.trace.size() == 1);
  CHECK(res.trace[0].cut_size == g.num_vertices() - 1);
  REQUIRE(res.gap_percent().has_value());
  CHECK(*res.gap_percent() < 1e-4);

  // integral on singleton instances
  const GcsGraph pts = random_small_graph(163, /*singletons_only=*/true);
  const double c_opt = exact_opt(pts, pts.origin(), pts.destination()).c_opt;
  CHECK(run_baseline(pts, RunOptions{}).c_lb ==
        doctest::Approx(c_opt).epsilon(1e-6));
}

TEST_CASE("optimality_gap follows the formula and rejects bad bounds") {
  CHECK(optimality_gap(11.0, 10.0) == doctest::Approx(10.0));
  CHECK(optimality_gap(3.0, 3.0) == 0.0);
  CHECK_THROWS_AS(optimality_gap(1.0, 0.0), InputError);
  CHECK_THROWS_AS(optimality_gap(1.0, -2.0), InputError);
  CHECK_THROWS_AS(optimality_gap(1.0, 2.0), InputError);
}

TEST_CASE("trace CSV has the documented schema") {
  const GcsGraph g = tri_graph();
  const RunResult res =
      run_astar_gcs(g, HeuristicTable::zeros(3), {0}, RunOptions{});
  std::ostringstream out;
  write_trace_csv(out, res);
  const std::string csv = out.str();
  CHECK(csv.rfind("iter,phase,S_size,Sprime_size,R_star_frontier,"
                  "R_star_dest,C_lb,C_f,millis\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        1 + static_cast<long>(res.trace.size()));
  // phase-1 records have no destination relaxation
  CHECK(csv.find(",inf,") != std::string::npos);
}

TEST_CASE("a custom growth policy drives the run") {
  // Grow by the whole frontier regardless of activations: terminates in
  // one phase-2 iteration less and still certifies valid bounds.
  const GcsGraph g = random_small_graph(164);
  const double c_opt = exact_opt(g, g.origin(), g.destination()).c_opt;
  RunOptions opts;
  opts.subset_update = [](const VertexSet& S, const VertexSet& S_prime,
                          const RelaxedSolution&, double) {
    VertexSet grown = S;
    grown.insert(S_prime.begin(), S_prime.end());
    return grown;
  };
  const RunResult res = run_astar_gcs(
      g, HeuristicTable::zeros(g.num_vertices()), {g.origin()}, opts);
  CHECK(res.c_lb <= c_opt + 1e-6 * std::max(1.0, c_opt));
  CHECK(res.c_lb > 0.0);
  const RunResult def = run_astar_gcs(
      g, HeuristicTable::zeros(g.num_vertices()), {g.origin()}, RunOptions{});
  CHECK(res.growth_iterations <= def.growth_iterations);
}

TEST_CASE("run validates its cut-set input") {
  const GcsGraph g = tri_graph();
  CHECK_THROWS_AS(
      run_astar_gcs(g, HeuristicTable::zeros(3), {1}, RunOptions{}),
      InputError);
  CHECK_THROWS_AS(
      run_astar_gcs(g, HeuristicTable::zeros(3), {0, 2}, RunOptions{}),
      InputError);
  RunOptions zero_iters;
  zero_iters.max_iters = 0;
  CHECK_THROWS_AS(run_astar_gcs(g, HeuristicTable::zeros(3), {0}, zero_iters),
                  InputError);
}
