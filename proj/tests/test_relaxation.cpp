#include "gcs/relaxation.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "gcs/errors.hpp"
#include "gcs/oracle.hpp"
#include "test_helpers.hpp"

using namespace gcs;
using gcs::testing::chain_graph;
using gcs::testing::diamond_box_graph;
using gcs::testing::random_small_graph;
using gcs::testing::relaxation_residuals;
using gcs::testing::tri_graph;
using gcs::testing::v2;

namespace {

/// Brute-force oracle for the box detour: dense grid search over the box
/// followed by local refinement, no conic machinery involved.
double grid_min_via_box(const Eigen::Vector2d& s, const Eigen::Vector2d& d,
                        const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
  auto cost = [&](double x, double y) {
    const Eigen::Vector2d p(x, y);
    return (p - s).norm() + (p - d).norm();
  };
  double best = kInf, bx = lo[0], by = lo[1];
  const int steps = 1000;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      const double x = lo[0] + (hi[0] - lo[0]) * i / steps;
      const double y = lo[1] + (hi[1] - lo[1]) * j / steps;
      const double c = cost(x, y);
      if (c < best) {
        best = c;
        bx = x;
        by = y;
      }
    }
  // Coordinate-descent refinement around the grid winner.
  double step = (hi[0] - lo[0]) / steps;
  for (int round = 0; round < 60; ++round) {
    bool moved = false;
    const std::pair<double, double> moves[] = {
        {step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}};
    for (const auto& [dx, dy] : moves) {
      const double x = std::clamp(bx + dx, lo[0], hi[0]);
      const double y = std::clamp(by + dy, lo[1], hi[1]);
      if (cost(x, y) < best) {
        best = cost(x, y);
        bx = x;
        by = y;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

}  // namespace

TEST_CASE("build_sppstar on the one-edge cut") {
  const GcsGraph g = tri_graph();
  const HeuristicTable h0 = HeuristicTable::zeros(3);
  const SppStarProgram built = build_sppstar(g, {0}, {1}, h0);
  CHECK(built.index.edges == std::vector<Edge>{{0, 1}});
  CHECK(built.index.terminals == std::vector<VertexId>{1});
  CHECK(built.index.y.size() == 1);
  CHECK(built.index.t.size() == 1);
  CHECK(built.index.z.size() == 1);
  CHECK(built.index.z_prime.size() == 1);
  CHECK(built.index.alpha.size() == 1);
  CHECK(built.index.num_segment_aux == 1);  // one segment endpoint
}

TEST_CASE("build_sppstar on the grown cut includes the interior edge") {
  const GcsGraph g = tri_graph();
  const SppStarProgram built =
      build_sppstar(g, {0, 1}, {2}, HeuristicTable::zeros(3));
  CHECK(built.index.edges == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(built.index.terminals == std::vector<VertexId>{2});
  CHECK(built.index.num_segment_aux == 2);  // the segment borders both edges
}

TEST_CASE("build_sppstar on singleton sets has no interpolation variables") {
  const GcsGraph g = gcs::testing::diamond_points_graph();
  const SppStarProgram built =
      build_sppstar(g, {0, 1, 2}, {3}, HeuristicTable::zeros(4));
  CHECK(built.index.num_segment_aux == 0);
}

TEST_CASE("build_sppstar validates inputs") {
  const GcsGraph g = tri_graph();
  const HeuristicTable h0 = HeuristicTable::zeros(3);
  CHECK_THROWS_AS(build_sppstar(g, {0}, {}, h0), InputError);      // empty S'
  CHECK_THROWS_AS(build_sppstar(g, {0}, {2}, h0), InputError);     // not in N_S
  CHECK_THROWS_AS(build_sppstar(g, {0, 2}, {1}, h0), InputError);  // d in S
  HeuristicTable partial;
  partial.values = {0.0};  // too short
  CHECK_THROWS_AS(build_sppstar(g, {0}, {1}, partial), InputError);
}

TEST_CASE("solve_sppstar matches the fixed-path oracle on the tri instance") {
  const GcsGraph g = tri_graph();
  const HeuristicTable h0 = HeuristicTable::zeros(3);

  // One-edge cut: distance from the origin to the segment.
  const RelaxedSolution one = solve_sppstar(g, {0}, {1}, h0);
  REQUIRE(one.optimal());
  const double oracle_sa = solve_fixed_path(g, {0, 1}).cost;
  CHECK(one.objective == doctest::Approx(oracle_sa).epsilon(1e-6));
  CHECK(one.objective == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(relaxation_residuals(g, one, 1e-6).empty());

  // Grown cut: full path, symmetric through (1, 0).
  const RelaxedSolution two = solve_sppstar(g, {0, 1}, {2}, h0);
  REQUIRE(two.optimal());
  const double oracle_sad = solve_fixed_path(g, {0, 1, 2}).cost;
  CHECK(two.objective == doctest::Approx(oracle_sad).epsilon(1e-6));
  CHECK(two.objective == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(relaxation_residuals(g, two, 1e-6).empty());
  // The midpoint is forced: the segment endpoint of the first edge sits at
  // y * (1, 0).
  // Coordinates converge like the square root of the objective accuracy,
  // so the check is looser than the objective checks above.
  const auto it = std::find(two.edges.begin(), two.edges.end(), Edge{0, 1});
  REQUIRE(it != two.edges.end());
  const size_t e_sa = it - two.edges.begin();
  CHECK((two.z_prime[e_sa] - two.y[e_sa] * v2(1, 0)).norm() < 1e-3);
}

TEST_CASE("a terminal heuristic shifts the objective by alpha * h") {
  const GcsGraph g = tri_graph();
  HeuristicTable h5 = HeuristicTable::zeros(3);
  h5.values[1] = 5.0;
  const RelaxedSolution shifted = solve_sppstar(g, {0}, {1}, h5);
  REQUIRE(shifted.optimal());
  CHECK(shifted.objective == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("solve_sppstar reports infeasible cuts with an infinite objective") {
  // a -> b exists but the origin cannot reach a inside the restricted
  // edge set, so the program has no way to route its unit of activation.
  std::vector<ConvexSet> sets;
  for (int i = 0; i < 4; ++i)
    sets.push_back(ConvexSet::make_point(v2(i, 0)));
  const GcsGraph g(2, std::move(sets), {{1, 2}, {0, 3}}, 0, 3);
  const RelaxedSolution sol =
      solve_sppstar(g, {0, 1}, {2}, HeuristicTable::zeros(4));
  CHECK(sol.status == SolveStatus::kInfeasible);
  CHECK(std::isinf(sol.objective));
}

TEST_CASE("solve_fixed_path examples") {
  const GcsGraph g = tri_graph();
  const FeasibleSolution path = solve_fixed_path(g, {0, 1, 2});
  CHECK(path.cost == doctest::Approx(2.0).epsilon(1e-6));
  REQUIRE(path.points.size() == 3);
  CHECK((path.points[0] - v2(0, 0)).norm() < 1e-6);
  CHECK((path.points[1] - v2(1, 0)).norm() < 1e-5);
  CHECK((path.points[2] - v2(2, 0)).norm() < 1e-6);

  const FeasibleSolution single = solve_fixed_path(g, {0});
  CHECK(single.cost == 0.0);
  CHECK(single.points.size() == 1);

  CHECK_THROWS_AS(solve_fixed_path(g, {0, 2}), InputError);  // missing edge
  CHECK_THROWS_AS(solve_fixed_path(g, {}), InputError);
}

TEST_CASE("solve_fixed_path matches the grid oracle on the box detour") {
  const GcsGraph g = diamond_box_graph();
  const double oracle = grid_min_via_box({0, 0}, {3, 0}, {1, 1}, {2, 2});
  const FeasibleSolution sol = solve_fixed_path(g, {0, 1, 2});
  CHECK(sol.cost == doctest::Approx(oracle).epsilon(1e-4));
  // cost recomputes exactly from the points
  double from_points = 0.0;
  for (size_t i = 0; i + 1 < sol.points.size(); ++i)
    from_points += (sol.points[i] - sol.points[i + 1]).norm();
  CHECK(sol.cost == doctest::Approx(from_points).epsilon(1e-12));
}

TEST_CASE("lower bounds never exceed the exhaustive optimum") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GcsGraph g = random_small_graph(seed);
    const double c_opt = exact_opt(g, g.origin(), g.destination()).c_opt;
    const HeuristicTable h0 = HeuristicTable::zeros(g.num_vertices());
    SplitMix64 rng(seed * 77 + 1);
    for (int trial = 0; trial < 4; ++trial) {
      VertexSet S{g.origin()};
      for (int v = 0; v < g.num_vertices(); ++v)
        if (v != g.destination() && v != g.origin() && rng.bounded(2))
          S.insert(v);
      const VertexSet frontier = neighborhood(g, S);
      if (frontier.empty()) continue;
      const RelaxedSolution sol = solve_sppstar(g, S, frontier, h0);
      REQUIRE(sol.optimal());
      CHECK(sol.objective <= c_opt + 1e-6 * std::max(1.0, c_opt));
      CHECK(relaxation_residuals(g, sol, 1e-6).empty());
    }
  }
}

TEST_CASE("full-cut relaxation is exact on singleton instances") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GcsGraph g = random_small_graph(seed, /*singletons_only=*/true);
    VertexSet S;
    for (int v = 0; v < g.num_vertices(); ++v)
      if (v != g.destination()) S.insert(v);
    const RelaxedSolution sol = solve_sppstar(
        g, S, {g.destination()}, HeuristicTable::zeros(g.num_vertices()));
    REQUIRE(sol.optimal());
    const double c_opt = exact_opt(g, g.origin(), g.destination()).c_opt;
    CHECK(sol.objective == doctest::Approx(c_opt).epsilon(1e-6));
  }
}

TEST_CASE("any fixed path costs at least the full-cut bound") {
  for (std::uint64_t seed = 21; seed <= 28; ++seed) {
    const GcsGraph g = random_small_graph(seed);
    VertexSet S;
    for (int v = 0; v < g.num_vertices(); ++v)
      if (v != g.destination()) S.insert(v);
    const RelaxedSolution bound = solve_sppstar(
        g, S, {g.destination()}, HeuristicTable::zeros(g.num_vertices()));
    REQUIRE(bound.optimal());
    const auto paths = enumerate_paths(g, g.origin(), g.destination(), 1000);
    for (size_t i = 0; i < paths.size(); i += 3) {
      const FeasibleSolution f = solve_fixed_path(g, paths[i]);
      CHECK(f.cost >= bound.objective - 1e-6);
    }
  }
}

TEST_CASE("the reference backend reproduces the native relaxation value") {
  const GcsGraph g = tri_graph();
  RelaxOptions ref;
  ref.backend = &reference_backend();
  ref.accuracy = 2e-6;
  const RelaxedSolution slow =
      solve_sppstar(g, {0, 1}, {2}, HeuristicTable::zeros(3), ref);
  REQUIRE(slow.optimal());
  CHECK(slow.objective == doctest::Approx(2.0).epsilon(1e-4));

  const FeasibleSolution path = solve_fixed_path(g, {0, 1, 2}, ref);
  CHECK(path.cost == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("relaxed solution serializes its activations") {
  const GcsGraph g = tri_graph();
  const RelaxedSolution sol =
      solve_sppstar(g, {0}, {1}, HeuristicTable::zeros(3));
  const std::string json = sol.to_json();
  CHECK(json.find("\"edges\"") != std::string::npos);
  CHECK(json.find("\"alpha\"") != std::string::npos);
  CHECK(json.find("\"objective\"") != std::string::npos);
  CHECK(sol.y_of(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(sol.y_of(1, 0), InputError);
}
