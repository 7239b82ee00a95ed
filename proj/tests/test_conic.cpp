#include "gcs/conic.hpp"

#include <cmath>

#include "doctest.h"
#include "gcs/rng.hpp"

using namespace gcs;

namespace {

/// Independent feasibility audit: every equality, bound and cone of the
/// program is re-checked against the reported solution, without trusting
/// anything the backend computed.
void check_solution_feasible(const ConicProgram& p, const ConicSolution& sol,
                             double tol) {
  REQUIRE(sol.optimal());
  REQUIRE(sol.values.size() == static_cast<size_t>(p.num_variables()));
  for (int v = 0; v < p.num_variables(); ++v) {
    CHECK(sol.values[v] >= p.lower()[v] - tol);
    CHECK(sol.values[v] <= p.upper()[v] + tol);
  }
  for (const auto& row : p.equalities()) {
    double lhs = 0.0;
    for (const auto& [var, coeff] : row.terms) lhs += coeff * sol.values[var];
    CHECK(std::fabs(lhs - row.rhs) <= tol);
  }
  for (const auto& cone : p.cones()) {
    double sq = 0.0;
    for (const auto& row : cone.rows) {
      double r = row.rhs;
      for (const auto& [var, coeff] : row.terms) r += coeff * sol.values[var];
      sq += r * r;
    }
    CHECK(sol.values[cone.t_var] >= std::sqrt(sq) - tol);
  }
  double obj = 0.0;
  for (int v = 0; v < p.num_variables(); ++v)
    obj += p.objective()[v] * sol.values[v];
  CHECK(obj == doctest::Approx(sol.objective).epsilon(1e-9));
}

ConicProgram distance_to_shifted_origin() {
  // minimize t s.t. t >= ||(x - 1, y)||, x == 0, y == 0
  ConicProgram p;
  const int x = p.add_variable(0.0, 0.0);
  const int y = p.add_variable(0.0, 0.0);
  const int t = p.add_variable(-kInf, kInf, 1.0);
  std::vector<LinearRow> rows(2);
  rows[0].terms = {{x, 1.0}};
  rows[0].rhs = -1.0;
  rows[1].terms = {{y, 1.0}};
  p.add_cone(t, rows);
  return p;
}

/// Random feasible-by-construction program: distances between boxes plus
/// coupling equalities.
ConicProgram random_program(std::uint64_t seed) {
  SplitMix64 rng(seed);
  ConicProgram p;
  const int pairs = 2 + static_cast<int>(rng.bounded(3));
  int prev = -1;
  for (int k = 0; k < pairs; ++k) {
    const double cx = 10.0 * rng.uniform();
    const double cy = 10.0 * rng.uniform();
    const int x = p.add_variables(2);
    p.set_bounds(x, cx, cx + 1.0 + rng.uniform());
    p.set_bounds(x + 1, cy, cy + 1.0 + rng.uniform());
    if (prev >= 0) {
      const int t = p.add_variable(-kInf, kInf, 1.0);
      std::vector<LinearRow> rows(2);
      rows[0].terms = {{prev, 1.0}, {x, -1.0}};
      rows[1].terms = {{prev + 1, 1.0}, {x + 1, -1.0}};
      p.add_cone(t, rows);
    }
    prev = x;
  }
  return p;
}

}  // namespace

TEST_CASE("trivial conic programs") {
  {
    const ConicSolution s = solve_conic(distance_to_shifted_origin());
    CHECK(s.status == SolveStatus::kOptimal);
    CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    // minimize t s.t. t >= ||x||, x free
    ConicProgram p;
    const int x = p.add_variable();
    const int t = p.add_variable(-kInf, kInf, 1.0);
    std::vector<LinearRow> rows(1);
    rows[0].terms = {{x, 1.0}};
    p.add_cone(t, rows);
    const ConicSolution s = solve_conic(p);
    CHECK(s.status == SolveStatus::kOptimal);
    CHECK(std::fabs(s.objective) < 1e-6);
  }
  {
    // infeasible equalities: 0 == 1
    ConicProgram p;
    p.add_variable(0.0, 1.0, 1.0);
    LinearRow row;
    row.rhs = 1.0;
    p.add_equality(row);
    const ConicSolution s = solve_conic(p);
    CHECK(s.status == SolveStatus::kInfeasible);
  }
}

TEST_CASE("re-solving is deterministic") {
  const ConicProgram p = random_program(99);
  const ConicSolution a = solve_conic(p);
  const ConicSolution b = solve_conic(p);
  REQUIRE(a.optimal());
  REQUIRE(b.optimal());
  CHECK(std::fabs(a.objective - b.objective) <= 1e-8);
}

TEST_CASE("solutions are feasible under independent re-checking") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const ConicProgram p = random_program(seed);
    const ConicSolution s = solve_conic(p, 1e-7);
    check_solution_feasible(p, s, 1e-6);  // 10x the requested accuracy
  }
}

TEST_CASE("native and reference backends agree on tiny programs") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const ConicProgram p = random_program(seed);
    const ConicSolution ipm = native_backend().solve(p, 1e-8);
    const ConicSolution ref = reference_backend().solve(p, 2e-6);
    REQUIRE(ipm.optimal());
    REQUIRE(ref.optimal());
    CHECK(std::fabs(ipm.objective - ref.objective) <=
          1e-4 * std::max(1.0, std::fabs(ipm.objective)));
  }
  const ConicSolution ref =
      reference_backend().solve(distance_to_shifted_origin(), 1e-6);
  REQUIRE(ref.optimal());
  CHECK(ref.objective == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("program dump mentions every block") {
  const ConicProgram p = distance_to_shifted_origin();
  const std::string dump = p.dump();
  CHECK(dump.find("minimize") != std::string::npos);
  CHECK(dump.find("norm(") != std::string::npos);
  CHECK(dump.find("<=") != std::string::npos);
}
