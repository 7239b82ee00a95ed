#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gcs/graph.hpp"
#include "gcs/relaxation.hpp"

namespace gcs {

/// Edge activation threshold for growing the cut-set. Solver noise below
/// this level must not pull vertices in.
inline constexpr double kGrowthEps = 1e-6;

enum class Termination { kBoundTest, kFrontierExhausted, kIterationCap, kPreempted, kAborted };

const char* to_string(Termination t);

enum class Rounding { kGreedy, kSampled };

struct IterationRecord {
  int iter = 0;
  int phase = 0;
  int cut_size = 0;
  int frontier_size = 0;           // |S'|
  double r_star_frontier = kInf;   // relaxation over S'
  double r_star_dest = kInf;       // relaxation straight to d (phase 2)
  double c_lb = 0.0;               // lower bound after the update
  double feasible_cost = kInf;     // best feasible cost after the update
  double millis = 0.0;
};

struct RunResult {
  double c_lb = 0.0;
  std::optional<FeasibleSolution> best_feasible;
  std::vector<IterationRecord> trace;
  Termination termination = Termination::kAborted;
  VertexSet final_cut_set;
  int growth_iterations = 0;
  double wall_millis = 0.0;

  /// 100 * (ub - lb) / lb, or nullopt when either bound is missing.
  std::optional<double> gap_percent() const;
  std::string to_json() const;
};

/// Fixed CSV schema: iter,phase,S_size,Sprime_size,R_star_frontier,
/// R_star_dest,C_lb,C_f,millis.
void write_trace_csv(std::ostream& out, const RunResult& result);

/// Growth policy: maps the current cut-set, its frontier and the relaxed
/// solution to the grown cut-set. The result must be a strict superset of
/// S that stays inside S union S'.
using SubsetUpdatePolicy = std::function<VertexSet(
    const VertexSet& S, const VertexSet& S_prime, const RelaxedSolution& sol,
    double eps_y)>;

struct RunOptions {
  double eps_y = kGrowthEps;
  int max_iters = 1 << 30;  // preemption cap; structural cap is |V|-1
  bool greedy_rounding = true;
  int sampled_walks = 16;
  std::uint64_t seed = 0;
  bool two_step = true;  // also round via the centroid A* path
  /// Defaults to update_subset (grow by activated frontier vertices).
  SubsetUpdatePolicy subset_update;
  RelaxOptions relax;
};

/// S plus every S' vertex that receives a positive activation from S.
/// Throws InternalError if a finite optimal solution grows nothing, which
/// signals a solver tolerance misconfiguration.
VertexSet update_subset(const VertexSet& S, const VertexSet& S_prime,
                        const RelaxedSolution& sol, double eps_y = kGrowthEps);

/// Rounds a destination relaxation into a vertex path and re-optimizes the
/// points along it. Greedy follows the largest activation; sampled performs
/// `samples` random walks with probability proportional to the
/// activations. Returns the cheapest completed path, or nullopt when every
/// walk dead-ends.
std::optional<FeasibleSolution> extract_feasible(
    const GcsGraph& graph, const RelaxedSolution& sol, Rounding mode,
    int samples = 16, std::uint64_t seed = 0, const RelaxOptions& opts = {});

/// Keeps the cheaper of the two; absent counts as +inf.
std::optional<FeasibleSolution> update_feasible(
    std::optional<FeasibleSolution> current,
    std::optional<FeasibleSolution> candidate);

/// Runs A* on centroids, then re-optimizes the points along the returned
/// path. The result never costs more than the centroid path.
FeasibleSolution two_step_feasible(const GcsGraph& graph,
                                   const HeuristicTable& h,
                                   const RelaxOptions& opts = {});

/// Iterative cut-set growth: Phase 1 expands until the destination enters
/// the neighborhood, Phase 2 balances the frontier relaxation against the
/// direct-to-destination relaxation and stops growing once the frontier
/// cost dominates. Produces a certified lower bound, an optional feasible
/// solution and a per-iteration trace.
RunResult run_astar_gcs(const GcsGraph& graph, const HeuristicTable& h,
                        const VertexSet& S_init, const RunOptions& opts = {});

/// One relaxation over the full graph (S = V minus the destination), the
/// reference both for bound quality and for solve-size comparisons.
RunResult run_baseline(const GcsGraph& graph, const RunOptions& opts = {});

/// 100 * (C_f - C_lb) / C_lb, clipped to 0 when the bounds coincide within
/// 1e-9. Throws InputError when C_lb <= 0 (the gap is undefined).
double optimality_gap(double c_f, double c_lb);

}  // namespace gcs
