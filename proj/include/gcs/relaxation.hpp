#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "gcs/conic.hpp"
#include "gcs/graph.hpp"

namespace gcs {

/// Maps program variables back to graph entities for one restricted
/// shortest-path relaxation. Edges are sorted by (tail, head); terminals
/// ascending.
struct SppStarIndex {
  std::vector<Edge> edges;
  std::vector<int> y;        // per edge
  std::vector<int> t;        // per edge, epigraph of the edge length
  std::vector<int> z;        // per edge, first of n consecutive variables
  std::vector<int> z_prime;  // per edge, first of n consecutive variables
  std::vector<VertexId> terminals;
  std::vector<int> alpha;  // per terminal
  // Auxiliary interpolation variables emitted for segment sets, kept only
  // so construction can be inspected in tests.
  int num_segment_aux = 0;

  int edge_position(VertexId u, VertexId v) const;
};

struct SppStarProgram {
  ConicProgram program;
  SppStarIndex index;
};

/// Result of one relaxation solve: objective, edge activations y, terminal
/// selectors alpha and the per-edge endpoint variables, together with the
/// (S, S') context it was solved on. An infeasible program is reported with
/// status kInfeasible and objective +inf.
struct RelaxedSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double objective = kInf;
  std::vector<Edge> edges;
  std::vector<double> y;
  std::vector<Eigen::VectorXd> z;
  std::vector<Eigen::VectorXd> z_prime;
  std::vector<VertexId> terminals;
  std::vector<double> alpha;
  VertexSet S;
  VertexSet S_prime;
  double wall_seconds = 0.0;

  bool optimal() const { return status == SolveStatus::kOptimal; }
  double y_of(VertexId u, VertexId v) const;
  /// Trace dump: edge y values, terminal alphas, objective.
  std::string to_json() const;
};

/// A concrete vertex path with one point per visited set and its Euclidean
/// length.
struct FeasibleSolution {
  std::vector<VertexId> path;
  std::vector<Eigen::VectorXd> points;
  double cost = 0.0;
};

struct RelaxOptions {
  double accuracy = kDefaultAccuracy;
  const ConicBackend* backend = nullptr;  // null: native backend
};

/// Builds the restricted relaxation over the edge set
///   E-bar = { (u,v) : u in S, v in S or S', (u,v) in E }
/// with one unit of flow leaving the origin, terminal selection over S',
/// flow conservation inside S, perspective constraints tying each edge
/// endpoint to its vertex set, and objective
///   sum of edge lengths + sum over terminals of alpha_v * h(v).
/// Preconditions: S is a cut-set, S' a non-empty subset of its
/// neighborhood, h finite on all of S'.
SppStarProgram build_sppstar(const GcsGraph& graph, const VertexSet& S,
                             const VertexSet& S_prime,
                             const HeuristicTable& h);

RelaxedSolution solve_sppstar(const GcsGraph& graph, const VertexSet& S,
                              const VertexSet& S_prime,
                              const HeuristicTable& h,
                              const RelaxOptions& opts = {});

/// Optimal placement of one point per path vertex, minimizing the total
/// Euclidean length of the fixed vertex sequence.
FeasibleSolution solve_fixed_path(const GcsGraph& graph,
                                  const std::vector<VertexId>& path,
                                  const RelaxOptions& opts = {});

// --- Program building blocks shared with other relaxation variants. ---

/// Constrains (z, lambda_var) to the perspective cone of `set` via linear
/// rows (auxiliary variables are added as needed). `z` holds n variable
/// indices.
void append_perspective_rows(ConicProgram& program, const ConvexSet& set,
                             const std::vector<int>& z, int lambda_var);

/// Constrains x (n variable indices) to lie in `set`.
void append_membership_rows(ConicProgram& program, const ConvexSet& set,
                            const std::vector<int>& x);

/// Adds t >= || x_a - x_b ||_2 over two equally sized index lists and
/// returns the index of the new epigraph variable t (cost 1).
int append_distance_cone(ConicProgram& program, const std::vector<int>& a,
                         const std::vector<int>& b);

}  // namespace gcs
