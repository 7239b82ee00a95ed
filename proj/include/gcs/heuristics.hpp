#pragma once

#include <Eigen/Core>
#include <vector>

#include "gcs/graph.hpp"
#include "gcs/relaxation.hpp"

namespace gcs {

/// Default cap on the active core size of the expand-and-freeze procedure.
inline constexpr int kDefaultNMax = 100;

/// h1(v) = shortest Euclidean distance between X_v and the destination set,
/// ignoring the rest of the graph. Consistent and cheap to build.
HeuristicTable h1_table(const GcsGraph& graph);

/// Expand-and-freeze underestimates, built by sweeping relaxations outward
/// from the destination on the reverse graph. Vertices are frozen with the
/// relaxation objective of the round that first reaches them; once the
/// active core reaches n_max vertices it is collapsed to the frozen
/// boundary, whose frozen values seed later rounds. Stronger than h1 on
/// most maps but possibly inconsistent. Vertices that cannot reach the
/// destination get 0.
HeuristicTable h2_expand_freeze(const GcsGraph& graph,
                                int n_max = kDefaultNMax,
                                const RelaxOptions& opts = {});

/// Pointwise (1-w) * h1 + w * h2 for w in [0, 1].
HeuristicTable blend(const HeuristicTable& h1, const HeuristicTable& h2,
                     double w);

struct AstarResult {
  std::vector<VertexId> path;
  double cost = 0.0;
  /// Expanded vertices in first-expansion order; the destination is last.
  std::vector<VertexId> closed_order;
};

/// Textbook A* over fixed representative points, edge weight
/// ||points[u] - points[v]||_2, with re-expansion allowed so inconsistent
/// heuristics still yield optimal paths. Ties break on lowest f, then
/// lowest g, then lowest vertex id. Throws NoPathError if the destination
/// is unreachable.
AstarResult classic_astar(const GcsGraph& graph,
                          const std::vector<Eigen::VectorXd>& points,
                          const HeuristicTable& h);

/// Centroid of every vertex set, indexed by id.
std::vector<Eigen::VectorXd> centroid_points(const GcsGraph& graph);

/// Closed set of classic A* on centroids, minus the destination. Always a
/// cut-set whose neighborhood contains the destination.
VertexSet sinit_from_astar(const GcsGraph& graph, const HeuristicTable& h);

}  // namespace gcs
