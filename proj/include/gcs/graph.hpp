#pragma once

#include <set>
#include <utility>
#include <vector>

#include "gcs/geometry.hpp"

namespace gcs {

/// Vertex ids are dense integers 0..|V|-1 so that per-vertex data can live
/// in plain arrays.
using VertexId = int;
using VertexSet = std::set<VertexId>;
using Edge = std::pair<VertexId, VertexId>;

/// Directed graph whose vertices carry convex sets, with a designated
/// origin and destination. Immutable after construction; all operations on
/// it are pure and safe to run concurrently.
class GcsGraph {
 public:
  GcsGraph(int dimension, std::vector<ConvexSet> sets, std::vector<Edge> edges,
           VertexId origin, VertexId destination);

  int dimension() const { return dimension_; }
  int num_vertices() const { return static_cast<int>(sets_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const ConvexSet& set(VertexId v) const { return sets_.at(v); }
  const std::vector<ConvexSet>& sets() const { return sets_; }
  const std::vector<Edge>& edges() const { return edges_; }
  VertexId origin() const { return origin_; }
  VertexId destination() const { return destination_; }

  /// Out-neighbors / in-neighbors in ascending id order.
  const std::vector<VertexId>& successors(VertexId v) const {
    return out_.at(v);
  }
  const std::vector<VertexId>& predecessors(VertexId v) const {
    return in_.at(v);
  }
  bool has_edge(VertexId u, VertexId v) const;

  /// Throws InputError on any structural violation: mixed dimensions,
  /// dangling edge endpoints, self-loops, duplicate edges, origin equal to
  /// destination, or the destination being unreachable from the origin.
  void validate() const;

 private:
  int dimension_ = 0;
  std::vector<ConvexSet> sets_;
  std::vector<Edge> edges_;
  VertexId origin_ = 0;
  VertexId destination_ = 0;
  std::vector<std::vector<VertexId>> out_;
  std::vector<std::vector<VertexId>> in_;
};

/// { v : u in S, v not in S, (u,v) in E }, ascending order.
VertexSet neighborhood(const GcsGraph& graph, const VertexSet& S);

/// Every edge (u,v) becomes (v,u); sets are unchanged. Origin and
/// destination ids are carried over verbatim; callers that need different
/// endpoints re-designate them.
GcsGraph reverse(const GcsGraph& graph);

/// A cut-set S (origin in S, destination not in S) with its derived
/// neighborhood. Construction validates the cut property.
struct CutState {
  VertexSet S;
  VertexSet N_S;

  static CutState make(const GcsGraph& graph, VertexSet S);
};

/// Per-vertex admissible underestimate of the cost to the destination,
/// indexed by vertex id. NaN marks vertices with no assigned value.
struct HeuristicTable {
  std::vector<double> values;

  double at(VertexId v) const { return values.at(v); }
  /// Zero table over |V| vertices (always admissible).
  static HeuristicTable zeros(int num_vertices);
};

}  // namespace gcs
