#include "gcs/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "gcs/errors.hpp"

namespace gcs {

GcsGraph::GcsGraph(int dimension, std::vector<ConvexSet> sets,
                   std::vector<Edge> edges, VertexId origin,
                   VertexId destination)
    : dimension_(dimension),
      sets_(std::move(sets)),
      edges_(std::move(edges)),
      origin_(origin),
      destination_(destination) {
  const int n = num_vertices();
  out_.resize(n);
  in_.resize(n);
  for (const auto& [u, v] : edges_) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw InputError("edge endpoint out of range");
    out_[u].push_back(v);
    in_[v].push_back(u);
  }
  for (auto& adj : out_) std::sort(adj.begin(), adj.end());
  for (auto& adj : in_) std::sort(adj.begin(), adj.end());
}

bool GcsGraph::has_edge(VertexId u, VertexId v) const {
  if (u < 0 || u >= num_vertices()) return false;
  const auto& adj = out_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

void GcsGraph::validate() const {
  const int n = num_vertices();
  if (n < 2) throw InputError("graph needs at least two vertices");
  for (int v = 0; v < n; ++v) {
    if (sets_[v].dimension() != dimension_)
      throw InputError("vertex " + std::to_string(v) +
                       " set dimension disagrees with the graph");
  }
  if (origin_ < 0 || origin_ >= n || destination_ < 0 || destination_ >= n)
    throw InputError("origin or destination id out of range");
  if (origin_ == destination_)
    throw InputError("origin and destination must differ");
  std::set<Edge> seen;
  for (const auto& e : edges_) {
    if (e.first == e.second)
      throw InputError("self-loop at vertex " + std::to_string(e.first));
    if (!seen.insert(e).second)
      throw InputError("duplicate edge " + std::to_string(e.first) + "->" +
                       std::to_string(e.second));
  }
  // Reachability origin -> destination.
  std::vector<char> visited(n, 0);
  std::deque<VertexId> queue{origin_};
  visited[origin_] = 1;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (VertexId v : out_[u]) {
      if (!visited[v]) {
        visited[v] = 1;
        queue.push_back(v);
      }
    }
  }
  if (!visited[destination_])
    throw InputError("destination is unreachable from the origin");
}

VertexSet neighborhood(const GcsGraph& graph, const VertexSet& S) {
  for (VertexId v : S) {
    if (v < 0 || v >= graph.num_vertices())
      throw InputError("unknown vertex id " + std::to_string(v) +
                       " in cut-set");
  }
  VertexSet result;
  for (VertexId u : S) {
    for (VertexId v : graph.successors(u)) {
      if (!S.count(v)) result.insert(v);
    }
  }
  return result;
}

GcsGraph reverse(const GcsGraph& graph) {
  std::vector<Edge> reversed;
  reversed.reserve(graph.edges().size());
  for (const auto& [u, v] : graph.edges()) reversed.emplace_back(v, u);
  return GcsGraph(graph.dimension(), graph.sets(), std::move(reversed),
                  graph.origin(), graph.destination());
}

CutState CutState::make(const GcsGraph& graph, VertexSet S) {
  if (!S.count(graph.origin()))
    throw InputError("cut-set must contain the origin");
  if (S.count(graph.destination()))
    throw InputError("cut-set must exclude the destination");
  CutState state;
  state.N_S = neighborhood(graph, S);
  state.S = std::move(S);
  return state;
}

HeuristicTable HeuristicTable::zeros(int num_vertices) {
  return HeuristicTable{std::vector<double>(num_vertices, 0.0)};
}

}  // namespace gcs
