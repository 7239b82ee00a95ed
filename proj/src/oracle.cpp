#include "gcs/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "gcs/errors.hpp"

#include "json.hpp"

namespace gcs {

namespace {

void enumerate_rec(const GcsGraph& graph, VertexId cur, VertexId dst, int cap,
                   std::vector<char>& visited, std::vector<VertexId>& stack,
                   std::vector<std::vector<VertexId>>& out) {
  if (cur == dst) {
    if (static_cast<int>(out.size()) >= cap)
      throw TooLargeError("path count exceeds the enumeration cap of " +
                          std::to_string(cap));
    out.push_back(stack);
    return;
  }
  for (VertexId next : graph.successors(cur)) {  // ascending: lexicographic
    if (visited[next]) continue;
    visited[next] = 1;
    stack.push_back(next);
    enumerate_rec(graph, next, dst, cap, visited, stack, out);
    stack.pop_back();
    visited[next] = 0;
  }
}

}  // namespace

std::vector<std::vector<VertexId>> enumerate_paths(const GcsGraph& graph,
                                                   VertexId src, VertexId dst,
                                                   int cap) {
  if (cap < 1) throw InputError("enumeration cap must be positive");
  if (src < 0 || src >= graph.num_vertices() || dst < 0 ||
      dst >= graph.num_vertices())
    throw InputError("enumeration endpoints out of range");
  std::vector<std::vector<VertexId>> out;
  std::vector<char> visited(graph.num_vertices(), 0);
  std::vector<VertexId> stack{src};
  visited[src] = 1;
  enumerate_rec(graph, src, dst, cap, visited, stack, out);
  return out;
}

ExactResult exact_opt(const GcsGraph& graph, VertexId src, VertexId dst,
                      int cap, Execution exec, const RelaxOptions& opts) {
  const auto paths = enumerate_paths(graph, src, dst, cap);
  if (paths.empty())
    throw NoPathError("no path from " + std::to_string(src) + " to " +
                      std::to_string(dst));

  std::vector<double> costs(paths.size(), kInf);
  std::vector<FeasibleSolution> solutions(paths.size());
  const int count = static_cast<int>(paths.size());
  bool failed = false;
#pragma omp parallel for schedule(dynamic) \
    if (exec == Execution::kParallel && count > 1)
  for (int i = 0; i < count; ++i) {
    try {
      solutions[i] = solve_fixed_path(graph, paths[i], opts);
      costs[i] = solutions[i].cost;
    } catch (const Error&) {
#pragma omp critical
      failed = true;
    }
  }
  if (failed)
    throw InternalError("a fixed-path program failed during enumeration");

  // Deterministic reduction: cheapest cost, ties to the lexicographically
  // smaller path (the enumeration order).
  int best = 0;
  for (int i = 1; i < count; ++i)
    if (costs[i] < costs[best]) best = i;
  return ExactResult{costs[best], std::move(solutions[best])};
}

std::string AdmissibilityReport::to_json() const {
  nlohmann::ordered_json j;
  j["vertices_checked"] = vertices_checked;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& v : violations)
    list.push_back({{"vertex", v.vertex}, {"h", v.h_value}, {"c_opt", v.c_opt}});
  j["violations"] = std::move(list);
  return j.dump(2);
}

AdmissibilityReport check_admissible(const GcsGraph& graph,
                                     const HeuristicTable& h, int cap,
                                     Execution exec) {
  if (static_cast<int>(h.values.size()) < graph.num_vertices())
    throw InputError("heuristic table does not cover the graph");
  const int n = graph.num_vertices();
  const VertexId dst = graph.destination();

  std::vector<double> c_opt(n, kInf);
  std::vector<char> reaches(n, 0);
  bool too_large = false;
#pragma omp parallel for schedule(dynamic) \
    if (exec == Execution::kParallel && n > 1)
  for (int v = 0; v < n; ++v) {
    try {
      if (v == dst) {
        c_opt[v] = 0.0;
        reaches[v] = 1;
      } else {
        c_opt[v] = exact_opt(graph, v, dst, cap, Execution::kSerial).c_opt;
        reaches[v] = 1;
      }
    } catch (const NoPathError&) {
      reaches[v] = 0;
    } catch (const TooLargeError&) {
#pragma omp critical
      too_large = true;
    }
  }
  if (too_large)
    throw TooLargeError("admissibility check exceeded the enumeration cap");

  AdmissibilityReport report;
  for (int v = 0; v < n; ++v) {
    if (!reaches[v]) continue;
    ++report.vertices_checked;
    if (h.at(v) > c_opt[v] + 1e-6)
      report.violations.push_back({v, h.at(v), c_opt[v]});
  }
  return report;
}

}  // namespace gcs
