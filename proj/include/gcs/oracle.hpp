#pragma once

#include <string>
#include <vector>

#include "gcs/graph.hpp"
#include "gcs/relaxation.hpp"

namespace gcs {

/// Enumeration cap. Oracle routines refuse instances whose simple-path
/// count exceeds it.
inline constexpr int kDefaultPathCap = 100000;

enum class Execution { kSerial, kParallel };

/// All simple directed paths src -> dst in lexicographic order. Throws
/// TooLargeError as soon as the count would exceed `cap`.
std::vector<std::vector<VertexId>> enumerate_paths(const GcsGraph& graph,
                                                   VertexId src, VertexId dst,
                                                   int cap = kDefaultPathCap);

/// Exhaustive optimum: the cheapest fixed-path optimization over every
/// simple path. Restricting to simple paths is lossless here because edge
/// costs are nonnegative, so revisiting a vertex cannot pay off: dropping
/// the cycle between the two visits and keeping the first visit's point
/// never increases the cost. The per-path programs are independent, so the
/// parallel mode fans them out across threads; the serial mode is the
/// reference the parallel one is tested against. Ties between equally
/// cheap paths resolve to the lexicographically smaller path.
struct ExactResult {
  double c_opt = kInf;
  FeasibleSolution solution;
};
ExactResult exact_opt(const GcsGraph& graph, VertexId src, VertexId dst,
                      int cap = kDefaultPathCap,
                      Execution exec = Execution::kParallel,
                      const RelaxOptions& opts = {});

/// Per-vertex admissibility audit against the exhaustive optimum.
struct AdmissibilityViolation {
  VertexId vertex;
  double h_value;
  double c_opt;
};
struct AdmissibilityReport {
  std::vector<AdmissibilityViolation> violations;
  int vertices_checked = 0;

  bool ok() const { return violations.empty(); }
  std::string to_json() const;
};
AdmissibilityReport check_admissible(const GcsGraph& graph,
                                     const HeuristicTable& h,
                                     int cap = kDefaultPathCap,
                                     Execution exec = Execution::kParallel);

}  // namespace gcs
