#include "gcs/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gcs/errors.hpp"

#include "json.hpp"

namespace gcs {

int SppStarIndex::edge_position(VertexId u, VertexId v) const {
  const auto it =
      std::lower_bound(edges.begin(), edges.end(), Edge{u, v});
  if (it == edges.end() || *it != Edge{u, v})
    throw InputError("edge not present in the restricted program");
  return static_cast<int>(it - edges.begin());
}

double RelaxedSolution::y_of(VertexId u, VertexId v) const {
  const auto it = std::lower_bound(edges.begin(), edges.end(), Edge{u, v});
  if (it == edges.end() || *it != Edge{u, v})
    throw InputError("edge not present in the relaxed solution");
  return y[it - edges.begin()];
}

std::string RelaxedSolution::to_json() const {
  nlohmann::ordered_json j;
  j["status"] = to_string(status);
  j["objective"] = optimal() ? objective : 0.0;
  if (!optimal()) j["objective"] = nullptr;
  nlohmann::ordered_json edge_y = nlohmann::ordered_json::array();
  for (size_t i = 0; i < edges.size(); ++i)
    edge_y.push_back({{"edge", {edges[i].first, edges[i].second}},
                      {"y", optimal() ? y[i] : 0.0}});
  j["edges"] = std::move(edge_y);
  nlohmann::ordered_json term = nlohmann::ordered_json::object();
  for (size_t i = 0; i < terminals.size(); ++i)
    term[std::to_string(terminals[i])] = optimal() ? alpha[i] : 0.0;
  j["alpha"] = std::move(term);
  j["cut_set"] = std::vector<VertexId>(S.begin(), S.end());
  j["terminal_set"] = std::vector<VertexId>(S_prime.begin(), S_prime.end());
  return j.dump(2);
}

void append_membership_rows(ConicProgram& program, const ConvexSet& set,
                            const std::vector<int>& x) {
  const int n = set.dimension();
  if (static_cast<int>(x.size()) != n)
    throw InputError("membership index count disagrees with set dimension");
  switch (set.kind()) {
    case SetKind::kPoint:
      for (int i = 0; i < n; ++i)
        program.set_bounds(x[i], set.point()[i], set.point()[i]);
      return;
    case SetKind::kSegment: {
      const int sigma = program.add_variable(0.0, 1.0);
      const Eigen::VectorXd& a = set.segment_a();
      const Eigen::VectorXd d = set.segment_b() - a;
      for (int i = 0; i < n; ++i) {
        LinearRow row;
        row.terms.emplace_back(x[i], 1.0);
        if (d[i] != 0.0) row.terms.emplace_back(sigma, -d[i]);
        row.rhs = a[i];
        program.add_equality(std::move(row));
      }
      return;
    }
    case SetKind::kBox:
      for (int i = 0; i < n; ++i)
        program.set_bounds(x[i], set.box_lo()[i], set.box_hi()[i]);
      return;
    case SetKind::kPolytope: {
      const auto& A = set.polytope_A();
      const auto& b = set.polytope_b();
      for (int i = 0; i < n; ++i)
        program.set_bounds(x[i], set.bbox_lo()[i], set.bbox_hi()[i]);
      for (int j = 0; j < A.rows(); ++j) {
        LinearRow row;
        for (int i = 0; i < n; ++i)
          if (A(j, i) != 0.0) row.terms.emplace_back(x[i], A(j, i));
        row.terms.emplace_back(program.add_variable(0.0, kInf), 1.0);
        row.rhs = b[j];
        program.add_equality(std::move(row));
      }
      return;
    }
  }
  throw InternalError("unknown set kind");
}

void append_perspective_rows(ConicProgram& program, const ConvexSet& set,
                             const std::vector<int>& z, int lambda_var) {
  const int n = set.dimension();
  if (static_cast<int>(z.size()) != n)
    throw InputError("perspective index count disagrees with set dimension");
  switch (set.kind()) {
    case SetKind::kPoint:
      // z == lambda * p
      for (int i = 0; i < n; ++i) {
        LinearRow row;
        row.terms.emplace_back(z[i], 1.0);
        if (set.point()[i] != 0.0)
          row.terms.emplace_back(lambda_var, -set.point()[i]);
        program.add_equality(std::move(row));
      }
      return;
    case SetKind::kSegment: {
      // z == lambda * a + sigma * (b - a), 0 <= sigma <= lambda
      const int sigma = program.add_variable(0.0, kInf);
      const Eigen::VectorXd& a = set.segment_a();
      const Eigen::VectorXd d = set.segment_b() - a;
      for (int i = 0; i < n; ++i) {
        LinearRow row;
        row.terms.emplace_back(z[i], 1.0);
        if (a[i] != 0.0) row.terms.emplace_back(lambda_var, -a[i]);
        if (d[i] != 0.0) row.terms.emplace_back(sigma, -d[i]);
        program.add_equality(std::move(row));
      }
      LinearRow cap;  // sigma + slack == lambda
      cap.terms.emplace_back(sigma, 1.0);
      cap.terms.emplace_back(program.add_variable(0.0, kInf), 1.0);
      cap.terms.emplace_back(lambda_var, -1.0);
      program.add_equality(std::move(cap));
      return;
    }
    case SetKind::kBox:
      // lambda * lo <= z <= lambda * hi
      for (int i = 0; i < n; ++i) {
        LinearRow lo;  // z - lambda*lo - slack == 0
        lo.terms.emplace_back(z[i], 1.0);
        if (set.box_lo()[i] != 0.0)
          lo.terms.emplace_back(lambda_var, -set.box_lo()[i]);
        lo.terms.emplace_back(program.add_variable(0.0, kInf), -1.0);
        program.add_equality(std::move(lo));
        LinearRow hi;  // lambda*hi - z - slack == 0
        if (set.box_hi()[i] != 0.0)
          hi.terms.emplace_back(lambda_var, set.box_hi()[i]);
        hi.terms.emplace_back(z[i], -1.0);
        hi.terms.emplace_back(program.add_variable(0.0, kInf), -1.0);
        program.add_equality(std::move(hi));
      }
      return;
    case SetKind::kPolytope: {
      // A z <= lambda * b; boundedness makes the recession direction zero,
      // so lambda == 0 forces z == 0.
      const auto& A = set.polytope_A();
      const auto& b = set.polytope_b();
      for (int j = 0; j < A.rows(); ++j) {
        LinearRow row;
        for (int i = 0; i < n; ++i)
          if (A(j, i) != 0.0) row.terms.emplace_back(z[i], A(j, i));
        if (b[j] != 0.0) row.terms.emplace_back(lambda_var, -b[j]);
        row.terms.emplace_back(program.add_variable(0.0, kInf), 1.0);
        program.add_equality(std::move(row));
      }
      return;
    }
  }
  throw InternalError("unknown set kind");
}

int append_distance_cone(ConicProgram& program, const std::vector<int>& a,
                         const std::vector<int>& b) {
  if (a.size() != b.size())
    throw InputError("distance cone index lists must have equal size");
  const int t = program.add_variable(-kInf, kInf, 1.0);
  std::vector<LinearRow> rows(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    rows[i].terms.emplace_back(a[i], 1.0);
    rows[i].terms.emplace_back(b[i], -1.0);
  }
  program.add_cone(t, std::move(rows));
  return t;
}

namespace {

std::vector<int> consecutive(int first, int count) {
  std::vector<int> ix(count);
  for (int i = 0; i < count; ++i) ix[i] = first + i;
  return ix;
}

void check_cut_inputs(const GcsGraph& graph, const VertexSet& S,
                      const VertexSet& S_prime, const HeuristicTable& h) {
  if (!S.count(graph.origin()))
    throw InputError("S must contain the origin");
  if (S.count(graph.destination()))
    throw InputError("S must exclude the destination");
  if (S_prime.empty()) throw InputError("terminal set must be non-empty");
  const VertexSet nbhd = neighborhood(graph, S);
  for (VertexId v : S_prime) {
    if (!nbhd.count(v))
      throw InputError("terminal " + std::to_string(v) +
                       " is outside the neighborhood of S");
    if (v >= static_cast<int>(h.values.size()) || std::isnan(h.at(v)))
      throw InputError("heuristic value missing for terminal " +
                       std::to_string(v));
  }
}

}  // namespace

SppStarProgram build_sppstar(const GcsGraph& graph, const VertexSet& S,
                             const VertexSet& S_prime,
                             const HeuristicTable& h) {
  check_cut_inputs(graph, S, S_prime, h);
  const int n = graph.dimension();

  SppStarProgram out;
  ConicProgram& prog = out.program;
  SppStarIndex& ix = out.index;

  // Restricted edges: tails in S, heads in S or S'.
  for (VertexId u : S) {
    for (VertexId v : graph.successors(u)) {
      if (S.count(v) || S_prime.count(v)) ix.edges.emplace_back(u, v);
    }
  }
  std::sort(ix.edges.begin(), ix.edges.end());
  const int ne = static_cast<int>(ix.edges.size());

  for (int e = 0; e < ne; ++e) {
    ix.y.push_back(prog.add_variable(0.0, 1.0));
    ix.z.push_back(prog.add_variables(n));
    ix.z_prime.push_back(prog.add_variables(n));
  }
  ix.terminals.assign(S_prime.begin(), S_prime.end());
  for (VertexId v : ix.terminals) {
    const int a = prog.add_variable(0.0, 1.0);
    prog.set_cost(a, h.at(v));
    ix.alpha.push_back(a);
  }

  // Edge length epigraphs.
  for (int e = 0; e < ne; ++e)
    ix.t.push_back(append_distance_cone(prog, consecutive(ix.z[e], n),
                                        consecutive(ix.z_prime[e], n)));

  // Perspective constraints tie both endpoint variables of an edge to its
  // activation.
  ix.num_segment_aux = 0;
  for (int e = 0; e < ne; ++e) {
    const auto [u, v] = ix.edges[e];
    append_perspective_rows(prog, graph.set(u), consecutive(ix.z[e], n),
                            ix.y[e]);
    append_perspective_rows(prog, graph.set(v), consecutive(ix.z_prime[e], n),
                            ix.y[e]);
    if (graph.set(u).kind() == SetKind::kSegment) ++ix.num_segment_aux;
    if (graph.set(v).kind() == SetKind::kSegment) ++ix.num_segment_aux;
  }

  // Exactly one terminal.
  {
    LinearRow row;
    for (int a : ix.alpha) row.terms.emplace_back(a, 1.0);
    row.rhs = 1.0;
    prog.add_equality(std::move(row));
  }
  // One unit of activation leaves the origin. Flow returning into the
  // origin is deliberately unconstrained.
  {
    LinearRow row;
    for (int e = 0; e < ne; ++e)
      if (ix.edges[e].first == graph.origin())
        row.terms.emplace_back(ix.y[e], 1.0);
    row.rhs = 1.0;
    prog.add_equality(std::move(row));
  }
  // Terminal degree: incoming activation equals the selector.
  for (size_t k = 0; k < ix.terminals.size(); ++k) {
    LinearRow row;
    for (int e = 0; e < ne; ++e)
      if (ix.edges[e].second == ix.terminals[k])
        row.terms.emplace_back(ix.y[e], 1.0);
    row.terms.emplace_back(ix.alpha[k], -1.0);
    prog.add_equality(std::move(row));
  }
  // Conservation of (z', y) against (z, y) at interior vertices.
  for (VertexId v : S) {
    if (v == graph.origin()) continue;
    for (int coord = 0; coord <= n; ++coord) {
      LinearRow row;
      for (int e = 0; e < ne; ++e) {
        if (ix.edges[e].second == v)
          row.terms.emplace_back(
              coord < n ? ix.z_prime[e] + coord : ix.y[e], 1.0);
        if (ix.edges[e].first == v)
          row.terms.emplace_back(coord < n ? ix.z[e] + coord : ix.y[e], -1.0);
      }
      if (!row.terms.empty()) prog.add_equality(std::move(row));
    }
  }
  return out;
}

namespace {

RelaxedSolution extract_relaxed(const GcsGraph& graph,
                                const SppStarProgram& built,
                                const ConicSolution& sol, const VertexSet& S,
                                const VertexSet& S_prime) {
  const int n = graph.dimension();
  RelaxedSolution out;
  out.status = sol.status;
  out.S = S;
  out.S_prime = S_prime;
  out.edges = built.index.edges;
  out.terminals = built.index.terminals;
  out.wall_seconds = sol.wall_seconds;
  if (!sol.optimal()) {
    out.objective = kInf;
    return out;
  }
  out.objective = sol.objective;
  const auto& ix = built.index;
  for (size_t e = 0; e < ix.edges.size(); ++e) {
    out.y.push_back(sol.values[ix.y[e]]);
    Eigen::VectorXd z(n), zp(n);
    for (int i = 0; i < n; ++i) {
      z[i] = sol.values[ix.z[e] + i];
      zp[i] = sol.values[ix.z_prime[e] + i];
    }
    out.z.push_back(std::move(z));
    out.z_prime.push_back(std::move(zp));
  }
  for (size_t k = 0; k < ix.terminals.size(); ++k)
    out.alpha.push_back(sol.values[ix.alpha[k]]);
  return out;
}

}  // namespace

RelaxedSolution solve_sppstar(const GcsGraph& graph, const VertexSet& S,
                              const VertexSet& S_prime,
                              const HeuristicTable& h,
                              const RelaxOptions& opts) {
  const SppStarProgram built = build_sppstar(graph, S, S_prime, h);
  const ConicBackend& backend =
      opts.backend ? *opts.backend : native_backend();
  const ConicSolution sol = backend.solve(built.program, opts.accuracy);
  return extract_relaxed(graph, built, sol, S, S_prime);
}

FeasibleSolution solve_fixed_path(const GcsGraph& graph,
                                  const std::vector<VertexId>& path,
                                  const RelaxOptions& opts) {
  if (path.empty()) throw InputError("path must be non-empty");
  const int n = graph.dimension();
  for (size_t i = 0; i < path.size(); ++i) {
    if (path[i] < 0 || path[i] >= graph.num_vertices())
      throw InputError("path vertex out of range");
    if (i + 1 < path.size() && !graph.has_edge(path[i], path[i + 1]))
      throw InputError("path uses a missing edge " +
                       std::to_string(path[i]) + "->" +
                       std::to_string(path[i + 1]));
  }
  FeasibleSolution out;
  out.path = path;
  if (path.size() == 1) {
    out.points.push_back(centroid(graph.set(path[0])));
    out.cost = 0.0;
    return out;
  }

  ConicProgram prog;
  std::vector<std::vector<int>> x(path.size());
  for (size_t i = 0; i < path.size(); ++i) {
    x[i] = consecutive(prog.add_variables(n), n);
    append_membership_rows(prog, graph.set(path[i]), x[i]);
  }
  for (size_t i = 0; i + 1 < path.size(); ++i)
    append_distance_cone(prog, x[i], x[i + 1]);

  const ConicBackend& backend =
      opts.backend ? *opts.backend : native_backend();
  const ConicSolution sol = backend.solve(prog, opts.accuracy);
  if (!sol.optimal())
    throw InternalError("fixed-path program did not solve to optimality");
  double cost = 0.0;
  for (size_t i = 0; i < path.size(); ++i) {
    Eigen::VectorXd pt(n);
    for (int j = 0; j < n; ++j) pt[j] = sol.values[x[i][j]];
    out.points.push_back(std::move(pt));
  }
  for (size_t i = 0; i + 1 < path.size(); ++i)
    cost += (out.points[i] - out.points[i + 1]).norm();
  out.cost = cost;
  return out;
}

}  // namespace gcs
