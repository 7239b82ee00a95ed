#include "gcs/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "gcs/astar_gcs.hpp"
#include "gcs/errors.hpp"

namespace gcs {

HeuristicTable h1_table(const GcsGraph& graph) {
  HeuristicTable table;
  table.values.resize(graph.num_vertices());
  const ConvexSet& dest = graph.set(graph.destination());
  for (int v = 0; v < graph.num_vertices(); ++v)
    table.values[v] = set_distance(graph.set(v), dest);
  table.values[graph.destination()] = 0.0;
  return table;
}

HeuristicTable blend(const HeuristicTable& h1, const HeuristicTable& h2,
                     double w) {
  if (w < 0.0 || w > 1.0)
    throw InputError("blend weight must lie in [0, 1]");
  if (h1.values.size() != h2.values.size())
    throw InputError("blend requires tables over the same vertices");
  HeuristicTable out;
  out.values.resize(h1.values.size());
  for (size_t v = 0; v < h1.values.size(); ++v)
    out.values[v] = (1.0 - w) * h1.values[v] + w * h2.values[v];
  return out;
}

std::vector<Eigen::VectorXd> centroid_points(const GcsGraph& graph) {
  std::vector<Eigen::VectorXd> points;
  points.reserve(graph.num_vertices());
  for (int v = 0; v < graph.num_vertices(); ++v)
    points.push_back(centroid(graph.set(v)));
  return points;
}

AstarResult classic_astar(const GcsGraph& graph,
                          const std::vector<Eigen::VectorXd>& points,
                          const HeuristicTable& h) {
  const int n = graph.num_vertices();
  if (static_cast<int>(points.size()) != n)
    throw InputError("one representative point per vertex required");
  if (static_cast<int>(h.values.size()) < n)
    throw InputError("heuristic table does not cover the graph");

  const VertexId src = graph.origin();
  const VertexId dst = graph.destination();
  std::vector<double> g(n, kInf);
  std::vector<VertexId> parent(n, -1);
  std::vector<char> expanded(n, 0);

  // (f, g, id); lowest f wins, then lowest g, then lowest id. Entries go
  // stale when a cheaper g is found; stale pops are skipped. Re-pushing an
  // expanded vertex on a strict improvement keeps the search optimal under
  // inconsistent heuristics.
  using Entry = std::tuple<double, double, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  g[src] = 0.0;
  open.emplace(h.at(src), 0.0, src);

  AstarResult res;
  bool found = false;
  while (!open.empty()) {
    const auto [f, gv, v] = open.top();
    open.pop();
    if (gv > g[v]) continue;  // stale
    (void)f;
    if (!expanded[v]) {
      expanded[v] = 1;
      res.closed_order.push_back(v);
    }
    if (v == dst) {
      found = true;
      break;
    }
    for (VertexId w : graph.successors(v)) {
      const double gw = gv + (points[v] - points[w]).norm();
      if (gw < g[w]) {
        g[w] = gw;
        parent[w] = v;
        open.emplace(gw + h.at(w), gw, w);
      }
    }
  }
  if (!found) throw NoPathError("destination unreachable in A*");

  res.cost = g[dst];
  for (VertexId v = dst; v != -1; v = parent[v]) res.path.push_back(v);
  std::reverse(res.path.begin(), res.path.end());
  return res;
}

VertexSet sinit_from_astar(const GcsGraph& graph, const HeuristicTable& h) {
  const AstarResult res = classic_astar(graph, centroid_points(graph), h);
  VertexSet S(res.closed_order.begin(), res.closed_order.end());
  S.erase(graph.destination());
  return S;
}

namespace {

std::vector<int> consecutive(int first, int count) {
  std::vector<int> ix(count);
  for (int i = 0; i < count; ++i) ix[i] = first + i;
  return ix;
}

struct ExpandRound {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double objective = kInf;
  std::vector<Edge> edges;
  std::vector<double> y;
};

/// One expand-and-freeze round: a relaxation on the reverse graph whose
/// unit of flow originates at an epoch-seed vertex (the destination at
/// first, the collapsed boundary later), pays that seed's frozen value as
/// an entry cost, routes through the active core with full conservation,
/// and ends at a frontier terminal paying that terminal's value (zero for
/// never-frozen terminals). The objective therefore already carries the
/// frozen offsets, so it underestimates the true cost-to-destination of
/// every vertex outside the core. Restricting the sources to the epoch
/// seed matters for quality: if freshly frozen vertices could originate
/// flow, each round would decouple into one-hop set distances and the
/// estimate would collapse toward a sum of per-edge minima.
ExpandRound solve_expand_round(const GcsGraph& rgraph, const VertexSet& core,
                               const VertexSet& seed_sources,
                               const std::vector<VertexId>& terminals,
                               const std::vector<double>& frozen_value,
                               const std::vector<char>& frozen,
                               const RelaxOptions& opts) {
  const int n = rgraph.dimension();
  ConicProgram prog;

  std::vector<Edge> edges;
  const VertexSet term_set(terminals.begin(), terminals.end());
  for (VertexId u : core)
    for (VertexId v : rgraph.successors(u))
      if (core.count(v) || term_set.count(v)) edges.emplace_back(u, v);
  std::sort(edges.begin(), edges.end());
  const int ne = static_cast<int>(edges.size());

  std::vector<int> y(ne), z(ne), zp(ne);
  for (int e = 0; e < ne; ++e) {
    y[e] = prog.add_variable(0.0, 1.0);
    z[e] = prog.add_variables(n);
    zp[e] = prog.add_variables(n);
  }
  std::vector<int> alpha(terminals.size());
  for (size_t k = 0; k < terminals.size(); ++k) {
    alpha[k] = prog.add_variable(0.0, 1.0);
    prog.set_cost(alpha[k],
                  frozen[terminals[k]] ? frozen_value[terminals[k]] : 0.0);
  }
  std::vector<VertexId> sources(seed_sources.begin(), seed_sources.end());
  std::vector<int> beta_of(rgraph.num_vertices(), -1);
  std::vector<int> wsrc_of(rgraph.num_vertices(), -1);
  for (VertexId f : sources) {
    beta_of[f] = prog.add_variable(0.0, 1.0);
    prog.set_cost(beta_of[f], frozen_value[f]);
    wsrc_of[f] = prog.add_variables(n);
  }

  for (int e = 0; e < ne; ++e)
    append_distance_cone(prog, consecutive(z[e], n), consecutive(zp[e], n));
  for (int e = 0; e < ne; ++e) {
    append_perspective_rows(prog, rgraph.set(edges[e].first),
                            consecutive(z[e], n), y[e]);
    append_perspective_rows(prog, rgraph.set(edges[e].second),
                            consecutive(zp[e], n), y[e]);
  }
  for (VertexId f : sources)
    append_perspective_rows(prog, rgraph.set(f),
                            consecutive(wsrc_of[f], n), beta_of[f]);

  {
    LinearRow row;  // sum beta == 1
    for (VertexId f : sources) row.terms.emplace_back(beta_of[f], 1.0);
    row.rhs = 1.0;
    prog.add_equality(std::move(row));
  }
  {
    LinearRow row;  // sum alpha == 1
    for (int a : alpha) row.terms.emplace_back(a, 1.0);
    row.rhs = 1.0;
    prog.add_equality(std::move(row));
  }
  for (size_t k = 0; k < terminals.size(); ++k) {
    LinearRow row;
    for (int e = 0; e < ne; ++e)
      if (edges[e].second == terminals[k])
        row.terms.emplace_back(y[e], 1.0);
    row.terms.emplace_back(alpha[k], -1.0);
    prog.add_equality(std::move(row));
  }
  // Conservation at every core vertex, with a source injection term at
  // the epoch seeds: outgoing (z, y) == incoming (z', y) + (w_f, beta_f).
  for (VertexId f : core) {
    for (int coord = 0; coord <= n; ++coord) {
      LinearRow row;
      for (int e = 0; e < ne; ++e) {
        if (edges[e].first == f)
          row.terms.emplace_back(coord < n ? z[e] + coord : y[e], 1.0);
        if (edges[e].second == f)
          row.terms.emplace_back(coord < n ? zp[e] + coord : y[e], -1.0);
      }
      if (beta_of[f] >= 0)
        row.terms.emplace_back(coord < n ? wsrc_of[f] + coord : beta_of[f],
                               -1.0);
      if (!row.terms.empty()) prog.add_equality(std::move(row));
    }
  }

  const ConicBackend& backend =
      opts.backend ? *opts.backend : native_backend();
  const ConicSolution sol = backend.solve(prog, opts.accuracy);
  ExpandRound out;
  out.status = sol.status;
  out.edges = std::move(edges);
  if (sol.optimal()) {
    out.objective = sol.objective;
    out.y.resize(ne);
    for (int e = 0; e < ne; ++e) out.y[e] = sol.values[y[e]];
  }
  return out;
}

std::vector<VertexId> incident_terminals(const ExpandRound& round,
                                         const std::vector<VertexId>& terminals,
                                         double eps_y) {
  VertexSet hit;
  for (size_t e = 0; e < round.edges.size(); ++e)
    if (round.y[e] > eps_y) hit.insert(round.edges[e].second);
  std::vector<VertexId> out;
  for (VertexId v : terminals)
    if (hit.count(v)) out.push_back(v);
  return out;
}

}  // namespace

HeuristicTable h2_expand_freeze(const GcsGraph& graph, int n_max,
                                const RelaxOptions& opts) {
  if (n_max < 2) throw InputError("n_max must be at least 2");
  const GcsGraph rgraph = reverse(graph);
  const VertexId dest = graph.destination();
  const int nv = graph.num_vertices();

  std::vector<double> value(nv, 0.0);
  std::vector<char> frozen(nv, 0);
  frozen[dest] = 1;
  VertexSet core{dest};
  VertexSet seed_sources{dest};

  const int round_cap = 2 * nv + 16;
  for (int round = 0; round < round_cap; ++round) {
    const VertexSet frontier = neighborhood(rgraph, core);
    std::vector<VertexId> terminals(frontier.begin(), frontier.end());
    const bool any_unfrozen =
        std::any_of(terminals.begin(), terminals.end(),
                    [&](VertexId v) { return !frozen[v]; });
    if (!any_unfrozen) break;

    ExpandRound sol = solve_expand_round(rgraph, core, seed_sources,
                                         terminals, value, frozen, opts);
    if (sol.status != SolveStatus::kOptimal) break;

    std::vector<VertexId> hit =
        incident_terminals(sol, terminals, kGrowthEps);
    bool any_fresh = std::any_of(hit.begin(), hit.end(),
                                 [&](VertexId v) { return !frozen[v]; });
    if (!any_fresh) {
      // All activation went to already-frozen frontier vertices. Re-solve
      // against the never-frozen frontier alone so the sweep advances.
      std::vector<VertexId> unfrozen_terminals;
      for (VertexId v : terminals)
        if (!frozen[v]) unfrozen_terminals.push_back(v);
      sol = solve_expand_round(rgraph, core, seed_sources,
                               unfrozen_terminals, value, frozen, opts);
      if (sol.status != SolveStatus::kOptimal) break;
      hit = incident_terminals(sol, unfrozen_terminals, kGrowthEps);
      any_fresh = !hit.empty();
      if (!any_fresh) break;
    }

    for (VertexId v : hit) {
      if (!frozen[v]) {
        value[v] = sol.objective;
        frozen[v] = 1;
      }
      core.insert(v);
    }
    if (static_cast<int>(core.size()) >= n_max) {
      // Collapse: shrink the core to the frozen vertices that still border
      // never-frozen territory. Their values carry the collapsed region
      // into the next epoch as source offsets.
      VertexSet boundary;
      for (VertexId f = 0; f < nv; ++f) {
        if (!frozen[f]) continue;
        for (VertexId w : rgraph.successors(f)) {
          if (!frozen[w]) {
            boundary.insert(f);
            break;
          }
        }
      }
      if (boundary.empty()) break;
      core = boundary;
      seed_sources = std::move(boundary);
    }
  }

  value[dest] = 0.0;
  return HeuristicTable{std::move(value)};
}

}  // namespace gcs
