#include "gcs/astar_gcs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "gcs/errors.hpp"
#include "gcs/heuristics.hpp"
#include "gcs/rng.hpp"

#include "json.hpp"

namespace gcs {

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

nlohmann::ordered_json feasible_to_json(const FeasibleSolution& f) {
  nlohmann::ordered_json j;
  j["path"] = f.path;
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& p : f.points)
    pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  j["points"] = std::move(pts);
  j["cost"] = f.cost;
  return j;
}

nlohmann::ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kBoundTest:
      return "bound-test";
    case Termination::kFrontierExhausted:
      return "frontier-exhausted";
    case Termination::kIterationCap:
      return "iteration-cap";
    case Termination::kPreempted:
      return "preempted";
    case Termination::kAborted:
      return "aborted";
  }
  return "?";
}

std::optional<double> RunResult::gap_percent() const {
  if (!best_feasible || !(c_lb > 0.0)) return std::nullopt;
  return optimality_gap(best_feasible->cost, c_lb);
}

std::string RunResult::to_json() const {
  nlohmann::ordered_json j;
  j["c_lb"] = c_lb;
  j["feasible"] =
      best_feasible ? feasible_to_json(*best_feasible)
                    : nlohmann::ordered_json(nullptr);
  const auto gap = gap_percent();
  j["gap_pct"] = gap ? nlohmann::ordered_json(*gap)
                     : nlohmann::ordered_json(nullptr);
  j["termination"] = to_string(termination);
  j["iterations"] = growth_iterations;
  j["cut_set"] = std::vector<VertexId>(final_cut_set.begin(),
                                       final_cut_set.end());
  nlohmann::ordered_json tr = nlohmann::ordered_json::array();
  for (const auto& r : trace) {
    nlohmann::ordered_json row;
    row["iter"] = r.iter;
    row["phase"] = r.phase;
    row["S_size"] = r.cut_size;
    row["Sprime_size"] = r.frontier_size;
    row["R_star_frontier"] = finite_or_null(r.r_star_frontier);
    row["R_star_dest"] = finite_or_null(r.r_star_dest);
    row["C_lb"] = r.c_lb;
    row["C_f"] = finite_or_null(r.feasible_cost);
    row["millis"] = r.millis;
    tr.push_back(std::move(row));
  }
  j["trace"] = std::move(tr);
  j["wall_millis"] = wall_millis;
  return j.dump(2);
}

void write_trace_csv(std::ostream& out, const RunResult& result) {
  out << "iter,phase,S_size,Sprime_size,R_star_frontier,R_star_dest,C_lb,"
         "C_f,millis\n";
  auto num = [](double v) -> std::string {
    if (!std::isfinite(v)) return "inf";
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
  };
  for (const auto& r : result.trace) {
    out << r.iter << ',' << r.phase << ',' << r.cut_size << ','
        << r.frontier_size << ',' << num(r.r_star_frontier) << ','
        << num(r.r_star_dest) << ',' << num(r.c_lb) << ','
        << num(r.feasible_cost) << ',' << r.millis << '\n';
  }
}

double optimality_gap(double c_f, double c_lb) {
  if (!(c_lb > 0.0)) throw InputError("optimality gap undefined for C_lb <= 0");
  if (c_f < c_lb - 1e-6)
    throw InputError("feasible cost below the lower bound");
  if (std::fabs(c_f - c_lb) <= 1e-9) return 0.0;
  return 100.0 * (c_f - c_lb) / c_lb;
}

VertexSet update_subset(const VertexSet& S, const VertexSet& S_prime,
                        const RelaxedSolution& sol, double eps_y) {
  if (!sol.optimal())
    throw InputError("update_subset requires an optimal relaxation");
  VertexSet grown = S;
  bool grew = false;
  for (size_t e = 0; e < sol.edges.size(); ++e) {
    const auto& [u, v] = sol.edges[e];
    if (sol.y[e] > eps_y && S.count(u) && S_prime.count(v)) {
      grew |= grown.insert(v).second;
    }
  }
  if (!grew && std::isfinite(sol.objective))
    throw InternalError(
        "finite relaxation produced no growth; activation threshold and "
        "solver accuracy are inconsistent");
  return grown;
}

std::optional<FeasibleSolution> update_feasible(
    std::optional<FeasibleSolution> current,
    std::optional<FeasibleSolution> candidate) {
  if (!candidate) return current;
  if (!current || candidate->cost < current->cost) return candidate;
  return current;
}

namespace {

struct FlowAdjacency {
  // per tail vertex: (head, activation), heads ascending
  std::map<VertexId, std::vector<std::pair<VertexId, double>>> out;
};

FlowAdjacency flow_adjacency(const RelaxedSolution& sol) {
  FlowAdjacency adj;
  for (size_t e = 0; e < sol.edges.size(); ++e)
    adj.out[sol.edges[e].first].emplace_back(sol.edges[e].second, sol.y[e]);
  return adj;
}

std::optional<std::vector<VertexId>> greedy_walk(const FlowAdjacency& adj,
                                                 VertexId src, VertexId dst,
                                                 int max_steps) {
  std::set<VertexId> visited{src};
  std::vector<VertexId> path{src};
  VertexId u = src;
  for (int step = 0; step < max_steps; ++step) {
    const auto it = adj.out.find(u);
    if (it == adj.out.end()) return std::nullopt;
    VertexId best = -1;
    double best_y = 0.0;
    for (const auto& [v, yv] : it->second) {
      if (visited.count(v)) continue;
      if (yv > best_y) {  // ties keep the lowest head id
        best_y = yv;
        best = v;
      }
    }
    if (best < 0) return std::nullopt;
    path.push_back(best);
    visited.insert(best);
    if (best == dst) return path;
    u = best;
  }
  return std::nullopt;
}

std::optional<std::vector<VertexId>> sampled_walk(const FlowAdjacency& adj,
                                                  VertexId src, VertexId dst,
                                                  int max_steps,
                                                  SplitMix64& rng) {
  std::set<VertexId> visited{src};
  std::vector<VertexId> path{src};
  VertexId u = src;
  for (int step = 0; step < max_steps; ++step) {
    const auto it = adj.out.find(u);
    if (it == adj.out.end()) return std::nullopt;
    double total = 0.0;
    for (const auto& [v, yv] : it->second)
      if (!visited.count(v) && yv > 0.0) total += yv;
    if (total <= 0.0) return std::nullopt;
    const double pick = rng.uniform() * total;
    double acc = 0.0;
    VertexId chosen = -1;
    for (const auto& [v, yv] : it->second) {
      if (visited.count(v) || yv <= 0.0) continue;
      acc += yv;
      chosen = v;
      if (acc >= pick) break;
    }
    path.push_back(chosen);
    visited.insert(chosen);
    if (chosen == dst) return path;
    u = chosen;
  }
  return std::nullopt;
}

/// Completes candidate paths with fixed-path programs (independent solves,
/// fanned out across threads) and keeps the cheapest result.
std::optional<FeasibleSolution> cheapest_completion(
    const GcsGraph& graph, const std::set<std::vector<VertexId>>& candidates,
    const RelaxOptions& opts) {
  const std::vector<std::vector<VertexId>> paths(candidates.begin(),
                                                 candidates.end());
  std::vector<std::optional<FeasibleSolution>> solved(paths.size());
#pragma omp parallel for schedule(dynamic) if (paths.size() > 1)
  for (int i = 0; i < static_cast<int>(paths.size()); ++i) {
    try {
      solved[i] = solve_fixed_path(graph, paths[i], opts);
    } catch (const Error&) {
      solved[i] = std::nullopt;
    }
  }
  std::optional<FeasibleSolution> best;
  for (auto& s : solved) best = update_feasible(std::move(best), std::move(s));
  return best;
}

}  // namespace

std::optional<FeasibleSolution> extract_feasible(const GcsGraph& graph,
                                                 const RelaxedSolution& sol,
                                                 Rounding mode, int samples,
                                                 std::uint64_t seed,
                                                 const RelaxOptions& opts) {
  if (sol.S_prime != VertexSet{graph.destination()})
    throw InputError("extract_feasible requires a destination relaxation");
  if (!sol.optimal() || !std::isfinite(sol.objective)) return std::nullopt;

  const FlowAdjacency adj = flow_adjacency(sol);
  const int max_steps = graph.num_vertices() + 1;
  std::set<std::vector<VertexId>> candidates;
  if (mode == Rounding::kGreedy) {
    if (auto p = greedy_walk(adj, graph.origin(), graph.destination(),
                             max_steps))
      candidates.insert(std::move(*p));
  } else {
    SplitMix64 rng(seed);
    for (int k = 0; k < samples; ++k) {
      if (auto p = sampled_walk(adj, graph.origin(), graph.destination(),
                                max_steps, rng))
        candidates.insert(std::move(*p));
    }
  }
  if (candidates.empty()) return std::nullopt;
  return cheapest_completion(graph, candidates, opts);
}

FeasibleSolution two_step_feasible(const GcsGraph& graph,
                                   const HeuristicTable& h,
                                   const RelaxOptions& opts) {
  const AstarResult astar = classic_astar(graph, centroid_points(graph), h);
  return solve_fixed_path(graph, astar.path, opts);
}

namespace {

/// Shared rounding policy of the driver: greedy walk, a batch of sampled
/// walks, cheapest completion wins.
std::optional<FeasibleSolution> round_destination_solution(
    const GcsGraph& graph, const RelaxedSolution& r_dest,
    const RunOptions& opts) {
  if (!r_dest.optimal()) return std::nullopt;
  std::optional<FeasibleSolution> best;
  if (opts.greedy_rounding)
    best = update_feasible(
        std::move(best), extract_feasible(graph, r_dest, Rounding::kGreedy, 0,
                                          opts.seed, opts.relax));
  if (opts.sampled_walks > 0)
    best = update_feasible(
        std::move(best),
        extract_feasible(graph, r_dest, Rounding::kSampled,
                         opts.sampled_walks, opts.seed, opts.relax));
  return best;
}

}  // namespace

RunResult run_astar_gcs(const GcsGraph& graph, const HeuristicTable& h,
                        const VertexSet& S_init, const RunOptions& opts) {
  if (opts.max_iters < 1) throw InputError("max_iters must be at least 1");
  CutState::make(graph, S_init);  // validates the cut property
  const auto t_start = Clock::now();
  const VertexId dest = graph.destination();
  const int structural_cap = graph.num_vertices() - 1;

  RunResult res;
  VertexSet S = S_init;
  double c_lb = 0.0;
  std::optional<FeasibleSolution> best;
  int iters = 0;  // growth iterations, both phases
  bool stopped = false;

  const SubsetUpdatePolicy grow_policy =
      opts.subset_update
          ? opts.subset_update
          : SubsetUpdatePolicy([](const VertexSet& s, const VertexSet& sp,
                                  const RelaxedSolution& sol, double eps) {
              return update_subset(s, sp, sol, eps);
            });

  auto lb_update = [&](double value) {
    if (std::isfinite(value)) c_lb = std::max(c_lb, value);
  };
  auto feasible_cost = [&]() { return best ? best->cost : kInf; };
  auto record = [&](int phase, int cut, int frontier, double r_front,
                    double r_dest, double millis) {
    res.trace.push_back({static_cast<int>(res.trace.size()) + 1, phase, cut,
                         frontier, r_front, r_dest, c_lb, feasible_cost(),
                         millis});
  };

  // Phase 1: grow until the destination joins the neighborhood. Bounds
  // come from the frontier relaxation alone; no feasible solution can be
  // extracted yet.
  while (true) {
    const VertexSet frontier = neighborhood(graph, S);
    if (frontier.count(dest)) break;
    if (frontier.empty()) {
      res.termination = Termination::kAborted;  // unreachable destination
      stopped = true;
      break;
    }
    if (iters >= opts.max_iters) {
      res.termination = Termination::kPreempted;
      stopped = true;
      break;
    }
    if (iters >= structural_cap) {
      res.termination = Termination::kIterationCap;
      stopped = true;
      break;
    }
    const auto t0 = Clock::now();
    const RelaxedSolution sol =
        solve_sppstar(graph, S, frontier, h, opts.relax);
    if (!sol.optimal()) {
      res.termination = Termination::kAborted;
      stopped = true;
      break;
    }
    lb_update(sol.objective);
    VertexSet grown = grow_policy(S, frontier, sol, opts.eps_y);
    ++iters;
    record(1, static_cast<int>(S.size()), static_cast<int>(frontier.size()),
           sol.objective, kInf, millis_since(t0));
    S = std::move(grown);
  }

  if (!stopped) {
    // Phase 2 entry: destination relaxation, rounding, and the
    // centroid-path upper bound. Folded into the first loop record.
    auto t0 = Clock::now();
    if (opts.two_step) {
      try {
        best = update_feasible(std::move(best),
                               two_step_feasible(graph, h, opts.relax));
      } catch (const NoPathError&) {
        // leave the upper bound open
      }
    }
    RelaxedSolution r_dest =
        solve_sppstar(graph, S, VertexSet{dest}, h, opts.relax);
    if (r_dest.status == SolveStatus::kNumericalFailure) {
      res.termination = Termination::kAborted;
      stopped = true;
    } else {
      best = update_feasible(std::move(best),
                             round_destination_solution(graph, r_dest, opts));
    }

    while (!stopped) {
      VertexSet frontier = neighborhood(graph, S);
      frontier.erase(dest);
      if (frontier.empty()) {
        // The neighborhood is exactly {d}: the destination relaxation
        // alone certifies the bound.
        lb_update(r_dest.objective);
        record(2, static_cast<int>(S.size()), 1, r_dest.objective,
               r_dest.objective, millis_since(t0));
        res.termination = Termination::kFrontierExhausted;
        break;
      }
      if (iters >= opts.max_iters) {
        res.termination = Termination::kPreempted;
        break;
      }
      if (iters >= structural_cap) {
        res.termination = Termination::kIterationCap;
        break;
      }
      const int cut_size = static_cast<int>(S.size());
      const RelaxedSolution frontier_sol =
          solve_sppstar(graph, S, frontier, h, opts.relax);
      if (frontier_sol.status == SolveStatus::kNumericalFailure) {
        res.termination = Termination::kAborted;
        break;
      }
      lb_update(std::min(frontier_sol.objective, r_dest.objective));
      ++iters;
      if (frontier_sol.objective >= r_dest.objective - 1e-9) {
        record(2, cut_size, static_cast<int>(frontier.size()),
               frontier_sol.objective, r_dest.objective, millis_since(t0));
        res.termination = Termination::kBoundTest;
        break;
      }
      S = grow_policy(S, frontier, frontier_sol, opts.eps_y);
      record(2, cut_size, static_cast<int>(frontier.size()),
             frontier_sol.objective, r_dest.objective, millis_since(t0));
      // The refreshed destination relaxation belongs to the grown cut-set;
      // its time and rounding are charged to the next record.
      t0 = Clock::now();
      r_dest = solve_sppstar(graph, S, VertexSet{dest}, h, opts.relax);
      if (r_dest.status == SolveStatus::kNumericalFailure) {
        res.termination = Termination::kAborted;
        break;
      }
      best = update_feasible(std::move(best),
                             round_destination_solution(graph, r_dest, opts));
    }
  }

  res.c_lb = c_lb;
  res.best_feasible = std::move(best);
  res.final_cut_set = std::move(S);
  res.growth_iterations = iters;
  res.wall_millis = millis_since(t_start);
  if (res.trace.empty()) {
    record(1, static_cast<int>(res.final_cut_set.size()), 0, kInf, kInf,
           res.wall_millis);
  }
  return res;
}

RunResult run_baseline(const GcsGraph& graph, const RunOptions& opts) {
  VertexSet S;
  for (int v = 0; v < graph.num_vertices(); ++v)
    if (v != graph.destination()) S.insert(v);
  return run_astar_gcs(graph, HeuristicTable::zeros(graph.num_vertices()), S,
                       opts);
}

}  // namespace gcs
