// Command-line front end: instance generation, heuristic construction,
// solving, exhaustive oracle runs, benchmark sweeps and SVG rendering.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gcs/astar_gcs.hpp"
#include "gcs/errors.hpp"
#include "gcs/heuristics.hpp"
#include "gcs/instances.hpp"
#include "gcs/oracle.hpp"
#include "gcs/plot.hpp"
#include "gcs/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#ifndef GCS_VERSION
#define GCS_VERSION "untracked"
#endif

namespace {

using gcs::HeuristicTable;
using gcs::Instance;
using gcs::RunOptions;
using gcs::RunResult;
using gcs::VertexId;
using OrderedJson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr int kExitUserError = 1;
constexpr int kExitNoPath = 2;
constexpr int kExitInternal = 3;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gcs::InputError("cannot open " + path + " for writing");
  out << content;
}

/// Builds the blended heuristic for a weight; h2 is only constructed when
/// the weight asks for it.
HeuristicTable build_heuristic(const gcs::GcsGraph& graph, double weight,
                               int n_max, double* h2_millis = nullptr) {
  const HeuristicTable h1 = gcs::h1_table(graph);
  if (weight <= 0.0) return h1;
  const auto t0 = Clock::now();
  const HeuristicTable h2 = gcs::h2_expand_freeze(graph, n_max);
  if (h2_millis) *h2_millis = millis_since(t0);
  return gcs::blend(h1, h2, weight);
}

struct SolveFlags {
  std::string algo = "astar-gcs";
  std::string sinit = "astar";
  double weight = 0.0;
  int n_max = gcs::kDefaultNMax;
  std::string heuristic_file;
  int max_iters = 1 << 30;
  std::uint64_t seed = 0;
  int samples = 16;
  double accuracy = gcs::kDefaultAccuracy;
};

HeuristicTable resolve_heuristic(const Instance& inst,
                                 const SolveFlags& flags) {
  if (!flags.heuristic_file.empty()) {
    const auto file =
        gcs::load_heuristic(flags.heuristic_file, inst.graph.num_vertices());
    for (double v : file.table.values)
      if (std::isnan(v))
        throw gcs::InputError(flags.heuristic_file +
                              ": table does not cover every vertex");
    return file.table;
  }
  return build_heuristic(inst.graph, flags.weight, flags.n_max);
}

RunResult execute_solve(const Instance& inst, const HeuristicTable& h,
                        const SolveFlags& flags) {
  RunOptions opts;
  opts.max_iters = flags.max_iters;
  opts.seed = flags.seed;
  opts.sampled_walks = flags.samples;
  opts.relax.accuracy = flags.accuracy;
  if (flags.algo == "baseline") return gcs::run_baseline(inst.graph, opts);
  gcs::VertexSet s_init;
  if (flags.sinit == "astar")
    s_init = gcs::sinit_from_astar(inst.graph, h);
  else if (flags.sinit == "source")
    s_init = gcs::VertexSet{inst.graph.origin()};
  else
    throw gcs::InputError("unknown --sinit value: " + flags.sinit);
  return gcs::run_astar_gcs(inst.graph, h, s_init, opts);
}

OrderedJson report_json(const RunResult& result, const SolveFlags& flags) {
  OrderedJson j = OrderedJson::parse(result.to_json());
  j["seed"] = flags.seed;
  j["version"] = GCS_VERSION;
  j["accuracy"] = flags.accuracy;
  return j;
}

// ---------------------------------------------------------------------
// bench

struct BenchRow {
  std::string map;
  std::string algo;
  std::string variant;
  double weight = 0.0;
  int origin = -1;
  int s_size = 0;
  int iters = 0;
  double lb = 0.0;
  double ub = gcs::kInf;
  std::optional<double> gap;
  double millis = 0.0;
};

std::string csv_num(double v) {
  if (!std::isfinite(v)) return "inf";
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "map,algo,variant,weight,origin,S_size,iters,lb,ub,gap_pct,millis\n";
  for (const auto& r : rows) {
    out << r.map << ',' << r.algo << ',' << r.variant << ','
        << csv_num(r.weight) << ',' << r.origin << ',' << r.s_size << ','
        << r.iters << ',' << csv_num(r.lb) << ',' << csv_num(r.ub) << ','
        << (r.gap ? csv_num(*r.gap) : std::string("n/a")) << ','
        << csv_num(r.millis) << '\n';
  }
}

BenchRow row_from_result(const RunResult& res, const std::string& map,
                         const std::string& algo, const std::string& variant,
                         double weight, int origin) {
  BenchRow row;
  row.map = map;
  row.algo = algo;
  row.variant = variant;
  row.weight = weight;
  row.origin = origin;
  row.s_size = static_cast<int>(res.final_cut_set.size());
  row.iters = res.growth_iterations;
  row.lb = res.c_lb;
  row.ub = res.best_feasible ? res.best_feasible->cost : gcs::kInf;
  row.gap = res.gap_percent();
  row.millis = res.wall_millis;
  return row;
}

struct BenchCell {
  int instance_index;
  int origin;  // -1: the file's own origin
  double weight;
};

/// Table-style aggregation: mean cut-set size, mean solve time and mean
/// gap per (map, algo, variant, weight) across origins.
void write_bench_summary(std::ostream& out, const std::vector<BenchRow>& rows) {
  std::map<std::tuple<std::string, std::string, std::string, double>,
           std::vector<const BenchRow*>>
      groups;
  for (const auto& r : rows)
    groups[{r.map, r.algo, r.variant, r.weight}].push_back(&r);
  out << "map,algo,variant,weight,n,mean_S_size,mean_millis,mean_gap_pct\n";
  for (const auto& [key, members] : groups) {
    double s_size = 0.0, millis = 0.0, gap = 0.0;
    int gaps = 0;
    for (const BenchRow* r : members) {
      s_size += r->s_size;
      millis += r->millis;
      if (r->gap) {
        gap += *r->gap;
        ++gaps;
      }
    }
    const double n = static_cast<double>(members.size());
    out << std::get<0>(key) << ',' << std::get<1>(key) << ','
        << std::get<2>(key) << ',' << csv_num(std::get<3>(key)) << ','
        << members.size() << ',' << csv_num(s_size / n) << ','
        << csv_num(millis / n) << ','
        << (gaps ? csv_num(gap / gaps) : std::string("n/a")) << '\n';
  }
}

int cmd_bench(const std::vector<std::string>& inputs, std::string weights_arg,
              int origins, std::uint64_t seed, int jobs, bool with_baseline,
              const std::string& sinit, int n_max, double accuracy,
              int max_iters_inf, const std::string& out_path,
              const std::string& summary_path) {
  std::vector<std::string> files;
  for (const auto& input : inputs) {
    if (std::filesystem::is_directory(input)) {
      std::vector<std::string> found;
      for (const auto& entry : std::filesystem::directory_iterator(input))
        if (entry.path().extension() == ".json")
          found.push_back(entry.path().string());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(input);
    }
  }
  if (files.empty()) throw gcs::InputError("bench found no instance files");

  std::vector<double> weights;
  {
    std::stringstream ss(weights_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) weights.push_back(std::stod(tok));
    if (weights.empty()) throw gcs::InputError("no weights given");
  }

  struct MapState {
    Instance base;
    std::string name;
    std::vector<int> origins;  // rebase targets; -1 keeps the file origin
    HeuristicTable h1;
    std::optional<HeuristicTable> h2;
  };
  std::vector<MapState> maps;
  for (const auto& file : files) {
    MapState state{gcs::load_instance(file),
                   std::filesystem::path(file).stem().string(),
                   {},
                   {},
                   {}};
    state.origins.push_back(-1);
    gcs::SplitMix64 rng(seed ^ std::hash<std::string>{}(state.name));
    std::set<int> chosen;
    int guard = 0;
    while (static_cast<int>(chosen.size()) < origins &&
           ++guard < 100 * (origins + 1)) {
      const int v =
          static_cast<int>(rng.bounded(state.base.graph.num_vertices()));
      if (v == state.base.graph.origin() ||
          v == state.base.graph.destination())
        continue;
      chosen.insert(v);
    }
    state.origins.insert(state.origins.end(), chosen.begin(), chosen.end());
    state.h1 = gcs::h1_table(state.base.graph);
    const bool needs_h2 =
        std::any_of(weights.begin(), weights.end(),
                    [](double w) { return w > 0.0; });
    if (needs_h2)
      state.h2 = gcs::h2_expand_freeze(state.base.graph, n_max);
    maps.push_back(std::move(state));
  }

  std::vector<BenchCell> cells;
  for (size_t mi = 0; mi < maps.size(); ++mi)
    for (int origin : maps[mi].origins)
      for (double w : weights)
        cells.push_back({static_cast<int>(mi), origin, w});

  std::vector<std::vector<BenchRow>> cell_rows(cells.size());
  std::vector<std::string> cell_errors(cells.size());
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#endif
#pragma omp parallel for schedule(dynamic) if (jobs != 1)
  for (int ci = 0; ci < static_cast<int>(cells.size()); ++ci) {
    const BenchCell& cell = cells[ci];
    const MapState& map = maps[cell.instance_index];
    try {
      const Instance inst = cell.origin < 0
                                ? map.base
                                : gcs::rebase_origin(map.base, cell.origin);
      // The heuristic anchors at the destination, which rebasing keeps, so
      // per-map tables are shared across origins.
      const HeuristicTable h =
          cell.weight > 0.0 ? gcs::blend(map.h1, *map.h2, cell.weight)
                            : map.h1;
      RunOptions opts;
      opts.seed = seed;
      opts.relax.accuracy = accuracy;

      const gcs::VertexSet s_init =
          sinit == "source" ? gcs::VertexSet{inst.graph.origin()}
                            : gcs::sinit_from_astar(inst.graph, h);

      RunOptions first_opts = opts;
      first_opts.max_iters = 1;
      const RunResult first =
          gcs::run_astar_gcs(inst.graph, h, s_init, first_opts);
      cell_rows[ci].push_back(row_from_result(
          first, map.name, "astar-gcs", "first", cell.weight, cell.origin));

      RunOptions full_opts = opts;
      full_opts.max_iters = max_iters_inf;
      const RunResult full =
          gcs::run_astar_gcs(inst.graph, h, s_init, full_opts);
      cell_rows[ci].push_back(row_from_result(
          full, map.name, "astar-gcs", "final", cell.weight, cell.origin));

      if (with_baseline && cell.weight == weights.front()) {
        const RunResult base = gcs::run_baseline(inst.graph, opts);
        cell_rows[ci].push_back(row_from_result(base, map.name, "baseline",
                                                "final", 0.0, cell.origin));
      }
    } catch (const std::exception& e) {
      cell_errors[ci] = e.what();
    }
  }
  for (const auto& err : cell_errors)
    if (!err.empty()) throw gcs::InternalError("bench cell failed: " + err);

  std::vector<BenchRow> rows;
  for (auto& cr : cell_rows)
    rows.insert(rows.end(), cr.begin(), cr.end());

  if (out_path.empty()) {
    write_bench_csv(std::cout, rows);
  } else {
    std::ostringstream ss;
    write_bench_csv(ss, rows);
    write_file(out_path, ss.str());
  }
  if (!summary_path.empty()) {
    std::ostringstream ss;
    write_bench_summary(ss, rows);
    write_file(summary_path, ss.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shortest paths through graphs of convex sets: heuristic "
               "cut-set growth with conic relaxations"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write an instance file");
  std::string gen_type = "maze";
  int rows = 10, cols = 10, width = 12, height = 12, bar_count = 8;
  int nx = 4, ny = 4, nz = 3;
  int origin_cell = -1, dest_cell = -1;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "instance.json";
  gen->add_option("--type", gen_type, "maze | bars | village")
      ->check(CLI::IsMember({"maze", "bars", "village"}));
  gen->add_option("--rows", rows);
  gen->add_option("--cols", cols);
  gen->add_option("--width", width);
  gen->add_option("--height", height);
  gen->add_option("--bars", bar_count);
  gen->add_option("--nx", nx);
  gen->add_option("--ny", ny);
  gen->add_option("--nz", nz);
  gen->add_option("--origin-cell", origin_cell, "maze origin cell index");
  gen->add_option("--dest-cell", dest_cell, "maze destination cell index");
  gen->add_option("--seed", gen_seed);
  gen->add_option("-o,--output", gen_out);

  // heuristic
  auto* heur = app.add_subcommand("heuristic", "write a heuristic table");
  std::string heur_in, heur_out = "heuristic.json", heur_method = "h1";
  int heur_nmax = gcs::kDefaultNMax;
  double heur_weight = 0.5;
  heur->add_option("-i,--instance", heur_in)->required();
  heur->add_option("--method", heur_method, "h1 | h2 | blend")
      ->check(CLI::IsMember({"h1", "h2", "blend"}));
  heur->add_option("--nmax", heur_nmax);
  heur->add_option("--weight", heur_weight, "blend weight");
  heur->add_option("-o,--output", heur_out);

  // solve
  auto* solve = app.add_subcommand("solve", "run the solver on an instance");
  std::string solve_in, report_out, trace_out;
  SolveFlags flags;
  solve->add_option("-i,--instance", solve_in)->required();
  solve->add_option("--algo", flags.algo, "astar-gcs | baseline")
      ->check(CLI::IsMember({"astar-gcs", "baseline"}));
  solve->add_option("--sinit", flags.sinit, "source | astar")
      ->check(CLI::IsMember({"source", "astar"}));
  solve->add_option("--weight", flags.weight, "heuristic blend weight");
  solve->add_option("--nmax", flags.n_max);
  solve->add_option("--heuristic", flags.heuristic_file,
                    "precomputed heuristic table");
  solve->add_option("--max-iters", flags.max_iters);
  solve->add_option("--seed", flags.seed);
  solve->add_option("--samples", flags.samples, "sampled rounding walks");
  solve->add_option("--accuracy", flags.accuracy);
  solve->add_option("-o,--report", report_out);
  solve->add_option("--trace", trace_out, "per-iteration CSV");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum");
  std::string oracle_in, oracle_out;
  int oracle_cap = gcs::kDefaultPathCap;
  oracle->add_option("-i,--instance", oracle_in)->required();
  oracle->add_option("--cap", oracle_cap);
  oracle->add_option("-o,--output", oracle_out);

  // bench
  auto* bench = app.add_subcommand("bench", "sweep origins and weights");
  std::vector<std::string> bench_in;
  std::string bench_weights = "0,0.5,1", bench_out, bench_sinit = "astar";
  int bench_origins = 0, bench_jobs = 1, bench_nmax = gcs::kDefaultNMax;
  int bench_max_iters = 1 << 30;
  std::uint64_t bench_seed = 1;
  double bench_accuracy = gcs::kDefaultAccuracy;
  bool with_baseline = false;
  bench->add_option("-i,--instances", bench_in,
                    "instance files or directories")
      ->required();
  bench->add_option("--weights", bench_weights, "comma-separated weights");
  bench->add_option("--origins", bench_origins,
                    "random rebased origins per map");
  bench->add_option("--seed", bench_seed);
  bench->add_option("--jobs", bench_jobs, "parallel cells (0 = all cores)");
  bench->add_option("--sinit", bench_sinit)
      ->check(CLI::IsMember({"source", "astar"}));
  bench->add_option("--nmax", bench_nmax);
  bench->add_option("--accuracy", bench_accuracy);
  bench->add_option("--max-iters", bench_max_iters);
  bench->add_flag("--with-baseline", with_baseline);
  bench->add_option("-o,--output", bench_out);
  std::string bench_summary;
  bench->add_option("--summary", bench_summary,
                    "aggregate means per (map, algo, variant, weight)");

  // plot
  auto* plot = app.add_subcommand("plot", "render an instance to SVG");
  std::string plot_in, plot_report, plot_out = "plot.svg";
  plot->add_option("-i,--instance", plot_in)->required();
  plot->add_option("-r,--report", plot_report, "solver report JSON");
  plot->add_option("-o,--output", plot_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      Instance inst = gen_type == "maze"
                          ? gcs::gen_maze(rows, cols, gen_seed, origin_cell,
                                          dest_cell)
                          : gen_type == "bars"
                                ? gcs::gen_bars(width, height, bar_count,
                                                gen_seed)
                                : gcs::gen_village(nx, ny, nz, gen_seed);
      gcs::save_instance(inst, gen_out);
      std::cout << "wrote " << gen_out << " (" << inst.graph.num_vertices()
                << " vertices, " << inst.graph.num_edges() << " edges)\n";
      return 0;
    }

    if (heur->parsed()) {
      const Instance inst = gcs::load_instance(heur_in);
      const auto t0 = Clock::now();
      gcs::HeuristicFile file;
      file.method = heur_method;
      file.n_max = heur_nmax;
      if (heur_method == "h1") {
        file.table = gcs::h1_table(inst.graph);
      } else if (heur_method == "h2") {
        file.table = gcs::h2_expand_freeze(inst.graph, heur_nmax);
      } else {
        file.weight = heur_weight;
        file.table = gcs::blend(gcs::h1_table(inst.graph),
                                gcs::h2_expand_freeze(inst.graph, heur_nmax),
                                heur_weight);
      }
      file.build_millis = millis_since(t0);
      gcs::save_heuristic(file, heur_out);
      std::cout << "wrote " << heur_out << " in " << file.build_millis
                << " ms\n";
      return 0;
    }

    if (solve->parsed()) {
      const Instance inst = gcs::load_instance(solve_in);
      // The baseline ignores heuristics, so skip the table build there.
      const HeuristicTable h =
          flags.algo == "baseline"
              ? HeuristicTable::zeros(inst.graph.num_vertices())
              : resolve_heuristic(inst, flags);
      const RunResult result = execute_solve(inst, h, flags);
      const OrderedJson report = report_json(result, flags);
      if (report_out.empty())
        std::cout << report.dump(2) << "\n";
      else
        write_file(report_out, report.dump(2) + "\n");
      if (!trace_out.empty()) {
        std::ostringstream ss;
        gcs::write_trace_csv(ss, result);
        write_file(trace_out, ss.str());
      }
      return 0;
    }

    if (oracle->parsed()) {
      const Instance inst = gcs::load_instance(oracle_in);
      const gcs::ExactResult exact =
          gcs::exact_opt(inst.graph, inst.graph.origin(),
                         inst.graph.destination(), oracle_cap);
      OrderedJson j;
      j["c_opt"] = exact.c_opt;
      j["path"] = exact.solution.path;
      OrderedJson pts = OrderedJson::array();
      for (const auto& p : exact.solution.points)
        pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
      j["points"] = std::move(pts);
      if (oracle_out.empty())
        std::cout << j.dump(2) << "\n";
      else
        write_file(oracle_out, j.dump(2) + "\n");
      return 0;
    }

    if (bench->parsed()) {
      return cmd_bench(bench_in, bench_weights, bench_origins, bench_seed,
                       bench_jobs, with_baseline, bench_sinit, bench_nmax,
                       bench_accuracy, bench_max_iters, bench_out,
                       bench_summary);
    }

    if (plot->parsed()) {
      const Instance inst = gcs::load_instance(plot_in);
      std::optional<RunResult> result;
      if (!plot_report.empty()) {
        std::ifstream in(plot_report);
        if (!in) throw gcs::InputError("cannot open " + plot_report);
        OrderedJson j = OrderedJson::parse(in);
        RunResult r;
        r.c_lb = j.value("c_lb", 0.0);
        for (const auto& v : j.value("cut_set", OrderedJson::array()))
          r.final_cut_set.insert(v.get<int>());
        if (j.contains("feasible") && !j.at("feasible").is_null()) {
          gcs::FeasibleSolution f;
          for (const auto& v : j.at("feasible").at("path"))
            f.path.push_back(v.get<int>());
          for (const auto& pt : j.at("feasible").at("points")) {
            Eigen::VectorXd p(pt.size());
            for (size_t i = 0; i < pt.size(); ++i) p[i] = pt[i].get<double>();
            f.points.push_back(std::move(p));
          }
          f.cost = j.at("feasible").value("cost", 0.0);
          r.best_feasible = std::move(f);
        }
        result = std::move(r);
      }
      write_file(plot_out, gcs::render_svg(inst.graph, result));
      std::cout << "wrote " << plot_out << "\n";
      return 0;
    }
  } catch (const gcs::NoPathError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoPath;
  } catch (const gcs::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const gcs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUserError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUserError;
  }
  return 0;
}
