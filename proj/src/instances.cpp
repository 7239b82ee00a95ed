#include "gcs/instances.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "gcs/errors.hpp"
#include "gcs/rng.hpp"

#include "json.hpp"

namespace gcs {

namespace {

using OrderedJson = nlohmann::ordered_json;

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

Eigen::VectorXd vec3(double x, double y, double z) {
  Eigen::VectorXd v(3);
  v << x, y, z;
  return v;
}

std::vector<Edge> sorted_edges(std::set<Edge> edges) {
  return std::vector<Edge>(edges.begin(), edges.end());
}

void add_both(std::set<Edge>& edges, VertexId a, VertexId b) {
  edges.emplace(a, b);
  edges.emplace(b, a);
}

/// Undirected clique over ids (both edge directions).
void add_clique(std::set<Edge>& edges, const std::vector<VertexId>& ids) {
  for (size_t i = 0; i < ids.size(); ++i)
    for (size_t j = i + 1; j < ids.size(); ++j)
      add_both(edges, ids[i], ids[j]);
}

}  // namespace

Instance gen_maze(int rows, int cols, std::uint64_t seed, int origin_cell,
                  int destination_cell) {
  if (rows < 2 || cols < 2) throw InputError("maze needs rows and cols >= 2");
  const int cells = rows * cols;
  if (origin_cell < 0) origin_cell = 0;                  // bottom-left
  if (destination_cell < 0) destination_cell = cells - 1;  // top-right
  if (origin_cell >= cells || destination_cell >= cells)
    throw InputError("maze cell index out of range");
  if (origin_cell == destination_cell)
    throw InputError("maze origin and destination cells must differ");

  // Carve a spanning tree with iterative depth-first search. Cell (r, c)
  // covers [c, c+1] x [r, r+1]; index = r * cols + c.
  SplitMix64 rng(seed);
  std::vector<char> visited(cells, 0);
  std::vector<int> stack{0};
  visited[0] = 1;
  std::set<std::pair<int, int>> carved;  // (min cell, max cell)
  while (!stack.empty()) {
    const int cur = stack.back();
    const int r = cur / cols;
    const int c = cur % cols;
    int options[4];
    int count = 0;
    if (r + 1 < rows && !visited[cur + cols]) options[count++] = cur + cols;
    if (r - 1 >= 0 && !visited[cur - cols]) options[count++] = cur - cols;
    if (c + 1 < cols && !visited[cur + 1]) options[count++] = cur + 1;
    if (c - 1 >= 0 && !visited[cur - 1]) options[count++] = cur - 1;
    if (count == 0) {
      stack.pop_back();
      continue;
    }
    const int next = options[rng.bounded(count)];
    carved.emplace(std::min(cur, next), std::max(cur, next));
    visited[next] = 1;
    stack.push_back(next);
  }

  // One segment vertex per carved wall, ordered by (min cell, max cell).
  std::vector<ConvexSet> sets;
  std::vector<std::vector<VertexId>> cell_sides(cells);
  for (const auto& [a, b] : carved) {
    const int ra = a / cols, ca = a % cols;
    const VertexId id = static_cast<VertexId>(sets.size());
    if (b == a + 1) {
      // shared vertical side at x = ca + 1
      sets.push_back(ConvexSet::make_segment(vec2(ca + 1, ra),
                                             vec2(ca + 1, ra + 1)));
    } else {
      // shared horizontal side at y = ra + 1
      sets.push_back(ConvexSet::make_segment(vec2(ca, ra + 1),
                                             vec2(ca + 1, ra + 1)));
    }
    cell_sides[a].push_back(id);
    cell_sides[b].push_back(id);
  }

  std::set<Edge> edges;
  for (int cell = 0; cell < cells; ++cell) add_clique(edges, cell_sides[cell]);

  const VertexId s = static_cast<VertexId>(sets.size());
  const VertexId d = s + 1;
  auto cell_center = [&](int cell) {
    return vec2(cell % cols + 0.5, cell / cols + 0.5);
  };
  sets.push_back(ConvexSet::make_point(cell_center(origin_cell)));
  sets.push_back(ConvexSet::make_point(cell_center(destination_cell)));
  for (VertexId side : cell_sides[origin_cell]) add_both(edges, s, side);
  for (VertexId side : cell_sides[destination_cell]) add_both(edges, d, side);

  Instance inst{GcsGraph(2, std::move(sets), sorted_edges(std::move(edges)),
                         s, d),
                {{"generator", "maze"},
                 {"rows", std::to_string(rows)},
                 {"cols", std::to_string(cols)},
                 {"seed", std::to_string(seed)},
                 {"origin_cell", std::to_string(origin_cell)},
                 {"destination_cell", std::to_string(destination_cell)},
                 {"rng", "splitmix64-v1"}}};
  inst.graph.validate();
  return inst;
}

namespace {

std::vector<std::pair<int, int>> bar_cells(const Bar& bar) {
  std::vector<std::pair<int, int>> out;
  for (int k = 0; k < bar.length; ++k)
    out.emplace_back(bar.horizontal ? bar.row : bar.row + k,
                     bar.horizontal ? bar.col + k : bar.col);
  return out;
}

}  // namespace

Instance bars_instance(const std::vector<Bar>& bars, Provenance provenance) {
  std::set<std::pair<int, int>> cell_set;
  for (const Bar& bar : bars)
    for (const auto& rc : bar_cells(bar)) cell_set.insert(rc);
  if (cell_set.size() < 2)
    throw GenerationError("bar layout covers fewer than two squares");

  std::vector<std::pair<int, int>> cells(cell_set.begin(), cell_set.end());
  std::map<std::pair<int, int>, VertexId> id_of;
  std::vector<ConvexSet> sets;
  for (const auto& [r, c] : cells) {
    id_of[{r, c}] = static_cast<VertexId>(sets.size());
    sets.push_back(ConvexSet::make_box(vec2(c, r), vec2(c + 1, r + 1)));
  }

  std::set<Edge> edges;
  std::vector<std::vector<VertexId>> per_bar;
  for (const Bar& bar : bars) {
    std::vector<VertexId> ids;
    for (const auto& rc : bar_cells(bar)) ids.push_back(id_of.at(rc));
    add_clique(edges, ids);
    per_bar.push_back(std::move(ids));
  }

  const auto sq_origin = cells.front();  // bottom-left-most
  const auto sq_dest = cells.back();     // top-right-most
  const VertexId s = static_cast<VertexId>(sets.size());
  const VertexId d = s + 1;
  sets.push_back(ConvexSet::make_point(
      vec2(sq_origin.second + 0.5, sq_origin.first + 0.5)));
  sets.push_back(ConvexSet::make_point(
      vec2(sq_dest.second + 0.5, sq_dest.first + 0.5)));

  auto attach = [&](VertexId singleton, const std::pair<int, int>& home) {
    const VertexId home_id = id_of.at(home);
    add_both(edges, singleton, home_id);
    for (const auto& ids : per_bar) {
      if (std::find(ids.begin(), ids.end(), home_id) == ids.end()) continue;
      for (VertexId v : ids)
        if (v != home_id) add_both(edges, singleton, v);
    }
  };
  attach(s, sq_origin);
  attach(d, sq_dest);

  Instance inst{GcsGraph(2, std::move(sets), sorted_edges(std::move(edges)),
                         s, d),
                std::move(provenance)};
  inst.graph.validate();
  return inst;
}

Instance gen_bars(int width, int height, int bar_count, std::uint64_t seed) {
  if (bar_count < 2) throw InputError("need at least two bars");
  if (width < 3 || height < 3)
    throw InputError("bars need a grid of at least 3x3");
  SplitMix64 rng(seed);
  const int max_len = std::max(2, std::min(width, height) - 1);

  auto draw = [&]() {
    Bar bar;
    bar.horizontal = rng.bounded(2) == 0;
    bar.length = 2 + static_cast<int>(rng.bounded(max_len - 1));
    if (bar.horizontal) {
      bar.row = static_cast<int>(rng.bounded(height));
      bar.col = static_cast<int>(rng.bounded(width - bar.length + 1));
    } else {
      bar.row = static_cast<int>(rng.bounded(height - bar.length + 1));
      bar.col = static_cast<int>(rng.bounded(width));
    }
    return bar;
  };

  std::vector<Bar> bars{draw()};
  std::set<std::pair<int, int>> covered;
  for (const auto& rc : bar_cells(bars[0])) covered.insert(rc);
  int attempts = 0;
  while (static_cast<int>(bars.size()) < bar_count) {
    if (++attempts > 10000)
      throw GenerationError("could not connect the requested bar count");
    Bar bar = draw();
    bool overlaps = false;
    for (const auto& rc : bar_cells(bar))
      if (covered.count(rc)) {
        overlaps = true;
        break;
      }
    if (!overlaps) continue;
    for (const auto& rc : bar_cells(bar)) covered.insert(rc);
    bars.push_back(bar);
  }

  return bars_instance(bars, {{"generator", "bars"},
                              {"width", std::to_string(width)},
                              {"height", std::to_string(height)},
                              {"bar_count", std::to_string(bar_count)},
                              {"seed", std::to_string(seed)},
                              {"rng", "splitmix64-v1"}});
}

Instance gen_village(int nx, int ny, int nz, std::uint64_t seed) {
  if (nx < 1 || ny < 1 || nz < 1 || nx * ny * nz < 2)
    throw InputError("village needs at least 2 voxels");
  const int total = nx * ny * nz;
  auto index = [&](int i, int j, int k) { return (k * ny + j) * nx + i; };
  const int dest_voxel = index(nx - 1, ny - 1, nz - 1);

  for (int attempt = 0; attempt < 32; ++attempt) {
    SplitMix64 rng(seed + 0x51ed270b * static_cast<std::uint64_t>(attempt));
    std::vector<char> free(total, 0);
    for (int v = 0; v < total; ++v) free[v] = rng.uniform() >= 0.3 ? 1 : 0;
    free[dest_voxel] = 1;

    // Keep only the free component containing the destination.
    std::vector<int> dist(total, -1);
    std::deque<int> queue{dest_voxel};
    dist[dest_voxel] = 0;
    auto visit = [&](int from, int i, int j, int k) {
      if (i < 0 || i >= nx || j < 0 || j >= ny || k < 0 || k >= nz) return;
      const int v = index(i, j, k);
      if (!free[v] || dist[v] >= 0) return;
      dist[v] = dist[from] + 1;
      queue.push_back(v);
    };
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      const int i = v % nx, j = (v / nx) % ny, k = v / (nx * ny);
      visit(v, i - 1, j, k);
      visit(v, i + 1, j, k);
      visit(v, i, j - 1, k);
      visit(v, i, j + 1, k);
      visit(v, i, j, k - 1);
      visit(v, i, j, k + 1);
    }
    int component = 0;
    int origin_voxel = -1;
    int best_dist = -1;
    for (int v = 0; v < total; ++v) {
      if (dist[v] < 0) {
        free[v] = 0;
        continue;
      }
      ++component;
      if (dist[v] > best_dist) {
        best_dist = dist[v];
        origin_voxel = v;
      }
    }
    if (component < 2 || origin_voxel == dest_voxel) continue;

    // Faces between adjacent free voxels, scanned in voxel order with +x,
    // +y, +z directions; stored as boxes with one degenerate axis.
    std::vector<ConvexSet> sets;
    std::vector<std::vector<VertexId>> voxel_faces(total);
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const int v = index(i, j, k);
          if (!free[v]) continue;
          auto face = [&](int other, Eigen::VectorXd lo, Eigen::VectorXd hi) {
            const VertexId id = static_cast<VertexId>(sets.size());
            sets.push_back(ConvexSet::make_box(std::move(lo), std::move(hi)));
            voxel_faces[v].push_back(id);
            voxel_faces[other].push_back(id);
          };
          if (i + 1 < nx && free[index(i + 1, j, k)])
            face(index(i + 1, j, k), vec3(i + 1, j, k),
                 vec3(i + 1, j + 1, k + 1));
          if (j + 1 < ny && free[index(i, j + 1, k)])
            face(index(i, j + 1, k), vec3(i, j + 1, k),
                 vec3(i + 1, j + 1, k + 1));
          if (k + 1 < nz && free[index(i, j, k + 1)])
            face(index(i, j, k + 1), vec3(i, j, k + 1),
                 vec3(i + 1, j + 1, k + 1));
        }

    std::set<Edge> edges;
    for (int v = 0; v < total; ++v)
      if (free[v]) add_clique(edges, voxel_faces[v]);

    const VertexId s = static_cast<VertexId>(sets.size());
    const VertexId d = s + 1;
    auto voxel_center = [&](int v) {
      return vec3(v % nx + 0.5, (v / nx) % ny + 0.5, v / (nx * ny) + 0.5);
    };
    sets.push_back(ConvexSet::make_point(voxel_center(origin_voxel)));
    sets.push_back(ConvexSet::make_point(voxel_center(dest_voxel)));
    for (VertexId f : voxel_faces[origin_voxel]) add_both(edges, s, f);
    for (VertexId f : voxel_faces[dest_voxel]) add_both(edges, d, f);

    Instance inst{GcsGraph(3, std::move(sets),
                           sorted_edges(std::move(edges)), s, d),
                  {{"generator", "village"},
                   {"nx", std::to_string(nx)},
                   {"ny", std::to_string(ny)},
                   {"nz", std::to_string(nz)},
                   {"seed", std::to_string(seed)},
                   {"attempt", std::to_string(attempt)},
                   {"rng", "splitmix64-v1"}}};
    inst.graph.validate();
    return inst;
  }
  throw GenerationError("could not carve a connected village");
}

namespace {

OrderedJson vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from_json(const OrderedJson& j, const char* where) {
  if (!j.is_array() || j.empty())
    throw InputError(std::string("expected a coordinate array for ") + where);
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

OrderedJson set_to_json(const ConvexSet& set) {
  OrderedJson j;
  j["kind"] = to_string(set.kind());
  switch (set.kind()) {
    case SetKind::kPoint:
      j["p"] = vector_to_json(set.point());
      break;
    case SetKind::kSegment:
      j["a"] = vector_to_json(set.segment_a());
      j["b"] = vector_to_json(set.segment_b());
      break;
    case SetKind::kBox:
      j["lo"] = vector_to_json(set.box_lo());
      j["hi"] = vector_to_json(set.box_hi());
      break;
    case SetKind::kPolytope: {
      const auto& A = set.polytope_A();
      OrderedJson rows = OrderedJson::array();
      for (int r = 0; r < A.rows(); ++r) {
        OrderedJson row = OrderedJson::array();
        for (int c = 0; c < A.cols(); ++c) row.push_back(A(r, c));
        rows.push_back(std::move(row));
      }
      j["A"] = std::move(rows);
      j["b"] = vector_to_json(set.polytope_b());
      j["bbox"] = {{"lo", vector_to_json(set.bbox_lo())},
                   {"hi", vector_to_json(set.bbox_hi())}};
      break;
    }
  }
  return j;
}

ConvexSet set_from_json(const OrderedJson& j) {
  if (!j.contains("kind")) throw InputError("vertex set is missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "point") {
    if (!j.contains("p")) throw InputError("point set is missing \"p\"");
    return ConvexSet::make_point(vector_from_json(j.at("p"), "p"));
  }
  if (kind == "segment") {
    if (!j.contains("a") || !j.contains("b"))
      throw InputError("segment set is missing \"a\" or \"b\"");
    return ConvexSet::make_segment(vector_from_json(j.at("a"), "a"),
                                   vector_from_json(j.at("b"), "b"));
  }
  if (kind == "box") {
    if (!j.contains("lo") || !j.contains("hi"))
      throw InputError("box set is missing \"lo\" or \"hi\"");
    return ConvexSet::make_box(vector_from_json(j.at("lo"), "lo"),
                               vector_from_json(j.at("hi"), "hi"));
  }
  if (kind == "hpolytope") {
    if (!j.contains("A") || !j.contains("b"))
      throw InputError("hpolytope set is missing \"A\" or \"b\"");
    if (!j.contains("bbox"))
      throw InputError(
          "hpolytope requires an explicit \"bbox\" certifying boundedness");
    const auto& rows = j.at("A");
    if (!rows.is_array() || rows.empty())
      throw InputError("hpolytope \"A\" must be a non-empty matrix");
    const size_t n = rows[0].size();
    Eigen::MatrixXd A(rows.size(), n);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != n)
        throw InputError("hpolytope \"A\" rows have unequal widths");
      for (size_t c = 0; c < n; ++c) A(r, c) = rows[r][c].get<double>();
    }
    return ConvexSet::make_polytope(
        std::move(A), vector_from_json(j.at("b"), "b"),
        vector_from_json(j.at("bbox").at("lo"), "bbox.lo"),
        vector_from_json(j.at("bbox").at("hi"), "bbox.hi"));
  }
  throw InputError("unknown set kind \"" + kind + "\"");
}

}  // namespace

std::string instance_to_json(const Instance& instance) {
  const GcsGraph& g = instance.graph;
  OrderedJson j;
  j["dimension"] = g.dimension();
  OrderedJson vertices = OrderedJson::array();
  for (int v = 0; v < g.num_vertices(); ++v)
    vertices.push_back({{"id", v}, {"set", set_to_json(g.set(v))}});
  j["vertices"] = std::move(vertices);
  OrderedJson edges = OrderedJson::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  j["origin"] = g.origin();
  j["destination"] = g.destination();
  OrderedJson prov = OrderedJson::object();
  for (const auto& [k, v] : instance.provenance) prov[k] = v;
  j["provenance"] = std::move(prov);
  return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& json_text) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("instance JSON parse error: ") + e.what());
  }
  for (const char* key :
       {"dimension", "vertices", "edges", "origin", "destination"}) {
    if (!j.contains(key))
      throw InputError(std::string("instance is missing \"") + key + "\"");
  }
  const int dimension = j.at("dimension").get<int>();
  const auto& jv = j.at("vertices");
  if (!jv.is_array() || jv.empty())
    throw InputError("instance needs a non-empty \"vertices\" array");
  std::vector<ConvexSet> sets;
  sets.reserve(jv.size());
  for (size_t i = 0; i < jv.size(); ++i) {
    const auto& entry = jv[i];
    if (!entry.contains("id") || !entry.contains("set"))
      throw InputError("vertex entry needs \"id\" and \"set\"");
    if (entry.at("id").get<size_t>() != i)
      throw InputError("vertex ids must be dense and ascending from 0");
    try {
      sets.push_back(set_from_json(entry.at("set")));
    } catch (const InputError& e) {
      throw InputError("vertex " + std::to_string(i) + ": " + e.what());
    }
  }
  std::vector<Edge> edges;
  for (const auto& je : j.at("edges")) {
    if (!je.is_array() || je.size() != 2)
      throw InputError("each edge must be a [tail, head] pair");
    edges.emplace_back(je[0].get<int>(), je[1].get<int>());
  }
  Instance inst{GcsGraph(dimension, std::move(sets), std::move(edges),
                         j.at("origin").get<int>(),
                         j.at("destination").get<int>()),
                {}};
  if (j.contains("provenance"))
    for (const auto& [k, v] : j.at("provenance").items())
      inst.provenance[k] = v.get<std::string>();
  inst.graph.validate();
  return inst;
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path + " for writing");
  out << instance_to_json(instance);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return instance_from_json(buffer.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Instance rebase_origin(const Instance& instance, VertexId v) {
  const GcsGraph& g = instance.graph;
  const VertexId s = g.origin();
  if (v < 0 || v >= g.num_vertices())
    throw InputError("rebase vertex out of range");
  if (v == s || v == g.destination())
    throw InputError("rebase vertex must differ from the endpoints");

  std::vector<ConvexSet> sets = g.sets();
  sets[s] = ConvexSet::make_point(centroid(g.set(v)));

  std::set<Edge> edges;
  for (const auto& e : g.edges())
    if (e.first != s && e.second != s) edges.insert(e);
  add_both(edges, s, v);
  for (VertexId w : g.successors(v))
    if (w != s) add_both(edges, s, w);
  for (VertexId w : g.predecessors(v))
    if (w != s) add_both(edges, s, w);

  Instance out{GcsGraph(g.dimension(), std::move(sets),
                        sorted_edges(std::move(edges)), s, g.destination()),
               instance.provenance};
  out.provenance["rebased_origin"] = std::to_string(v);
  out.graph.validate();
  return out;
}

void save_heuristic(const HeuristicFile& file, const std::string& path) {
  OrderedJson j;
  j["method"] = file.method;
  j["weight"] = file.weight;
  j["n_max"] = file.n_max;
  j["build_millis"] = file.build_millis;
  OrderedJson values = OrderedJson::object();
  for (size_t v = 0; v < file.table.values.size(); ++v)
    values[std::to_string(v)] = file.table.values[v];
  j["values"] = std::move(values);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

HeuristicFile load_heuristic(const std::string& path, int num_vertices) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  OrderedJson j;
  try {
    j = OrderedJson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": heuristic JSON parse error: " + e.what());
  }
  if (!j.contains("values"))
    throw InputError(path + ": heuristic file is missing \"values\"");
  HeuristicFile file;
  file.method = j.value("method", "unknown");
  file.weight = j.value("weight", 0.0);
  file.n_max = j.value("n_max", 0);
  file.build_millis = j.value("build_millis", 0.0);
  file.table.values.assign(num_vertices,
                           std::numeric_limits<double>::quiet_NaN());
  for (const auto& [key, value] : j.at("values").items()) {
    const int id = std::stoi(key);
    if (id < 0 || id >= num_vertices)
      throw InputError(path + ": heuristic value for unknown vertex " + key);
    file.table.values[id] = value.get<double>();
  }
  return file;
}

}  // namespace gcs
