#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "gcs/graph.hpp"

namespace gcs {

/// Generator provenance recorded inside instance files.
using Provenance = std::map<std::string, std::string>;

struct Instance {
  GcsGraph graph;
  Provenance provenance;
};

/// Maze on a rows x cols unit grid, carved as a spanning tree by seeded
/// iterative depth-first search. Vertices are the open shared sides
/// (segments); two sides are joined (both directions) when they border the
/// same cell. Origin and destination are singleton vertices at the centers
/// of the chosen cells; defaults are the bottom-left and top-right cells.
Instance gen_maze(int rows, int cols, std::uint64_t seed,
                  int origin_cell = -1, int destination_cell = -1);

/// Axis-aligned unit-thick bar: `length` unit squares starting at
/// (row, col), extending rightward when horizontal and upward otherwise.
struct Bar {
  bool horizontal;
  int row;
  int col;
  int length;
};

/// Instance over an explicit bar layout. Vertices are the distinct unit
/// squares (boxes); two squares are joined when they belong to a common
/// bar. Origin and destination sit at the centers of the bottom-left-most
/// and top-right-most squares.
Instance bars_instance(const std::vector<Bar>& bars,
                       Provenance provenance = {});

/// Random bar layout on a width x height grid, placed so the union of the
/// bars is connected.
Instance gen_bars(int width, int height, int bar_count, std::uint64_t seed);

/// Random free/blocked voxel grid in 3-D, restricted to the free component
/// containing the corner destination voxel. Vertices are the shared faces
/// of adjacent free voxels, stored as boxes with one degenerate axis; two
/// faces are joined when they belong to the same voxel. The origin sits at
/// the free voxel farthest from the destination.
Instance gen_village(int nx, int ny, int nz, std::uint64_t seed);

/// JSON schema:
///   { "dimension": n,
///     "vertices": [ {"id": int, "set": {"kind": ..., ...}} ],
///     "edges": [[u, v], ...],
///     "origin": id, "destination": id,
///     "provenance": { ... } }
/// Saving then loading reproduces the graph exactly, and re-saving a saved
/// file is byte-identical.
Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& json_text);

/// New instance whose origin set is the singleton {centroid(X_v)}, wired to
/// v and to v's neighbors. Used to sweep query origins over one map while
/// keeping the destination (and any destination-anchored heuristic) fixed.
Instance rebase_origin(const Instance& instance, VertexId v);

/// Heuristic table file: {"method", "weight", "n_max", "build_millis",
/// "values": {id: value}}.
struct HeuristicFile {
  HeuristicTable table;
  std::string method;
  double weight = 0.0;
  int n_max = 0;
  double build_millis = 0.0;
};
void save_heuristic(const HeuristicFile& file, const std::string& path);
HeuristicFile load_heuristic(const std::string& path, int num_vertices);

}  // namespace gcs
