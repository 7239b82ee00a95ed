#include "gcs/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "gcs/errors.hpp"
#include "gcs/heuristics.hpp"

namespace gcs {

namespace {

struct Mapper {
  double y_sum;  // y mirrored inside the viewBox so north stays up
  double map_y(double y) const { return y_sum - y; }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

/// Vertex enumeration of a 2-D polytope intersected with its bounding box:
/// pairwise line intersections filtered by feasibility, sorted by angle.
std::vector<Eigen::Vector2d> polytope_corners(const ConvexSet& set) {
  std::vector<Eigen::Vector3d> lines;  // a x + b y <= c as (a, b, c)
  const auto& A = set.polytope_A();
  const auto& b = set.polytope_b();
  for (int r = 0; r < A.rows(); ++r)
    lines.emplace_back(A(r, 0), A(r, 1), b(r));
  lines.emplace_back(-1, 0, -set.bbox_lo()[0]);
  lines.emplace_back(1, 0, set.bbox_hi()[0]);
  lines.emplace_back(0, -1, -set.bbox_lo()[1]);
  lines.emplace_back(0, 1, set.bbox_hi()[1]);

  std::vector<Eigen::Vector2d> corners;
  for (size_t i = 0; i < lines.size(); ++i) {
    for (size_t j = i + 1; j < lines.size(); ++j) {
      const double det =
          lines[i][0] * lines[j][1] - lines[j][0] * lines[i][1];
      if (std::fabs(det) < 1e-12) continue;
      const double x =
          (lines[i][2] * lines[j][1] - lines[j][2] * lines[i][1]) / det;
      const double y =
          (lines[i][0] * lines[j][2] - lines[j][0] * lines[i][2]) / det;
      bool feasible = true;
      for (const auto& ln : lines)
        if (ln[0] * x + ln[1] * y > ln[2] + 1e-7) {
          feasible = false;
          break;
        }
      if (feasible) corners.emplace_back(x, y);
    }
  }
  if (corners.empty()) return corners;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  for (const auto& c : corners) center += c;
  center /= static_cast<double>(corners.size());
  std::sort(corners.begin(), corners.end(),
            [&](const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
              return std::atan2(p[1] - center[1], p[0] - center[0]) <
                     std::atan2(q[1] - center[1], q[0] - center[0]);
            });
  return corners;
}

}  // namespace

std::string render_svg(const GcsGraph& graph,
                       const std::optional<RunResult>& result) {
  if (graph.dimension() != 2)
    throw InputError("plotting supports 2-D instances only");

  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  auto expand = [&](const Eigen::VectorXd& p) {
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  };
  for (int v = 0; v < graph.num_vertices(); ++v) {
    const ConvexSet& set = graph.set(v);
    switch (set.kind()) {
      case SetKind::kPoint:
        expand(set.point());
        break;
      case SetKind::kSegment:
        expand(set.segment_a());
        expand(set.segment_b());
        break;
      case SetKind::kBox:
      case SetKind::kPolytope:
        expand(set.bbox_lo());
        expand(set.bbox_hi());
        break;
    }
  }
  const double pad = 0.5 + 0.01 * std::max(x1 - x0, y1 - y0);
  x0 -= pad;
  y0 -= pad;
  x1 += pad;
  y1 += pad;
  const Mapper m{y0 + y1};

  const VertexSet cut =
      result ? result->final_cut_set : VertexSet{};
  const std::vector<Eigen::VectorXd> centers = centroid_points(graph);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(x0)
      << " " << fmt(y0) << " " << fmt(x1 - x0) << " " << fmt(y1 - y0)
      << "\">\n";

  svg << "<g stroke=\"#c8c8c8\" stroke-width=\"0.015\">\n";
  for (const auto& [u, v] : graph.edges()) {
    if (u > v && graph.has_edge(v, u)) continue;  // draw one line per pair
    svg << "<line x1=\"" << fmt(centers[u][0]) << "\" y1=\""
        << fmt(m.map_y(centers[u][1])) << "\" x2=\"" << fmt(centers[v][0])
        << "\" y2=\"" << fmt(m.map_y(centers[v][1])) << "\"/>\n";
  }
  svg << "</g>\n";

  for (int v = 0; v < graph.num_vertices(); ++v) {
    const bool in_cut = cut.count(v) > 0;
    const char* fill = in_cut ? "#6f9fe8" : "#e0e0e0";
    const char* stroke = in_cut ? "#2c5aa0" : "#909090";
    const ConvexSet& set = graph.set(v);
    switch (set.kind()) {
      case SetKind::kPoint:
        svg << "<circle cx=\"" << fmt(set.point()[0]) << "\" cy=\""
            << fmt(m.map_y(set.point()[1])) << "\" r=\"0.12\" fill=\""
            << (v == graph.origin() ? "#2a9d2a"
                                    : v == graph.destination() ? "#b02727"
                                                               : fill)
            << "\"/>\n";
        break;
      case SetKind::kSegment:
        svg << "<line x1=\"" << fmt(set.segment_a()[0]) << "\" y1=\""
            << fmt(m.map_y(set.segment_a()[1])) << "\" x2=\""
            << fmt(set.segment_b()[0]) << "\" y2=\""
            << fmt(m.map_y(set.segment_b()[1])) << "\" stroke=\"" << stroke
            << "\" stroke-width=\"0.08\"/>\n";
        break;
      case SetKind::kBox:
        svg << "<rect x=\"" << fmt(set.box_lo()[0]) << "\" y=\""
            << fmt(m.map_y(set.box_hi()[1])) << "\" width=\""
            << fmt(set.box_hi()[0] - set.box_lo()[0]) << "\" height=\""
            << fmt(set.box_hi()[1] - set.box_lo()[1]) << "\" fill=\"" << fill
            << "\" stroke=\"" << stroke << "\" stroke-width=\"0.02\"/>\n";
        break;
      case SetKind::kPolytope: {
        svg << "<polygon points=\"";
        for (const auto& c : polytope_corners(set))
          svg << fmt(c[0]) << "," << fmt(m.map_y(c[1])) << " ";
        svg << "\" fill=\"" << fill << "\" stroke=\"" << stroke
            << "\" stroke-width=\"0.02\"/>\n";
        break;
      }
    }
  }

  if (result && result->best_feasible) {
    svg << "<polyline fill=\"none\" stroke=\"#d22\" stroke-width=\"0.09\" "
           "points=\"";
    for (const auto& p : result->best_feasible->points)
      svg << fmt(p[0]) << "," << fmt(m.map_y(p[1])) << " ";
    svg << "\"/>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gcs
