#include "gcs/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "gcs/conic.hpp"
#include "gcs/errors.hpp"
#include "gcs/relaxation.hpp"

namespace gcs {

const char* to_string(SetKind kind) {
  switch (kind) {
    case SetKind::kPoint:
      return "point";
    case SetKind::kSegment:
      return "segment";
    case SetKind::kBox:
      return "box";
    case SetKind::kPolytope:
      return "hpolytope";
  }
  return "?";
}

ConvexSet ConvexSet::make_point(Eigen::VectorXd p) {
  if (p.size() == 0) throw InputError("point set needs at least 1 dimension");
  ConvexSet s;
  s.kind_ = SetKind::kPoint;
  s.a_ = std::move(p);
  return s;
}

ConvexSet ConvexSet::make_segment(Eigen::VectorXd a, Eigen::VectorXd b) {
  if (a.size() == 0 || a.size() != b.size())
    throw InputError("segment endpoints must share a positive dimension");
  ConvexSet s;
  s.kind_ = SetKind::kSegment;
  s.a_ = std::move(a);
  s.b_ = std::move(b);
  return s;
}

ConvexSet ConvexSet::make_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() == 0 || lo.size() != hi.size())
    throw InputError("box corners must share a positive dimension");
  if (((hi - lo).array() < 0.0).any())
    throw InputError("box requires lo <= hi componentwise");
  ConvexSet s;
  s.kind_ = SetKind::kBox;
  s.a_ = std::move(lo);
  s.b_ = std::move(hi);
  return s;
}

ConvexSet ConvexSet::make_polytope(Eigen::MatrixXd A, Eigen::VectorXd b,
                                   Eigen::VectorXd bbox_lo,
                                   Eigen::VectorXd bbox_hi) {
  const auto n = A.cols();
  if (n == 0 || A.rows() != b.size())
    throw InputError("polytope matrix and rhs sizes disagree");
  if (bbox_lo.size() != n || bbox_hi.size() != n)
    throw InputError("polytope bounding box dimension mismatch");
  if (((bbox_hi - bbox_lo).array() < 0.0).any())
    throw InputError("polytope bounding box requires lo <= hi");
  ConvexSet s;
  s.kind_ = SetKind::kPolytope;
  s.A_ = std::move(A);
  s.rhs_ = std::move(b);
  s.a_ = std::move(bbox_lo);
  s.b_ = std::move(bbox_hi);
  return s;
}

namespace {

Eigen::VectorXd values_of(const ConicSolution& sol, const std::vector<int>& ix) {
  Eigen::VectorXd out(ix.size());
  for (size_t i = 0; i < ix.size(); ++i) out[i] = sol.values[ix[i]];
  return out;
}

/// Chebyshev center: the x maximizing the radius r of a ball {x + ru :
/// ||u|| <= 1} inside {Az <= b}, intersected with the bounding box.
Eigen::VectorXd chebyshev_center(const ConvexSet& set) {
  const int n = set.dimension();
  ConicProgram prog;
  std::vector<int> x(n);
  for (int i = 0; i < n; ++i)
    x[i] = prog.add_variable(set.bbox_lo()[i], set.bbox_hi()[i]);
  const int r = prog.add_variable(0.0, kInf, -1.0);
  const auto& A = set.polytope_A();
  const auto& b = set.polytope_b();
  for (int j = 0; j < A.rows(); ++j) {
    // A_j x + ||A_j|| r + slack == b_j
    LinearRow row;
    for (int i = 0; i < n; ++i)
      if (A(j, i) != 0.0) row.terms.emplace_back(x[i], A(j, i));
    row.terms.emplace_back(r, A.row(j).norm());
    row.terms.emplace_back(prog.add_variable(0.0, kInf), 1.0);
    row.rhs = b[j];
    prog.add_equality(std::move(row));
  }
  const ConicSolution sol = solve_conic(prog);
  if (!sol.optimal())
    throw InputError("polytope is empty or numerically degenerate");
  return values_of(sol, x);
}

double point_segment_distance(const Eigen::VectorXd& p,
                              const Eigen::VectorXd& a,
                              const Eigen::VectorXd& b) {
  const Eigen::VectorXd d = b - a;
  const double dd = d.squaredNorm();
  double sigma = 0.0;
  if (dd > 0.0) sigma = std::clamp((p - a).dot(d) / dd, 0.0, 1.0);
  return (p - a - sigma * d).norm();
}

double point_box_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi) {
  const Eigen::VectorXd q = p.cwiseMax(lo).cwiseMin(hi);
  return (p - q).norm();
}

}  // namespace

Eigen::VectorXd centroid(const ConvexSet& set) {
  switch (set.kind()) {
    case SetKind::kPoint:
      return set.point();
    case SetKind::kSegment:
      return 0.5 * (set.segment_a() + set.segment_b());
    case SetKind::kBox:
      return 0.5 * (set.box_lo() + set.box_hi());
    case SetKind::kPolytope:
      return chebyshev_center(set);
  }
  throw InternalError("unknown set kind");
}

double set_distance(const ConvexSet& a, const ConvexSet& b) {
  if (a.dimension() != b.dimension())
    throw InputError("set_distance dimension mismatch");
  const SetKind ka = a.kind();
  const SetKind kb = b.kind();
  if (kb == SetKind::kPoint && ka != SetKind::kPoint)
    return set_distance(b, a);
  if (ka == SetKind::kPoint) {
    switch (kb) {
      case SetKind::kPoint:
        return (a.point() - b.point()).norm();
      case SetKind::kSegment:
        return point_segment_distance(a.point(), b.segment_a(), b.segment_b());
      case SetKind::kBox:
        return point_box_distance(a.point(), b.box_lo(), b.box_hi());
      case SetKind::kPolytope:
        break;  // conic program below
    }
  }
  const int n = a.dimension();
  ConicProgram prog;
  std::vector<int> xa(n), xb(n);
  for (int i = 0; i < n; ++i) xa[i] = prog.add_variable();
  for (int i = 0; i < n; ++i) xb[i] = prog.add_variable();
  append_membership_rows(prog, a, xa);
  append_membership_rows(prog, b, xb);
  append_distance_cone(prog, xa, xb);
  const ConicSolution sol = solve_conic(prog);
  if (!sol.optimal()) throw InternalError("set_distance program failed");
  return std::max(0.0, sol.objective);
}

bool perspective_membership(const ConvexSet& set, const Eigen::VectorXd& z,
                            double lambda, double tol) {
  if (z.size() != set.dimension())
    throw InputError("perspective_membership dimension mismatch");
  if (lambda < -tol) return false;
  switch (set.kind()) {
    case SetKind::kPoint:
      return (z - lambda * set.point()).lpNorm<Eigen::Infinity>() <= tol;
    case SetKind::kSegment: {
      const Eigen::VectorXd& a = set.segment_a();
      const Eigen::VectorXd d = set.segment_b() - a;
      const double dd = d.squaredNorm();
      double sigma = 0.0;
      if (dd > 0.0)
        sigma = std::clamp((z - lambda * a).dot(d) / dd, 0.0,
                           std::max(lambda, 0.0));
      return (z - lambda * a - sigma * d).lpNorm<Eigen::Infinity>() <= tol;
    }
    case SetKind::kBox:
      return (z.array() >= lambda * set.box_lo().array() - tol).all() &&
             (z.array() <= lambda * set.box_hi().array() + tol).all();
    case SetKind::kPolytope:
      return ((set.polytope_A() * z).array() <=
              lambda * set.polytope_b().array() + tol)
          .all();
  }
  throw InternalError("unknown set kind");
}

}  // namespace gcs
