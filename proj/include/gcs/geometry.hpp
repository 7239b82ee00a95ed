#pragma once

#include <Eigen/Core>
#include <vector>

namespace gcs {

/// Default tolerance for geometric membership checks. Matches the default
/// accuracy of the conic backend.
inline constexpr double kGeomTol = 1e-6;

enum class SetKind { kPoint, kSegment, kBox, kPolytope };

const char* to_string(SetKind kind);

/// A non-empty compact convex region in R^n. One of:
///   point     a single point p
///   segment   the segment between endpoints a and b
///   box       the axis-aligned box [lo, hi]
///   polytope  a bounded H-polytope {x : Ax <= b} with an explicit
///             enclosing box that certifies compactness
///
/// Instances are immutable after construction and safe to share across
/// threads.
class ConvexSet {
 public:
  static ConvexSet make_point(Eigen::VectorXd p);
  static ConvexSet make_segment(Eigen::VectorXd a, Eigen::VectorXd b);
  static ConvexSet make_box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  /// The enclosing box [bbox_lo, bbox_hi] must contain {x : Ax <= b}; it is
  /// how boundedness is certified without solving support problems.
  static ConvexSet make_polytope(Eigen::MatrixXd A, Eigen::VectorXd b,
                                 Eigen::VectorXd bbox_lo,
                                 Eigen::VectorXd bbox_hi);

  SetKind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(a_.size()); }

  // Accessors per kind; only valid for the matching kind.
  const Eigen::VectorXd& point() const { return a_; }
  const Eigen::VectorXd& segment_a() const { return a_; }
  const Eigen::VectorXd& segment_b() const { return b_; }
  const Eigen::VectorXd& box_lo() const { return a_; }
  const Eigen::VectorXd& box_hi() const { return b_; }
  const Eigen::MatrixXd& polytope_A() const { return A_; }
  const Eigen::VectorXd& polytope_b() const { return rhs_; }
  const Eigen::VectorXd& bbox_lo() const { return a_; }
  const Eigen::VectorXd& bbox_hi() const { return b_; }

 private:
  ConvexSet() = default;
  SetKind kind_ = SetKind::kPoint;
  // point: a_ = p.  segment: a_, b_ endpoints.  box: a_ = lo, b_ = hi.
  // polytope: A_, rhs_ plus a_ = bbox lo, b_ = bbox hi.
  Eigen::VectorXd a_;
  Eigen::VectorXd b_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd rhs_;
};

/// A point inside the set: the point itself, the segment midpoint, the box
/// center, or the Chebyshev center (center of the largest inscribed ball)
/// for a polytope.
Eigen::VectorXd centroid(const ConvexSet& set);

/// min { ||x - x'||_2 : x in a, x' in b }. Closed form for point-point,
/// point-segment and point-box; one small conic program otherwise.
double set_distance(const ConvexSet& a, const ConvexSet& b);

/// True iff (z, lambda) lies within `tol` of the closure of
/// {(x, lambda) : lambda >= 0, x in lambda * X}.
bool perspective_membership(const ConvexSet& set, const Eigen::VectorXd& z,
                            double lambda, double tol = kGeomTol);

}  // namespace gcs
