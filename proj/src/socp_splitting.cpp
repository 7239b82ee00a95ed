// Reference backend: a primal-dual projection splitting method on the same
// standard form the interior-point backend uses,
//
//   minimize  c'x  subject to  Ax == b,  h - Gx in K.
//
// Each iteration costs two matrix-vector products and one projection onto
// the dual cone, so it is dead simple to audit, which is the point: it
// cross-checks the interior-point backend on tiny test programs. It makes
// no attempt at infeasibility detection and converges far too slowly for
// production sizes.

#include <Eigen/SparseCore>
#include <chrono>
#include <cmath>

#include "gcs/conic.hpp"
#include "standard_form.hpp"

namespace gcs {
namespace {

using Eigen::VectorXd;
using detail::StandardForm;

/// Projection onto K = R+^l x SOC x ... x SOC (self-dual).
void project_cone(const StandardForm& sf, VectorXd& v) {
  v.head(sf.l) = v.head(sf.l).cwiseMax(0.0);
  int start = sf.l;
  for (int q : sf.soc_dims) {
    const double t = v(start);
    const double nrm = v.segment(start + 1, q - 1).norm();
    if (nrm <= t) {
      // inside
    } else if (nrm <= -t) {
      v.segment(start, q).setZero();
    } else {
      const double scalefac = 0.5 * (1.0 + t / nrm);
      v(start) = scalefac * nrm;
      v.segment(start + 1, q - 1) *= scalefac;
    }
    start += q;
  }
}

double operator_norm(const Eigen::SparseMatrix<double>& A,
                     const Eigen::SparseMatrix<double>& G) {
  const int n = static_cast<int>(A.cols() > 0 ? A.cols() : G.cols());
  if (n == 0) return 1.0;
  VectorXd v = VectorXd::Ones(n).normalized();
  double norm = 1.0;
  for (int it = 0; it < 60; ++it) {
    VectorXd w = A.transpose() * (A * v) + G.transpose() * (G * v);
    norm = std::sqrt(w.norm());
    if (w.norm() == 0.0) return 1.0;
    v = w.normalized();
  }
  return std::max(norm, 1e-12);
}

class SplittingBackend final : public ConicBackend {
 public:
  ConicSolution solve(const ConicProgram& program,
                      double accuracy) const override {
    const auto t0 = std::chrono::steady_clock::now();
    const StandardForm sf = detail::lower_to_standard_form(program);
    const int n = sf.n;
    const int p = static_cast<int>(sf.A.rows());
    const int m = static_cast<int>(sf.G.rows());

    const double L = operator_norm(sf.A, sf.G);
    const double tau = 0.9 / L;
    const double sigma = 0.9 / L;

    VectorXd x = VectorXd::Zero(n), x_bar = x;
    VectorXd y = VectorXd::Zero(p);
    VectorXd z = VectorXd::Zero(m);

    ConicSolution sol;
    const double scale_b = std::max(1.0, sf.b.norm());
    const double scale_h = std::max(1.0, sf.h.norm());
    const double scale_c = std::max(1.0, sf.c.norm());
    const int max_iters = 400000;
    const int check_every = 50;

    for (int it = 0; it < max_iters; ++it) {
      if (p > 0) y += sigma * (sf.A * x_bar - sf.b);
      if (m > 0) {
        z += sigma * (sf.G * x_bar - sf.h);
        project_cone(sf, z);
      }
      const VectorXd x_prev = x;
      x -= tau * (sf.c + sf.A.transpose() * y + sf.G.transpose() * z);
      x_bar = 2.0 * x - x_prev;

      if (it % check_every != 0) continue;
      double pres = 0.0;
      if (p > 0) pres = (sf.A * x - sf.b).lpNorm<Eigen::Infinity>() / scale_b;
      if (m > 0) {
        VectorXd slack = sf.h - sf.G * x;
        VectorXd proj = slack;
        project_cone(sf, proj);
        pres = std::max(pres,
                        (slack - proj).lpNorm<Eigen::Infinity>() / scale_h);
      }
      const double dres = (sf.c + sf.A.transpose() * y + sf.G.transpose() * z)
                              .lpNorm<Eigen::Infinity>() /
                          scale_c;
      const double pobj = sf.c.dot(x);
      const double dobj = -sf.b.dot(y) - sf.h.dot(z);
      const double gap =
          std::fabs(pobj - dobj) / std::max(1.0, std::fabs(pobj));
      if (pres < accuracy && dres < accuracy && gap < accuracy) {
        sol.status = SolveStatus::kOptimal;
        sol.objective = pobj;
        sol.values.assign(x.data(), x.data() + x.size());
        break;
      }
    }
    sol.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return sol;
  }

  const char* name() const override { return "splitting"; }
};

}  // namespace

const ConicBackend& reference_backend() {
  static const SplittingBackend backend;
  return backend;
}

}  // namespace gcs
