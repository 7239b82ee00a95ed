// Primal-dual interior-point solver for the standard-form conic problem
//
//   minimize    c'x
//   subject to  A x == b,  G x + s == h,  s in R+^l x SOC x ... x SOC
//
// on the homogeneous self-dual embedding with Nesterov-Todd scaling and a
// Mehrotra predictor-corrector step. The scaled KKT system
//
//       [ dI   A'      G'   ]
//   K = [ A   -dI      0    ]
//       [ G    0   -W'W-dI  ]
//
// is refactorized once per iteration with a sparse LDL' (AMD ordering, no
// pivoting; the static regularization d keeps the pivots away from zero)
// and every solve is polished by iterative refinement. Second-order cone
// scaling blocks are stored densely inside K; the cones built by this
// library have dimension n+1, so the blocks are tiny.

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gcs/conic.hpp"
#include "standard_form.hpp"

namespace gcs {
namespace {

using Eigen::VectorXd;
using detail::StandardForm;

struct Settings {
  double feastol = 1e-8;
  double abstol = 1e-8;
  double reltol = 1e-8;
  double feastol_inacc = 1e-6;
  double abstol_inacc = 1e-6;
  double reltol_inacc = 1e-6;
  double gamma = 0.99;        // step scaling
  double deltastat = 7e-8;    // static regularization
  double stepmin = 1e-6;
  double stepmax = 0.999;
  double sigmamin = 1e-4;
  double sigmamax = 1.0;
  double safeguard = 500.0;   // tolerated primal-residual blowup factor
  int maxit = 100;
  int nitref = 9;             // refinement steps per KKT solve
  double irerrfact = 30.0;    // stop refining on poor progress
  double linsysacc = 1e-14;
  int equil_iters = 3;
};

enum class Exit {
  kOptimal,
  kCloseToOptimal,
  kPrimalInfeasible,
  kDualInfeasible,
  kNumerics,
  kNotConverged
};

struct Iterate {
  VectorXd x, y, z, s, lambda;
  double kap = 1.0, tau = 1.0;
  // statistics
  double gap = 0.0, mu = 0.0, kapovert = 0.0, pcost = 0.0, dcost = 0.0;
  double pres = 0.0, dres = 0.0;
  std::optional<double> relgap, pinfres, dinfres;
  double cx = 0.0, by = 0.0, hz = 0.0;
  double step = 0.0;
  int iter = 0;

  bool better_than(const Iterate& o) const {
    if (pinfres.has_value() && kapovert > 1.0) {
      return gap > 0.0 && o.gap > 0.0 && gap < o.gap && *pinfres > 0.0 &&
             *pinfres < o.pres && mu > 0.0 && mu < o.mu;
    }
    return gap > 0.0 && o.gap > 0.0 && gap < o.gap && pres > 0.0 &&
           pres < o.pres && dres > 0.0 && dres < o.dres && kapovert > 0.0 &&
           kapovert < o.kapovert && mu > 0.0 && mu < o.mu;
  }
};

class IpmSolver {
 public:
  IpmSolver(StandardForm sf, const Settings& settings)
      : sf_(std::move(sf)), st_(settings) {
    n_ = sf_.n;
    p_ = static_cast<int>(sf_.A.rows());
    m_ = static_cast<int>(sf_.G.rows());
    l_ = sf_.l;
    dim_k_ = n_ + p_ + m_;
    cone_start_.clear();
    int start = l_;
    for (int q : sf_.soc_dims) {
      cone_start_.push_back(start);
      start += q;
    }
    c_orig_ = sf_.c;
    equilibrate();
    at_ = sf_.A.transpose();
    gt_ = sf_.G.transpose();
    setup_kkt();
  }

  Exit solve() {
    w_.x.setZero(n_);
    w_.y.setZero(p_);
    w_.z.setZero(m_);
    w_.s.setZero(m_);
    w_.lambda.setZero(m_);
    w_times_dz_.setZero(m_);
    ds_by_w_.setZero(m_);
    ds_.setZero(m_);
    eta_.assign(sf_.soc_dims.size(), 0.0);
    wbar_.assign(sf_.soc_dims.size(), VectorXd());
    lp_v_ = VectorXd::Ones(l_);
    lp_w_ = VectorXd::Ones(l_);

    rhs1_.setZero(dim_k_);
    rhs1_.segment(n_, p_) = sf_.b;
    rhs1_.tail(m_) = sf_.h;
    rhs2_.setZero(dim_k_);
    rhs2_.head(n_) = -sf_.c;

    resx0_ = std::max(1.0, sf_.c.norm());
    resy0_ = std::max(1.0, sf_.b.norm());
    resz0_ = std::max(1.0, sf_.h.norm());

    reset_kkt_scalings();
    ldlt_.analyzePattern(K_);
    ldlt_.factorize(K_);
    if (ldlt_.info() != Eigen::Success) return Exit::kNumerics;

    // Initial primal guess: argmin ||Gx - h|| s.t. Ax = b, slack pushed
    // into the cone interior.
    VectorXd dx1(n_), dy1(p_), dz1(m_);
    solve_kkt(rhs1_, dx1, dy1, dz1, true);
    w_.x = dx1;
    bring_to_cone(-dz1, w_.s);

    // Initial dual guess: argmin ||z|| s.t. G'z + A'y + c = 0.
    VectorXd dx2(n_), dy2(p_), dz2(m_);
    solve_kkt(rhs2_, dx2, dy2, dz2, true);
    w_.y = dy2;
    bring_to_cone(dz2, w_.z);

    rhs1_.head(n_) = -sf_.c;
    w_.kap = 1.0;
    w_.tau = 1.0;

    Exit code = Exit::kNotConverged;
    double pres_prev = std::numeric_limits<double>::max();

    for (w_.iter = 0; w_.iter <= st_.maxit; ++w_.iter) {
      compute_residuals();
      update_statistics();

      if (w_.iter > 0 &&
          (w_.pres > st_.safeguard * pres_prev || w_.gap < 0.0)) {
        w_ = best_;
        code = check_exit(true);
        return code == Exit::kNotConverged ? Exit::kNumerics : code;
      }
      pres_prev = w_.pres;

      code = check_exit(false);
      if (code != Exit::kNotConverged) return code;

      if (w_.iter > 0 && w_.step == st_.stepmin * st_.gamma) {
        w_ = best_;
        code = check_exit(true);
        return code == Exit::kNotConverged ? Exit::kNumerics : code;
      }
      if (w_.iter == st_.maxit) {
        if (w_.iter > 0 && !w_.better_than(best_)) w_ = best_;
        code = check_exit(true);
        return code == Exit::kNotConverged ? Exit::kNumerics : code;
      }
      if (std::isnan(w_.pcost)) {
        if (w_.iter > 0) w_ = best_;
        code = check_exit(true);
        return code == Exit::kNotConverged ? Exit::kNumerics : code;
      }

      if (w_.iter == 0 || w_.better_than(best_)) best_ = w_;

      if (!update_scalings()) {
        w_ = best_;
        code = check_exit(true);
        return code == Exit::kNotConverged ? Exit::kNumerics : code;
      }
      update_kkt_scalings();
      ldlt_.factorize(K_);
      if (ldlt_.info() != Eigen::Success) {
        w_ = best_;
        code = check_exit(true);
        return code == Exit::kNotConverged ? Exit::kNumerics : code;
      }

      solve_kkt(rhs1_, dx1, dy1, dz1, false);

      // Affine (predictor) direction.
      rhs2_.head(n_) = rx_;
      rhs2_.segment(n_, p_) = -ry_;
      rhs2_.tail(m_) = w_.s - rz_;
      solve_kkt(rhs2_, dx2, dy2, dz2, false);

      const double dtau_denom = w_.kap / w_.tau - sf_.c.dot(dx1) -
                                sf_.b.dot(dy1) - sf_.h.dot(dz1);
      const double dtauaff =
          (rt_ - w_.kap + sf_.c.dot(dx2) + sf_.b.dot(dy2) + sf_.h.dot(dz2)) /
          dtau_denom;

      dz2 += dtauaff * dz1;
      scale(dz2, w_times_dz_);
      ds_by_w_ = -w_times_dz_ - w_.lambda;
      const double dkapaff = -w_.kap - w_.kap / w_.tau * dtauaff;

      const double step_aff = line_search(w_.lambda, ds_by_w_, w_times_dz_,
                                          w_.tau, dtauaff, w_.kap, dkapaff);
      const double sigma = std::clamp(std::pow(1.0 - step_aff, 3.0),
                                      st_.sigmamin, st_.sigmamax);

      // Combined (corrector) direction.
      const double sigmamu = sigma * w_.mu;
      VectorXd ds1(m_), ds2(m_);
      conic_product(w_.lambda, w_.lambda, ds1);
      conic_product(ds_by_w_, w_times_dz_, ds2);
      ds1 += ds2;
      ds1.head(l_).array() -= sigmamu;
      for (size_t k = 0; k < cone_start_.size(); ++k)
        ds1(cone_start_[k]) -= sigmamu;
      conic_division(w_.lambda, ds1, ds_by_w_);
      scale(ds_by_w_, ds1);

      rhs2_.head(n_ + p_) *= (1.0 - sigma);
      rhs2_.tail(m_) = -(1.0 - sigma) * rz_ + ds1;
      solve_kkt(rhs2_, dx2, dy2, dz2, false);

      const double bkap = w_.kap * w_.tau + dkapaff * dtauaff - sigmamu;
      const double dtau = ((1.0 - sigma) * rt_ - bkap / w_.tau +
                           sf_.c.dot(dx2) + sf_.b.dot(dy2) + sf_.h.dot(dz2)) /
                          dtau_denom;
      dx2 += dtau * dx1;
      dy2 += dtau * dy1;
      dz2 += dtau * dz1;

      scale(dz2, w_times_dz_);
      ds_by_w_ = -(ds_by_w_ + w_times_dz_);
      const double dkap = -(bkap + w_.kap * dtau) / w_.tau;

      w_.step = st_.gamma * line_search(w_.lambda, ds_by_w_, w_times_dz_,
                                        w_.tau, dtau, w_.kap, dkap);
      scale(ds_by_w_, ds_);

      w_.x += w_.step * dx2;
      w_.y += w_.step * dy2;
      w_.z += w_.step * dz2;
      w_.s += w_.step * ds_;
      w_.kap += w_.step * dkap;
      w_.tau += w_.step * dtau;
    }
    return code;
  }

  /// Solution in original (unequilibrated) units.
  VectorXd solution_x() const {
    return (w_.x.cwiseQuotient(x_equil_)) / w_.tau;
  }
  double objective() const { return c_orig_.dot(solution_x()); }

 private:
  void equilibrate() {
    x_equil_ = VectorXd::Ones(n_);
    VectorXd a_equil = VectorXd::Ones(p_);
    VectorXd g_equil = VectorXd::Ones(m_);
    for (int it = 0; it < st_.equil_iters; ++it) {
      VectorXd x_tmp = VectorXd::Zero(n_);
      VectorXd a_tmp = VectorXd::Zero(p_);
      VectorXd g_tmp = VectorXd::Zero(m_);
      auto scan = [](const Eigen::SparseMatrix<double>& mat, VectorXd& rows,
                     VectorXd& cols) {
        for (int j = 0; j < mat.outerSize(); ++j)
          for (Eigen::SparseMatrix<double>::InnerIterator itc(mat, j); itc;
               ++itc) {
            const double a = std::fabs(itc.value());
            rows(itc.row()) = std::max(rows(itc.row()), a);
            cols(j) = std::max(cols(j), a);
          }
      };
      scan(sf_.A, a_tmp, x_tmp);
      scan(sf_.G, g_tmp, x_tmp);
      // One scale factor per cone so cone geometry is preserved.
      for (size_t k = 0; k < cone_start_.size(); ++k) {
        const int q = sf_.soc_dims[k];
        const double total = g_tmp.segment(cone_start_[k], q).sum();
        g_tmp.segment(cone_start_[k], q).setConstant(total);
      }
      auto sqrt_or_one = [](double v) {
        return std::fabs(v) < 1e-6 ? 1.0 : std::sqrt(v);
      };
      x_tmp = x_tmp.unaryExpr(sqrt_or_one);
      a_tmp = a_tmp.unaryExpr(sqrt_or_one);
      g_tmp = g_tmp.unaryExpr(sqrt_or_one);
      auto apply = [](Eigen::SparseMatrix<double>& mat, const VectorXd& rows,
                      const VectorXd& cols) {
        for (int j = 0; j < mat.outerSize(); ++j)
          for (Eigen::SparseMatrix<double>::InnerIterator itc(mat, j); itc;
               ++itc)
            itc.valueRef() /= rows(itc.row()) * cols(j);
      };
      apply(sf_.A, a_tmp, x_tmp);
      apply(sf_.G, g_tmp, x_tmp);
      x_equil_ = x_equil_.cwiseProduct(x_tmp);
      a_equil = a_equil.cwiseProduct(a_tmp);
      g_equil = g_equil.cwiseProduct(g_tmp);
    }
    sf_.c = sf_.c.cwiseQuotient(x_equil_);
    sf_.b = sf_.b.cwiseQuotient(a_equil);
    sf_.h = sf_.h.cwiseQuotient(g_equil);
  }

  void setup_kkt() {
    // Upper triangle only.
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < n_; ++i) trip.emplace_back(i, i, st_.deltastat);
    for (int i = 0; i < p_; ++i)
      trip.emplace_back(n_ + i, n_ + i, -st_.deltastat);
    for (int j = 0; j < sf_.A.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sf_.A, j); it; ++it)
        trip.emplace_back(j, n_ + it.row(), it.value());
    for (int j = 0; j < sf_.G.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(sf_.G, j); it; ++it)
        trip.emplace_back(j, n_ + p_ + it.row(), it.value());
    const int zoff = n_ + p_;
    for (int i = 0; i < l_; ++i)
      trip.emplace_back(zoff + i, zoff + i, -1.0);
    for (size_t k = 0; k < cone_start_.size(); ++k) {
      const int s0 = zoff + cone_start_[k];
      const int q = sf_.soc_dims[k];
      for (int j = 0; j < q; ++j)
        for (int i = 0; i <= j; ++i)
          trip.emplace_back(s0 + i, s0 + j, i == j ? -1.0 : 0.0);
    }
    K_.resize(dim_k_, dim_k_);
    K_.setFromTriplets(trip.begin(), trip.end());
    K_.makeCompressed();

    scaling_ptr_.clear();
    for (int i = 0; i < l_; ++i)
      scaling_ptr_.push_back(&K_.coeffRef(zoff + i, zoff + i));
    for (size_t k = 0; k < cone_start_.size(); ++k) {
      const int s0 = zoff + cone_start_[k];
      const int q = sf_.soc_dims[k];
      for (int j = 0; j < q; ++j)
        for (int i = 0; i <= j; ++i)
          scaling_ptr_.push_back(&K_.coeffRef(s0 + i, s0 + j));
    }
  }

  void reset_kkt_scalings() {
    size_t ptr = 0;
    for (int i = 0; i < l_; ++i) *scaling_ptr_[ptr++] = -1.0;
    for (size_t k = 0; k < cone_start_.size(); ++k) {
      const int q = sf_.soc_dims[k];
      for (int j = 0; j < q; ++j)
        for (int i = 0; i <= j; ++i) *scaling_ptr_[ptr++] = i == j ? -1.0 : 0.0;
    }
  }

  // Nesterov-Todd scaling point from the current (s, z); fails when an
  // iterate has left the cone interior.
  bool update_scalings() {
    for (int i = 0; i < l_; ++i) {
      if (w_.s(i) <= 0.0 || w_.z(i) <= 0.0) return false;
      lp_v_(i) = w_.s(i) / w_.z(i);
      lp_w_(i) = std::sqrt(lp_v_(i));
    }
    for (size_t k = 0; k < cone_start_.size(); ++k) {
      const int s0 = cone_start_[k];
      const int q = sf_.soc_dims[k];
      const double sres = w_.s(s0) * w_.s(s0) -
                          w_.s.segment(s0 + 1, q - 1).squaredNorm();
      const double zres = w_.z(s0) * w_.z(s0) -
                          w_.z.segment(s0 + 1, q - 1).squaredNorm();
      if (sres <= 0.0 || zres <= 0.0) return false;
      const double snorm = std::sqrt(sres);
      const double znorm = std::sqrt(zres);
      const VectorXd sbar = w_.s.segment(s0, q) / snorm;
      const VectorXd zbar = w_.z.segment(s0, q) / znorm;
      eta_[k] = std::sqrt(snorm / znorm);
      const double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
      VectorXd wb(q);
      wb(0) = (0.5 / gamma) * (sbar(0) + zbar(0));
      wb.tail(q - 1) =
          (0.5 / gamma) * (sbar.tail(q - 1) - zbar.tail(q - 1));
      wbar_[k] = wb;
    }
    scale(w_.z, w_.lambda);
    return true;
  }

  void update_kkt_scalings() {
    size_t ptr = 0;
    for (int i = 0; i < l_; ++i)
      *scaling_ptr_[ptr++] = -lp_v_(i) - st_.deltastat;
    for (size_t k = 0; k < cone_start_.size(); ++k) {
      const int q = sf_.soc_dims[k];
      const double e2 = eta_[k] * eta_[k];
      const VectorXd& wb = wbar_[k];
      // W'W = eta^2 (2 wbar wbar' - J), J = diag(1, -I).
      for (int j = 0; j < q; ++j)
        for (int i = 0; i <= j; ++i) {
          double v = -e2 * 2.0 * wb(i) * wb(j);
          if (i == j) v += e2 * (i == 0 ? 1.0 : -1.0) - st_.deltastat;
          *scaling_ptr_[ptr++] = v;
        }
    }
  }

  /// lambda = W z
  void scale(const VectorXd& z, VectorXd& out) const {
    out.head(l_) = lp_w_.cwiseProduct(z.head(l_));
    for (size_t k = 0; k < cone_start_.size(); ++k) {
      const int s0 = cone_start_[k];
      const int q = sf_.soc_dims[k];
      const VectorXd& wb = wbar_[k];
      const double zeta = wb.tail(q - 1).dot(z.segment(s0 + 1, q - 1));
      const double factor = z(s0) + zeta / (1.0 + wb(0));
      out(s0) = eta_[k] * (wb(0) * z(s0) + zeta);
      out.segment(s0 + 1, q - 1) =
          eta_[k] * (z.segment(s0 + 1, q - 1) + factor * wb.tail(q - 1));
    }
  }

  /// y += W'W x
  void scale2_add(const VectorXd& x, VectorXd& y) const {
    y.head(l_) += lp_v_.cwiseProduct(x.head(l_));
    for (size_t k = 0; k < cone_start_.size(); ++k) {
      const int s0 = cone_start_[k];
      const int q = sf_.soc_dims[k];
      const double e2 = eta_[k] * eta_[k];
      const VectorXd& wb = wbar_[k];
      const double d =
          wb(0) * x(s0) + wb.tail(q - 1).dot(x.segment(s0 + 1, q - 1));
      y(s0) += e2 * (2.0 * wb(0) * d - x(s0));
      y.segment(s0 + 1, q - 1) +=
          e2 * (2.0 * d * wb.tail(q - 1) + x.segment(s0 + 1, q - 1));
    }
  }

  void bring_to_cone(const VectorXd& r, VectorXd& s) const {
    double alpha = -0.99;
    for (int i = 0; i < l_; ++i)
      if (r(i) <= 0.0) alpha = std::max(alpha, -r(i));
    for (size_t k = 0; k < cone_start_.size(); ++k) {
      const int s0 = cone_start_[k];
      const int q = sf_.soc_dims[k];
      const double res = r(s0) - r.segment(s0 + 1, q - 1).norm();
      if (res <= 0.0) alpha = std::max(alpha, -res);
    }
    alpha += 1.0;
    s = r;
    s.head(l_).array() += alpha;
    for (size_t k = 0; k < cone_start_.size(); ++k) s(cone_start_[k]) += alpha;
  }

  void compute_residuals() {
    rx_ = -gt_ * w_.z;
    if (p_ > 0) rx_ -= at_ * w_.y;
    hresx_ = rx_.norm();
    rx_ -= w_.tau * sf_.c;

    if (p_ > 0) {
      ry_ = sf_.A * w_.x;
      hresy_ = ry_.norm();
      ry_ -= w_.tau * sf_.b;
    } else {
      ry_.resize(0);
      hresy_ = 0.0;
    }

    rz_ = w_.s + sf_.G * w_.x;
    hresz_ = rz_.norm();
    rz_ -= w_.tau * sf_.h;

    w_.cx = sf_.c.dot(w_.x);
    w_.by = p_ > 0 ? sf_.b.dot(w_.y) : 0.0;
    w_.hz = sf_.h.dot(w_.z);
    rt_ = w_.kap + w_.cx + w_.by + w_.hz;

    nx_ = w_.x.norm();
    ny_ = w_.y.norm();
    nz_ = w_.z.norm();
    ns_ = w_.s.norm();
  }

  void update_statistics() {
    w_.gap = w_.s.dot(w_.z);
    const int degree = l_ + static_cast<int>(cone_start_.size());
    w_.mu = (w_.gap + w_.kap * w_.tau) / (degree + 1);
    w_.kapovert = w_.kap / w_.tau;
    w_.pcost = w_.cx / w_.tau;
    w_.dcost = -(w_.hz + w_.by) / w_.tau;
    if (w_.pcost < 0.0)
      w_.relgap = w_.gap / (-w_.pcost);
    else if (w_.dcost > 0.0)
      w_.relgap = w_.gap / w_.dcost;
    else
      w_.relgap = std::nullopt;

    const double nry =
        p_ > 0 ? ry_.norm() / std::max(resy0_ + nx_, 1.0) : 0.0;
    const double nrz = rz_.norm() / std::max(resz0_ + nx_ + ns_, 1.0);
    w_.pres = std::max(nry, nrz) / w_.tau;
    w_.dres = rx_.norm() / std::max(resx0_ + ny_ + nz_, 1.0) / w_.tau;

    w_.pinfres.reset();
    w_.dinfres.reset();
    if ((w_.hz + w_.by) / std::max(ny_ + nz_, 1.0) < -st_.reltol)
      w_.pinfres = hresx_ / std::max(ny_ + nz_, 1.0);
    if (w_.cx / std::max(nx_, 1.0) < -st_.reltol)
      w_.dinfres = std::max(hresy_ / std::max(nx_, 1.0),
                            hresz_ / std::max(nx_ + ns_, 1.0));
  }

  Exit check_exit(bool reduced) const {
    const double feastol = reduced ? st_.feastol_inacc : st_.feastol;
    const double abstol = reduced ? st_.abstol_inacc : st_.abstol;
    const double reltol = reduced ? st_.reltol_inacc : st_.reltol;
    if ((-w_.cx > 0.0 || -w_.by - w_.hz >= -abstol) &&
        w_.pres < feastol && w_.dres < feastol &&
        (w_.gap < abstol || (w_.relgap && *w_.relgap < reltol))) {
      return reduced ? Exit::kCloseToOptimal : Exit::kOptimal;
    }
    if (w_.dinfres && *w_.dinfres < feastol && w_.tau < w_.kap)
      return Exit::kDualInfeasible;
    if (w_.pinfres &&
        ((*w_.pinfres < feastol && w_.tau < w_.kap) ||
         (w_.tau < feastol && w_.kap < feastol && *w_.pinfres < feastol)))
      return Exit::kPrimalInfeasible;
    return Exit::kNotConverged;
  }

  /// w = u o v (Jordan product per cone block)
  void conic_product(const VectorXd& u, const VectorXd& v, VectorXd& w) const {
    w.head(l_) = u.head(l_).cwiseProduct(v.head(l_));
    for (size_t k = 0; k < cone_start_.size(); ++k) {
      const int s0 = cone_start_[k];
      const int q = sf_.soc_dims[k];
      w(s0) = u.segment(s0, q).dot(v.segment(s0, q));
      w.segment(s0 + 1, q - 1) = u(s0) * v.segment(s0 + 1, q - 1) +
                                 v(s0) * u.segment(s0 + 1, q - 1);
    }
  }

  /// v = u \ w (inverse Jordan product)
  void conic_division(const VectorXd& u, const VectorXd& w, VectorXd& v) const {
    v.head(l_) = w.head(l_).cwiseQuotient(u.head(l_));
    for (size_t k = 0; k < cone_start_.size(); ++k) {
      const int s0 = cone_start_[k];
      const int q = sf_.soc_dims[k];
      const double u0 = u(s0);
      const double w0 = w(s0);
      const double rho = u0 * u0 - u.segment(s0 + 1, q - 1).squaredNorm();
      const double zeta = u.segment(s0 + 1, q - 1).dot(w.segment(s0 + 1, q - 1));
      const double factor = (zeta / u0 - w0) / rho;
      v(s0) = (u0 * w0 - zeta) / rho;
      v.segment(s0 + 1, q - 1) =
          factor * u.segment(s0 + 1, q - 1) + w.segment(s0 + 1, q - 1) / u0;
    }
  }

  double line_search(const VectorXd& lambda, const VectorXd& ds,
                     const VectorXd& dz, double tau, double dtau, double kap,
                     double dkap) const {
    double alpha = 10.0;
    if (l_ > 0) {
      const double rhomin =
          (ds.head(l_).cwiseQuotient(lambda.head(l_))).minCoeff();
      const double sigmamin =
          (dz.head(l_).cwiseQuotient(lambda.head(l_))).minCoeff();
      constexpr double eps = 1e-13;
      if (-sigmamin > -rhomin)
        alpha = sigmamin < 0.0 ? 1.0 / (-sigmamin) : 1.0 / eps;
      else
        alpha = rhomin < 0.0 ? 1.0 / (-rhomin) : 1.0 / eps;
    }
    const double tau_limit = -tau / dtau;
    const double kap_limit = -kap / dkap;
    if (tau_limit > 0.0 && tau_limit < alpha) alpha = tau_limit;
    if (kap_limit > 0.0 && kap_limit < alpha) alpha = kap_limit;

    for (size_t k = 0; k < cone_start_.size(); ++k) {
      const int s0 = cone_start_[k];
      const int q = sf_.soc_dims[k];
      const double lknorm2 = lambda(s0) * lambda(s0) -
                             lambda.segment(s0 + 1, q - 1).squaredNorm();
      if (lknorm2 <= 0.0) continue;
      const double lknorm = std::sqrt(lknorm2);
      const VectorXd lkbar = lambda.segment(s0, q) / lknorm;
      const double inv = 1.0 / lknorm;

      const double lk_ds = lkbar(0) * ds(s0) -
                           lkbar.tail(q - 1).dot(ds.segment(s0 + 1, q - 1));
      const double lk_dz = lkbar(0) * dz(s0) -
                           lkbar.tail(q - 1).dot(dz.segment(s0 + 1, q - 1));

      VectorXd rho(q);
      rho(0) = inv * lk_ds;
      double factor = (lk_ds + ds(s0)) / (lkbar(0) + 1.0);
      rho.tail(q - 1) = inv * (ds.segment(s0 + 1, q - 1) -
                               factor * lkbar.tail(q - 1));
      const double rhonorm = rho.tail(q - 1).norm() - rho(0);

      VectorXd sig(q);
      sig(0) = inv * lk_dz;
      factor = (lk_dz + dz(s0)) / (lkbar(0) + 1.0);
      sig.tail(q - 1) = inv * (dz.segment(s0 + 1, q - 1) -
                               factor * lkbar.tail(q - 1));
      const double signorm = sig.tail(q - 1).norm() - sig(0);

      const double conic_step = std::max({0.0, rhonorm, signorm});
      if (conic_step != 0.0) alpha = std::min(alpha, 1.0 / conic_step);
    }
    return std::clamp(alpha, st_.stepmin, st_.stepmax);
  }

  int solve_kkt(const VectorXd& rhs, VectorXd& dx, VectorXd& dy, VectorXd& dz,
                bool initialize) {
    VectorXd x = ldlt_.solve(rhs);
    const double threshold =
        (1.0 + rhs.lpNorm<Eigen::Infinity>()) * st_.linsysacc;
    double nerr_prev = std::numeric_limits<double>::max();
    VectorXd correction(dim_k_);

    const auto bx = rhs.head(n_);
    const auto by = rhs.segment(n_, p_);
    const auto bz = rhs.tail(m_);

    int k_ref;
    for (k_ref = 0; k_ref <= st_.nitref; ++k_ref) {
      const auto dxc = x.head(n_);
      const auto dyc = x.segment(n_, p_);
      const auto dzc = x.tail(m_);

      VectorXd ex = bx - gt_ * dzc;
      if (p_ > 0) ex -= at_ * dyc;
      ex -= st_.deltastat * dxc;
      VectorXd ey = by;
      if (p_ > 0) ey -= sf_.A * dxc;
      ey += st_.deltastat * dyc;
      VectorXd ez = bz - sf_.G * dxc;
      if (initialize) {
        ez += dzc;
      } else {
        scale2_add(dzc, ez);
        ez += st_.deltastat * dzc;
      }

      double nerr = std::max(ex.lpNorm<Eigen::Infinity>(),
                             ez.lpNorm<Eigen::Infinity>());
      if (p_ > 0) nerr = std::max(nerr, ey.lpNorm<Eigen::Infinity>());

      if (k_ref > 0 && nerr > nerr_prev) {
        x -= correction;
        --k_ref;
        break;
      }
      if (k_ref == st_.nitref || nerr < threshold ||
          (k_ref > 0 && nerr_prev < st_.irerrfact * nerr)) {
        break;
      }
      nerr_prev = nerr;

      VectorXd e(dim_k_);
      e << ex, ey, ez;
      correction = ldlt_.solve(e);
      x += correction;
    }

    dx = x.head(n_);
    dy = x.segment(n_, p_);
    dz = x.tail(m_);
    return k_ref;
  }

 public:
  ConicSolution finish(Exit code) const {
    ConicSolution sol;
    switch (code) {
      case Exit::kOptimal:
      case Exit::kCloseToOptimal:
        sol.status = SolveStatus::kOptimal;
        sol.objective = objective();
        {
          const VectorXd x = solution_x();
          sol.values.assign(x.data(), x.data() + x.size());
        }
        break;
      case Exit::kPrimalInfeasible:
        sol.status = SolveStatus::kInfeasible;
        sol.objective = kInf;
        break;
      default:
        sol.status = SolveStatus::kNumericalFailure;
        break;
    }
    return sol;
  }

 private:
  StandardForm sf_;
  Settings st_;
  int n_ = 0, p_ = 0, m_ = 0, l_ = 0, dim_k_ = 0;
  std::vector<int> cone_start_;
  VectorXd c_orig_;
  VectorXd x_equil_;
  Eigen::SparseMatrix<double> at_, gt_, K_;
  std::vector<double*> scaling_ptr_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Upper> ldlt_;

  Iterate w_, best_;
  VectorXd lp_v_, lp_w_;
  std::vector<double> eta_;
  std::vector<VectorXd> wbar_;
  VectorXd rhs1_, rhs2_;
  VectorXd rx_, ry_, rz_;
  VectorXd w_times_dz_, ds_by_w_, ds_;
  double hresx_ = 0.0, hresy_ = 0.0, hresz_ = 0.0;
  double rt_ = 0.0;
  double nx_ = 0.0, ny_ = 0.0, nz_ = 0.0, ns_ = 0.0;
  double resx0_ = 1.0, resy0_ = 1.0, resz0_ = 1.0;
};

/// Equality-only programs bypass the embedding: solve the stationarity
/// system directly and classify by residuals.
ConicSolution solve_equality_only(const StandardForm& sf, double accuracy) {
  ConicSolution sol;
  const int n = sf.n;
  const int p = static_cast<int>(sf.A.rows());
  Eigen::SparseMatrix<double> K(n + p, n + p);
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i) trip.emplace_back(i, i, 1e-10);
  for (int i = 0; i < p; ++i) trip.emplace_back(n + i, n + i, -1e-10);
  for (int j = 0; j < sf.A.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sf.A, j); it; ++it)
      trip.emplace_back(j, n + it.row(), it.value());
  K.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Upper> ldlt(K);
  if (ldlt.info() != Eigen::Success) return sol;
  VectorXd rhs(n + p);
  rhs.head(n) = -sf.c;
  rhs.tail(p) = sf.b;
  const VectorXd xy = ldlt.solve(rhs);
  const VectorXd x = xy.head(n);
  const VectorXd y = xy.tail(p);
  const double scale = std::max(1.0, sf.b.norm());
  if (p > 0 && (sf.A * x - sf.b).norm() > accuracy * 10.0 * scale) {
    sol.status = SolveStatus::kInfeasible;
    sol.objective = kInf;
    return sol;
  }
  const double dres = (sf.A.transpose() * y + sf.c).norm();
  if (dres > std::sqrt(accuracy) * std::max(1.0, sf.c.norm())) {
    return sol;  // unbounded or inconsistent: numerical failure
  }
  sol.status = SolveStatus::kOptimal;
  sol.objective = sf.c.dot(x);
  sol.values.assign(x.data(), x.data() + x.size());
  return sol;
}

class NativeBackend final : public ConicBackend {
 public:
  ConicSolution solve(const ConicProgram& program,
                      double accuracy) const override {
    const auto t0 = std::chrono::steady_clock::now();
    StandardForm sf = detail::lower_to_standard_form(program);
    ConicSolution sol;
    if (sf.G.rows() == 0) {
      sol = solve_equality_only(sf, accuracy);
    } else {
      Settings settings;
      settings.feastol = accuracy;
      settings.abstol = accuracy;
      settings.reltol = accuracy;
      settings.feastol_inacc = 10.0 * accuracy;
      settings.abstol_inacc = 10.0 * accuracy;
      settings.reltol_inacc = 10.0 * accuracy;
      IpmSolver solver(std::move(sf), settings);
      sol = solver.finish(solver.solve());
    }
    sol.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return sol;
  }

  const char* name() const override { return "ipm"; }
};

}  // namespace

const ConicBackend& native_backend() {
  static const NativeBackend backend;
  return backend;
}

}  // namespace gcs
