#include "standard_form.hpp"

#include <cmath>

#include "gcs/errors.hpp"

namespace gcs::detail {

StandardForm lower_to_standard_form(const ConicProgram& program) {
  StandardForm sf;
  sf.n = program.num_variables();
  sf.c = Eigen::Map<const Eigen::VectorXd>(program.objective().data(), sf.n);

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> a_trip;
  std::vector<double> b_vals;
  std::vector<Triplet> g_trip;
  std::vector<double> h_vals;

  auto add_eq_row = [&](const LinearRow& row) {
    const int r = static_cast<int>(b_vals.size());
    for (const auto& [var, coeff] : row.terms)
      a_trip.emplace_back(r, var, coeff);
    b_vals.push_back(row.rhs);
  };

  for (const auto& row : program.equalities()) add_eq_row(row);

  // Bounds. Fixed variables go to the equality block.
  for (int i = 0; i < sf.n; ++i) {
    const double lo = program.lower()[i];
    const double hi = program.upper()[i];
    if (lo > hi) throw InputError("variable bound with lower > upper");
    if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= 1e-14) {
      LinearRow row;
      row.terms.emplace_back(i, 1.0);
      row.rhs = lo;
      add_eq_row(row);
      continue;
    }
    if (std::isfinite(lo)) {
      // s = x_i - lo >= 0
      const int r = static_cast<int>(h_vals.size());
      g_trip.emplace_back(r, i, -1.0);
      h_vals.push_back(-lo);
    }
    if (std::isfinite(hi)) {
      // s = hi - x_i >= 0
      const int r = static_cast<int>(h_vals.size());
      g_trip.emplace_back(r, i, 1.0);
      h_vals.push_back(hi);
    }
  }
  sf.l = static_cast<int>(h_vals.size());

  for (const auto& cone : program.cones()) {
    // s_0 = t
    int r = static_cast<int>(h_vals.size());
    g_trip.emplace_back(r, cone.t_var, -1.0);
    h_vals.push_back(0.0);
    // s_j = M_j x + q_j
    for (const auto& row : cone.rows) {
      r = static_cast<int>(h_vals.size());
      for (const auto& [var, coeff] : row.terms)
        g_trip.emplace_back(r, var, -coeff);
      h_vals.push_back(row.rhs);
    }
    sf.soc_dims.push_back(static_cast<int>(cone.rows.size()) + 1);
  }

  const int p = static_cast<int>(b_vals.size());
  const int m = static_cast<int>(h_vals.size());
  sf.A.resize(p, sf.n);
  sf.A.setFromTriplets(a_trip.begin(), a_trip.end());
  sf.b = Eigen::Map<const Eigen::VectorXd>(b_vals.data(), p);
  sf.G.resize(m, sf.n);
  sf.G.setFromTriplets(g_trip.begin(), g_trip.end());
  sf.h = Eigen::Map<const Eigen::VectorXd>(h_vals.data(), m);
  return sf;
}

}  // namespace gcs::detail
