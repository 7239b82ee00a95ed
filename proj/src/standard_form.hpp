#pragma once

// Internal: lowering of a ConicProgram to the standard conic form
//
//   minimize    c'x
//   subject to  A x == b
//               G x + s == h,  s in K = R+^l  x  SOC_{q_1} x ... x SOC_{q_N}
//
// shared by the interior-point and the splitting backends. Interval bounds
// become rows of the nonnegative-orthant block; a bound pair with
// lower == upper becomes an equality row instead so the interior stays
// nonempty. Cone constraints t >= ||Mx + q|| become SOC blocks
// s = (t, Mx + q).

#include <Eigen/SparseCore>
#include <vector>

#include "gcs/conic.hpp"

namespace gcs::detail {

struct StandardForm {
  int n = 0;  // variables (same indexing as the ConicProgram)
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  Eigen::SparseMatrix<double> G;
  Eigen::VectorXd h;
  Eigen::VectorXd c;
  int l = 0;                  // leading nonnegative rows of the cone block
  std::vector<int> soc_dims;  // second-order cone sizes, in order
};

StandardForm lower_to_standard_form(const ConicProgram& program);

}  // namespace gcs::detail
