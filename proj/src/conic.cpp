#include "gcs/conic.hpp"

#include <sstream>

#include "gcs/errors.hpp"

namespace gcs {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kNumericalFailure:
      return "numerical-failure";
  }
  return "?";
}

void ConicProgram::check_var(int var) const {
  if (var < 0 || var >= num_vars_)
    throw InputError("variable index " + std::to_string(var) +
                     " out of range");
}

int ConicProgram::add_variable(double lower, double upper, double cost) {
  objective_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  return num_vars_++;
}

int ConicProgram::add_variables(int count, double lower, double upper) {
  const int first = num_vars_;
  for (int i = 0; i < count; ++i) add_variable(lower, upper);
  return first;
}

void ConicProgram::set_cost(int var, double coeff) {
  check_var(var);
  objective_[var] = coeff;
}

void ConicProgram::add_to_cost(int var, double coeff) {
  check_var(var);
  objective_[var] += coeff;
}

void ConicProgram::set_bounds(int var, double lower, double upper) {
  check_var(var);
  lower_[var] = lower;
  upper_[var] = upper;
}

void ConicProgram::add_equality(LinearRow row) {
  for (const auto& [var, coeff] : row.terms) {
    check_var(var);
    (void)coeff;
  }
  equalities_.push_back(std::move(row));
}

void ConicProgram::add_cone(int t_var, std::vector<LinearRow> rows) {
  check_var(t_var);
  for (const auto& row : rows)
    for (const auto& [var, coeff] : row.terms) {
      check_var(var);
      (void)coeff;
    }
  cones_.push_back(Cone{t_var, std::move(rows)});
}

namespace {

void write_row(std::ostringstream& out, const LinearRow& row) {
  bool first = true;
  for (const auto& [var, coeff] : row.terms) {
    out << (first ? "" : " + ") << coeff << "*x" << var;
    first = false;
  }
  if (first) out << "0";
}

}  // namespace

std::string ConicProgram::dump() const {
  std::ostringstream out;
  out << "minimize";
  for (int i = 0; i < num_vars_; ++i)
    if (objective_[i] != 0.0) out << " + " << objective_[i] << "*x" << i;
  out << "\n";
  for (int i = 0; i < num_vars_; ++i) {
    if (lower_[i] != -kInf || upper_[i] != kInf)
      out << "  " << lower_[i] << " <= x" << i << " <= " << upper_[i] << "\n";
  }
  for (const auto& row : equalities_) {
    out << "  ";
    write_row(out, row);
    out << " == " << row.rhs << "\n";
  }
  for (const auto& cone : cones_) {
    out << "  x" << cone.t_var << " >= norm(";
    for (size_t i = 0; i < cone.rows.size(); ++i) {
      if (i) out << "; ";
      write_row(out, cone.rows[i]);
      if (cone.rows[i].rhs != 0.0) out << " + " << cone.rows[i].rhs;
    }
    out << ")\n";
  }
  return out.str();
}

ConicSolution solve_conic(const ConicProgram& program, double accuracy) {
  return native_backend().solve(program, accuracy);
}

}  // namespace gcs
