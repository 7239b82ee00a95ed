#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace gcs {

/// Default solver accuracy. Downstream bound comparisons use 1e-6 slack, so
/// the backend targets one digit better.
inline constexpr double kDefaultAccuracy = 1e-7;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A sparse linear expression sum_i coeff_i * x_{index_i} with a constant
/// right-hand side, used both for equality rows (expr == rhs) and for cone
/// rows (rhs acts as the constant offset of the row).
struct LinearRow {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
};

/// Linear objective, linear equality constraints, variable interval bounds
/// and second-order cone constraints t >= ||Mx + q||_2. Immutable once
/// handed to a solver; building is single-threaded.
class ConicProgram {
 public:
  /// Returns the index of the new variable.
  int add_variable(double lower = -kInf, double upper = kInf,
                   double cost = 0.0);
  /// Appends `count` variables with identical bounds; returns the first
  /// index.
  int add_variables(int count, double lower = -kInf, double upper = kInf);

  void set_cost(int var, double coeff);
  void add_to_cost(int var, double coeff);
  void set_bounds(int var, double lower, double upper);

  /// expr == rhs
  void add_equality(LinearRow row);
  /// t_var >= || rows ||_2 where each row is an affine expression.
  void add_cone(int t_var, std::vector<LinearRow> rows);

  int num_variables() const { return num_vars_; }
  int num_equalities() const { return static_cast<int>(equalities_.size()); }
  int num_cones() const { return static_cast<int>(cones_.size()); }

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<LinearRow>& equalities() const { return equalities_; }

  struct Cone {
    int t_var;
    std::vector<LinearRow> rows;
  };
  const std::vector<Cone>& cones() const { return cones_; }

  /// Plain-text dump (objective, bounds, equalities, cones) for offline
  /// inspection.
  std::string dump() const;

 private:
  void check_var(int var) const;

  int num_vars_ = 0;
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<LinearRow> equalities_;
  std::vector<Cone> cones_;
};

enum class SolveStatus { kOptimal, kInfeasible, kNumericalFailure };

const char* to_string(SolveStatus status);

struct ConicSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double objective = 0.0;
  std::vector<double> values;  // present iff status == kOptimal
  double wall_seconds = 0.0;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

/// Solver adapter. Implementations must not share mutable state across
/// solve calls: concurrent solves of distinct programs are safe.
class ConicBackend {
 public:
  virtual ~ConicBackend() = default;
  virtual ConicSolution solve(const ConicProgram& program,
                              double accuracy) const = 0;
  virtual const char* name() const = 0;
};

/// Interior-point backend. Handles every program this library builds and is
/// the default everywhere.
const ConicBackend& native_backend();

/// Projection-splitting first-order backend. Kept for cross-checking the
/// native backend on tiny test programs; too slow for production sizes.
const ConicBackend& reference_backend();

/// Solves with the native backend. Infeasible programs yield status
/// kInfeasible, never an exception; solver breakdowns yield
/// kNumericalFailure.
ConicSolution solve_conic(const ConicProgram& program,
                          double accuracy = kDefaultAccuracy);

}  // namespace gcs
