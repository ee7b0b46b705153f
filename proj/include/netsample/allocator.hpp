#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "netsample/equilibrium.hpp"

namespace netsample {

// All sample counts in this header are normalized: m_i is expressed in units
// of M(eps), the sample count an isolated agent needs to reach error eps.
// With that normalization the allocation problem reads
//
//   minimize  sum_i m_i   s.t.  sum_j a_ij^2 / m_j <= 1  for all i,  m > 0,
//
// and its dual is  maximize 2 sum_i sqrt(sum_j lambda_j a_ij^2) - sum_i lambda_i
// over lambda >= 0.

enum class SolveStatus { ClosedForm, BarrierConverged, Infeasible, Stalled };

std::string_view to_string(SolveStatus status);

struct Allocation {
  Eigen::VectorXd m;
  double objective = 0;
  Eigen::VectorXd lambda;
  double gap = 0;  ///< (objective - dual_value(lambda)) / objective
  SolveStatus status = SolveStatus::Infeasible;
  std::size_t newton_steps = 0;
  std::string diagnostics;

  bool ok() const noexcept {
    return status == SolveStatus::ClosedForm || status == SolveStatus::BarrierConverged;
  }
};

/// B = (A o A)^{-1} together with its row sums and the candidate dual point
/// lambda_i = sum_j b_ij / s_j^2.
struct BMatrixSummary {
  Eigen::MatrixXd b;
  Eigen::VectorXd row_sums;
  Eigen::VectorXd lambda;
  bool valid = false;  ///< every lambda_i >= 0
  double residual = 0; ///< max |Q B - I|
};

/// Throws NumericalError if Q cannot be inverted to 1e-8 or a row sum of B is
/// not positive.
BMatrixSummary b_matrix_summary(const EquilibriumWeights& ew);

/// m_i = 1 / s_i when the candidate duals are nonnegative; empty otherwise.
std::optional<Allocation> closed_form_solve(const BMatrixSummary& bs);

struct BarrierOptions {
  double tol = 1e-8;       ///< relative duality gap
  double feas_tol = 1e-9;  ///< constraint residual accepted on output
  double mu_initial = 1.0;
  double mu_factor = 0.2;
  double armijo_c = 0.01;
  double backtrack = 0.5;
  double centering_tol = 1e-3;  ///< inner stop: decrement^2 / 2 <= mu * centering_tol
  std::size_t max_outer = 200;
  std::size_t max_newton_per_center = 200;
};

/// Log-barrier interior-point method on the reciprocal variables t = 1/m,
/// where the constraints become linear (Q t <= 1). Newton inner iterations
/// with backtracking; duals recovered as mu / slack.
Allocation solve_primal(const EquilibriumWeights& ew, const BarrierOptions& options = {});

/// Closed form when it applies, barrier otherwise.
Allocation solve(const EquilibriumWeights& ew, const BarrierOptions& options = {});

/// Dual objective at lambda >= 0. Throws std::invalid_argument on negative
/// or non-finite entries.
double dual_value(const EquilibriumWeights& ew, const Eigen::VectorXd& lambda);

/// sum_j a_ij^2 / m_j for every i; the allocation is feasible when all are <= 1.
Eigen::VectorXd constraint_values(const EquilibriumWeights& ew, const Eigen::VectorXd& m);

/// True when m > 0 and every constraint value is <= 1 + feas_tol.
bool is_feasible(const EquilibriumWeights& ew, const Eigen::VectorXd& m, double feas_tol = 1e-9);

struct KktReport {
  double stationarity = 0;     ///< max_i |m_i - sqrt(sum_j lambda_j a_ij^2)| / m_i
  double complementarity = 0;  ///< max_i lambda_i |1 - sum_j a_ij^2 / m_j|
  double feasibility = 0;      ///< max(0, max_i sum_j a_ij^2 / m_j - 1)
  double dual_infeasibility = 0;  ///< max(0, -min_i lambda_i)
  double gap = 0;
  bool passed = false;
};

KktReport verify_kkt(const Allocation& alloc, const EquilibriumWeights& ew, double tol);

struct IntegerAllocation {
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;
};

/// ceil(m_i * m_eps) per agent. Values within 1e-9 (relative) above an
/// integer snap down to it so that exact integers survive rounding noise.
IntegerAllocation integer_round(const Eigen::VectorXd& m, double m_eps);

}  // namespace netsample
