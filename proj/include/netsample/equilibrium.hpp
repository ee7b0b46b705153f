#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "netsample/graph.hpp"

namespace netsample {

/// Equilibrium weights of the opinion game: the equilibrium opinions are
/// A * (internal opinions) with A = W^{-1}.
struct EquilibriumWeights {
  Eigen::MatrixXd a;       ///< W^{-1}; symmetric, row-stochastic.
  Eigen::MatrixXd q;       ///< Hadamard square a_ij^2.
  Eigen::VectorXd w2diag;  ///< Row sums of q, i.e. the diagonal of W^{-2}.
  double residual = 0;     ///< max |W A - I| after refinement.

  std::size_t size() const noexcept { return static_cast<std::size_t>(a.rows()); }
};

/// Inverts W by Cholesky with one step of iterative refinement, then checks
/// the residual (<= 1e-9), row sums (within 1e-10) and entry ranges.
/// Throws NumericalError if W is not positive definite or a check fails.
EquilibriumWeights compute_weights(const GameMatrix& w);

struct FixedPointResult {
  Eigen::MatrixXd opinions;  ///< n x k
  std::size_t iterations = 0;
  bool converged = false;
  double last_change = 0;
};

/// Simultaneous best-response dynamics
///   theta_i <- (internal_i + sum_j v_ij theta_j) / (1 + sum_j v_ij),
/// started from the internal opinions. Iteration stops once the sup-norm
/// distance to the fixed point is certified below `tol` via the contraction
/// constant max_i sum_j v_ij / (1 + sum_j v_ij).
FixedPointResult best_response_fixed_point(const Graph& g, const InfluenceFactors& v,
                                           const Eigen::MatrixXd& internal_opinions, double tol,
                                           std::size_t max_iter = 10'000'000);

struct ObservationReport {
  bool diagonal_ok = true;      ///< 1/(a d_i + 1) <= a_ii <= 1/(a d_i/(a+1) + 1)
  bool off_diagonal_ok = true;  ///< a_ij <= a / (a max(d_i, d_j) + 1)
  double worst_diagonal_slack = 0;
  double worst_off_diagonal_slack = 0;

  bool ok() const noexcept { return diagonal_ok && off_diagonal_ok; }
};

/// Checks the degree-based entry bounds of A for uniform influence. Throws
/// std::invalid_argument for per-edge factors.
ObservationReport verify_weight_observations(const EquilibriumWeights& ew, const Graph& g,
                                             const InfluenceFactors& v);

}  // namespace netsample
