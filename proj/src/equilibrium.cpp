#include "netsample/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "netsample/errors.hpp"

namespace netsample {

EquilibriumWeights compute_weights(const GameMatrix& gm) {
  const Eigen::MatrixXd& w = gm.w;
  const Eigen::Index n = w.rows();
  if (n == 0 || w.cols() != n) throw std::invalid_argument("game matrix must be square and nonempty");

  Eigen::LLT<Eigen::MatrixXd> llt(w);
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization of W failed");

  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  EquilibriumWeights ew;
  ew.a = llt.solve(identity);
  ew.a += llt.solve(identity - w * ew.a);
  ew.a = (0.5 * (ew.a + ew.a.transpose())).eval();

  ew.residual = (w * ew.a - identity).cwiseAbs().maxCoeff();
  if (!(ew.residual <= 1e-9))
    throw NumericalError("||W A - I||_max = " + std::to_string(ew.residual) + " exceeds 1e-9");

  for (Eigen::Index i = 0; i < n; ++i) {
    const double row = ew.a.row(i).sum();
    if (std::abs(row - 1.0) > 1e-10)
      throw NumericalError("row " + std::to_string(i) + " of W^-1 sums to " + std::to_string(row));
  }
  // Entries lie in [0, 1] up to rounding (inverse M-matrix, row-stochastic).
  if (ew.a.minCoeff() < -1e-12 || ew.a.maxCoeff() > 1.0 + 1e-12)
    throw NumericalError("W^-1 has entries outside [0, 1]");

  ew.q = ew.a.cwiseProduct(ew.a);
  ew.w2diag = ew.q.rowwise().sum();
  return ew;
}

FixedPointResult best_response_fixed_point(const Graph& g, const InfluenceFactors& v,
                                           const Eigen::MatrixXd& internal, double tol,
                                           std::size_t max_iter) {
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  v.validate(g);
  const std::size_t n = g.num_nodes();
  if (static_cast<std::size_t>(internal.rows()) != n)
    throw std::invalid_argument("internal opinions must have one row per node");

  // Per-node neighbor weights and the Jacobi contraction constant.
  std::vector<std::vector<std::pair<NodeId, double>>> weighted(n);
  Eigen::VectorXd denom(n);
  double contraction = 0;
  for (NodeId i = 0; i < n; ++i) {
    double total = 0;
    for (NodeId j : g.neighbors(i)) {
      const double w = v.weight(i, j);
      weighted[i].emplace_back(j, w);
      total += w;
    }
    denom[i] = 1.0 + total;
    contraction = std::max(contraction, total / (1.0 + total));
  }
  const double certificate = contraction / (1.0 - contraction);

  FixedPointResult result;
  result.opinions = internal;
  Eigen::MatrixXd next(internal.rows(), internal.cols());
  for (result.iterations = 1; result.iterations <= max_iter; ++result.iterations) {
    for (NodeId i = 0; i < n; ++i) {
      next.row(i) = internal.row(i);
      for (const auto& [j, w] : weighted[i]) next.row(i) += w * result.opinions.row(j);
      next.row(i) /= denom[i];
    }
    result.last_change = (next - result.opinions).cwiseAbs().maxCoeff();
    result.opinions.swap(next);
    if (result.last_change * certificate <= tol) {
      result.converged = true;
      return result;
    }
  }
  result.iterations = max_iter;
  return result;
}

ObservationReport verify_weight_observations(const EquilibriumWeights& ew, const Graph& g,
                                             const InfluenceFactors& v) {
  if (!v.is_uniform())
    throw std::invalid_argument("entry bounds are defined for uniform influence factors only");
  const double alpha = *v.alpha();
  const std::size_t n = g.num_nodes();
  if (ew.size() != n) throw std::invalid_argument("weights and graph sizes differ");

  constexpr double kRounding = 1e-12;
  ObservationReport report;
  report.worst_diagonal_slack = std::numeric_limits<double>::infinity();
  report.worst_off_diagonal_slack = std::numeric_limits<double>::infinity();
  for (NodeId i = 0; i < n; ++i) {
    const double di = static_cast<double>(g.degree(i));
    const double lower = 1.0 / (alpha * di + 1.0);
    const double upper = 1.0 / (alpha / (alpha + 1.0) * di + 1.0);
    const double aii = ew.a(i, i);
    report.worst_diagonal_slack = std::min({report.worst_diagonal_slack, aii - lower, upper - aii});
    for (NodeId j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dmax = static_cast<double>(std::max(g.degree(i), g.degree(j)));
      const double bound = alpha / (alpha * dmax + 1.0);
      report.worst_off_diagonal_slack = std::min(report.worst_off_diagonal_slack, bound - ew.a(i, j));
    }
  }
  report.diagonal_ok = report.worst_diagonal_slack >= -kRounding;
  report.off_diagonal_ok = report.worst_off_diagonal_slack >= -kRounding;
  return report;
}

}  // namespace netsample
