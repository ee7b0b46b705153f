#include "netsample/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

#include "netsample/errors.hpp"

namespace netsample {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::ClosedForm: return "closed_form";
    case SolveStatus::BarrierConverged: return "barrier_converged";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Stalled: return "stalled";
  }
  return "unknown";
}

BMatrixSummary b_matrix_summary(const EquilibriumWeights& ew) {
  const Eigen::Index n = ew.q.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(ew.q);
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization of A o A failed");

  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  BMatrixSummary bs;
  bs.b = llt.solve(identity);
  bs.b += llt.solve(identity - ew.q * bs.b);
  bs.b = (0.5 * (bs.b + bs.b.transpose())).eval();
  bs.residual = (ew.q * bs.b - identity).cwiseAbs().maxCoeff();
  if (!(bs.residual <= 1e-8))
    throw NumericalError("||Q B - I||_max = " + std::to_string(bs.residual) + " exceeds 1e-8");

  bs.row_sums = bs.b.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(bs.row_sums[i] > 0))
      throw NumericalError("row sum " + std::to_string(i) + " of B is not positive (" +
                           std::to_string(bs.row_sums[i]) + ")");

  bs.lambda = bs.b * bs.row_sums.array().square().inverse().matrix();
  bs.valid = (bs.lambda.array() >= 0).all();
  return bs;
}

std::optional<Allocation> closed_form_solve(const BMatrixSummary& bs) {
  if (!bs.valid) return std::nullopt;
  Allocation out;
  out.m = bs.row_sums.array().inverse();
  out.objective = out.m.sum();
  out.lambda = bs.lambda;
  // Using Q B = I, the dual value at lambda is 2 sum 1/s - sum lambda.
  const double dual = 2.0 * out.objective - out.lambda.sum();
  out.gap = (out.objective - dual) / out.objective;
  out.status = SolveStatus::ClosedForm;
  return out;
}

double dual_value(const EquilibriumWeights& ew, const Eigen::VectorXd& lambda) {
  if (lambda.size() != ew.q.rows()) throw std::invalid_argument("lambda has the wrong size");
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (!(lambda[i] >= 0) || !std::isfinite(lambda[i]))
      throw std::invalid_argument("dual variables must be finite and nonnegative");
  const Eigen::VectorXd weighted = ew.q * lambda;
  return 2.0 * weighted.array().sqrt().sum() - lambda.sum();
}

Eigen::VectorXd constraint_values(const EquilibriumWeights& ew, const Eigen::VectorXd& m) {
  if (m.size() != ew.q.rows()) throw std::invalid_argument("allocation has the wrong size");
  return ew.q * m.array().inverse().matrix();
}

bool is_feasible(const EquilibriumWeights& ew, const Eigen::VectorXd& m, double feas_tol) {
  if (!(m.array() > 0).all()) return false;
  return (constraint_values(ew, m).array() <= 1.0 + feas_tol).all();
}

namespace {

struct BarrierState {
  Eigen::VectorXd t;
  Eigen::VectorXd slack;  // 1 - Q t
  double value = 0;       // sum 1/t - mu sum log(slack)
};

double barrier_value(const Eigen::VectorXd& t, const Eigen::VectorXd& slack, double mu) {
  return t.array().inverse().sum() - mu * slack.array().log().sum();
}

// Least-squares fit of m_i^2 = (Q lambda)_i over the constraints the barrier
// multipliers mark as active. Far more accurate than mu / slack once the
// slacks approach rounding level.
Eigen::VectorXd refit_dual(const Eigen::MatrixXd& q, const Eigen::VectorXd& m, const Eigen::VectorXd& lambda) {
  const double cutoff = 1e-6 * lambda.maxCoeff();
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] > cutoff) active.push_back(i);
  Eigen::MatrixXd cols(q.rows(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = q.col(active[k]);
  const Eigen::VectorXd fit = cols.colPivHouseholderQr().solve(m.array().square().matrix());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(lambda.size());
  for (std::size_t k = 0; k < active.size(); ++k) out[active[k]] = std::max(0.0, fit[static_cast<Eigen::Index>(k)]);
  return out;
}

// Dual from the barrier multipliers mu / slack, which satisfy stationarity
// exactly at a centred point. Falls back to the refit when that gives a
// strictly better bound and the barrier duals miss the gap target.
void finish(Allocation& out, const EquilibriumWeights& ew, const BarrierState& state, double mu, double tol) {
  out.m = state.t.array().inverse();
  out.objective = out.m.sum();
  out.lambda = (mu / state.slack.array()).max(0.0);
  double dual = dual_value(ew, out.lambda);
  if ((out.objective - dual) / out.objective > tol) {
    const Eigen::VectorXd refit = refit_dual(ew.q, out.m, out.lambda);
    if (refit.allFinite()) {
      const double refit_value = dual_value(ew, refit);
      if (refit_value > dual) {
        out.lambda = refit;
        dual = refit_value;
      }
    }
  }
  out.gap = (out.objective - dual) / out.objective;
}

// Newton's method on the KKT system restricted to the constraints the barrier
// marks active (lambda_i > slack_i):
//   m_i^2 = (Q lambda)_i for all i,   (Q (1/m))_i = 1 for i active.
// Converges quadratically from a barrier iterate. Returns false and leaves
// `out` untouched unless the result is feasible, dual feasible and no worse.
bool polish(Allocation& out, const EquilibriumWeights& ew, const Eigen::VectorXd& slack, double feas_tol) {
  const Eigen::MatrixXd& q = ew.q;
  const Eigen::Index n = q.rows();
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < n; ++i)
    if (out.lambda[i] > slack[i]) active.push_back(i);
  const auto k = static_cast<Eigen::Index>(active.size());
  if (k == 0) return false;

  Eigen::MatrixXd qa(n, k);
  for (Eigen::Index c = 0; c < k; ++c) qa.col(c) = q.col(active[static_cast<std::size_t>(c)]);
  Eigen::VectorXd m = out.m;
  Eigen::VectorXd lam(k);
  for (Eigen::Index c = 0; c < k; ++c) lam[c] = out.lambda[active[static_cast<std::size_t>(c)]];

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + k, n + k);
  Eigen::VectorXd residual(n + k);
  double norm = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 8; ++iter) {
    const Eigen::VectorXd inv_m = m.array().inverse();
    residual.head(n) = m.array().square().matrix() - qa * lam;
    residual.tail(k) = qa.transpose() * inv_m - Eigen::VectorXd::Ones(k);
    const double next = residual.cwiseAbs().maxCoeff();
    if (!(next < norm)) break;
    norm = next;
    if (norm <= 1e-15) break;
    jac.topLeftCorner(n, n) = (2.0 * m).asDiagonal();
    jac.topRightCorner(n, k) = -qa;
    jac.bottomLeftCorner(k, n) = qa.transpose() * (-inv_m.array().square()).matrix().asDiagonal();
    const Eigen::VectorXd delta = jac.partialPivLu().solve(-residual);
    m += delta.head(n);
    lam += delta.tail(k);
    if (!(m.array() > 0).all() || !m.allFinite()) return false;
  }
  if ((lam.array() < 0).any() || !lam.allFinite()) return false;
  if ((constraint_values(ew, m).array() > 1.0 + feas_tol).any()) return false;

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(n);
  for (Eigen::Index c = 0; c < k; ++c) lambda[active[static_cast<std::size_t>(c)]] = lam[c];
  const double objective = m.sum();
  const double gap = (objective - dual_value(ew, lambda)) / objective;
  if (!(std::abs(gap) <= std::abs(out.gap))) return false;
  out.m = m;
  out.objective = objective;
  out.lambda = lambda;
  out.gap = gap;
  return true;
}

}  // namespace

Allocation solve_primal(const EquilibriumWeights& ew, const BarrierOptions& opt) {
  if (!(opt.tol > 0 && opt.tol <= 1e-2)) throw std::invalid_argument("tol must lie in (0, 1e-2]");
  const Eigen::MatrixXd& q = ew.q;
  const Eigen::Index n = q.rows();
  if (n == 0) throw std::invalid_argument("empty problem");

  Allocation out;
  if (n == 1) {
    out.m = Eigen::VectorXd::Ones(1);
    out.objective = 1.0;
    out.lambda = Eigen::VectorXd::Ones(1);
    out.gap = 0.0;
    out.status = SolveStatus::BarrierConverged;
    return out;
  }

  // m = 1 is always feasible because sum_j a_ij^2 <= (sum_j a_ij)^2 = 1, but it
  // can sit on the boundary (e.g. an agent with no influence). Scale it into
  // the interior.
  const double max_row = q.rowwise().sum().maxCoeff();
  if (!(max_row <= 1.0 + opt.feas_tol)) {
    out.status = SolveStatus::Infeasible;
    out.diagnostics = "uniform unit allocation violates a constraint; weights are not row-stochastic";
    return out;
  }

  BarrierState state;
  state.t = Eigen::VectorXd::Constant(n, 0.9 / max_row);
  state.slack = Eigen::VectorXd::Ones(n) - q * state.t;
  double mu = opt.mu_initial;
  state.value = barrier_value(state.t, state.slack, mu);

  Eigen::MatrixXd hessian(n, n);
  Eigen::MatrixXd scaled(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt;

  enum class Centering { Centered, IterationLimit, FactorizationFailed };
  // Newton steps on the barrier at fixed mu until decrement^2 / 2 <= target.
  auto center = [&](double target, std::size_t max_steps) {
    for (std::size_t inner = 0;; ++inner) {
      if (inner == max_steps) return Centering::IterationLimit;
      const Eigen::ArrayXd inv_t = state.t.array().inverse();
      const Eigen::ArrayXd inv_s = state.slack.array().inverse();
      const Eigen::VectorXd grad = (-inv_t.square()).matrix() + mu * (q * inv_s.matrix());

      scaled.noalias() = q * inv_s.matrix().asDiagonal();
      hessian.setZero();
      hessian.selfadjointView<Eigen::Lower>().rankUpdate(scaled, mu);
      hessian.diagonal().array() += 2.0 * inv_t.cube();
      llt.compute(hessian.selfadjointView<Eigen::Lower>());
      if (llt.info() != Eigen::Success) return Centering::FactorizationFailed;
      const Eigen::VectorXd step = -llt.solve(grad);
      const double decrement_sq = -grad.dot(step);
      if (decrement_sq / 2.0 <= target) return Centering::Centered;

      const Eigen::VectorXd q_step = q * step;
      double size = 1.0;
      // Stay strictly inside the domain, then backtrack on Armijo.
      while (size > 0 && ((state.t + size * step).array() <= 0).any()) size *= opt.backtrack;
      while (size > 0 && ((state.slack - size * q_step).array() <= 0).any()) size *= opt.backtrack;
      BarrierState trial;
      for (;;) {
        trial.t = state.t + size * step;
        trial.slack = state.slack - size * q_step;
        trial.value = barrier_value(trial.t, trial.slack, mu);
        if (trial.value <= state.value - opt.armijo_c * size * decrement_sq) break;
        size *= opt.backtrack;
        if (size < 1e-16) break;
      }
      ++out.newton_steps;
      // No measurable decrease is possible; the iterate is as centered as
      // floating point allows.
      if (size < 1e-16) return Centering::Centered;
      trial.slack = Eigen::VectorXd::Ones(n) - q * trial.t;
      if ((trial.slack.array() <= 0).any()) return Centering::Centered;
      trial.value = barrier_value(trial.t, trial.slack, mu);
      const bool negligible = state.value - trial.value <= 1e-15 * std::abs(state.value);
      state = std::move(trial);
      if (negligible && size < 1.0) return Centering::Centered;
    }
  };

  for (std::size_t outer = 0; outer < opt.max_outer; ++outer) {
    const Centering c = center(mu * opt.centering_tol, opt.max_newton_per_center);
    if (c != Centering::Centered) {
      finish(out, ew, state, mu, opt.tol);
      out.status = SolveStatus::Stalled;
      out.diagnostics = std::string(c == Centering::IterationLimit ? "Newton iteration limit reached"
                                                                   : "Newton system factorization failed") +
                        " at mu = " + std::to_string(mu);
      return out;
    }

    finish(out, ew, state, mu, opt.tol);
    if (static_cast<double>(n) * mu / out.objective <= opt.tol && out.gap <= opt.tol) {
      const Eigen::VectorXd c = constraint_values(ew, out.m);
      if ((c.array() > 1.0 + opt.feas_tol).any()) {
        out.status = SolveStatus::Stalled;
        out.diagnostics = "final iterate violates a constraint beyond feas_tol";
        return out;
      }
      // Polish: recentre tightly at the final mu so that m_i^2 = (Q lambda)_i
      // holds to near machine precision. Kept only if it stays feasible.
      const BarrierState loose = state;
      const Allocation before = out;
      center(mu * opt.centering_tol * 1e-8, 20);
      finish(out, ew, state, mu, opt.tol);
      if ((constraint_values(ew, out.m).array() > 1.0 + opt.feas_tol).any() || out.gap > before.gap) {
        const std::size_t steps = out.newton_steps;
        out = before;
        out.newton_steps = steps;
        state = loose;
      }
      // finish() may have swapped in refit duals; classify on the barrier ones.
      Allocation barrier = out;
      barrier.lambda = (mu / state.slack.array()).max(0.0);
      if (polish(barrier, ew, state.slack, opt.feas_tol)) out = barrier;
      out.status = SolveStatus::BarrierConverged;
      return out;
    }
    mu *= opt.mu_factor;
    state.value = barrier_value(state.t, state.slack, mu);
  }

  out.status = SolveStatus::Stalled;
  std::ostringstream msg;
  msg << "outer iteration limit reached; gap = " << out.gap;
  out.diagnostics = msg.str();
  return out;
}

Allocation solve(const EquilibriumWeights& ew, const BarrierOptions& options) {
  if (ew.size() > 1) {
    try {
      if (auto closed = closed_form_solve(b_matrix_summary(ew))) return *closed;
    } catch (const NumericalError&) {
      // B is too ill-conditioned to trust; the barrier does not need it.
    }
  }
  return solve_primal(ew, options);
}

KktReport verify_kkt(const Allocation& alloc, const EquilibriumWeights& ew, double tol) {
  KktReport r;
  const Eigen::VectorXd c = constraint_values(ew, alloc.m);
  const Eigen::VectorXd lam = alloc.lambda.cwiseMax(0.0);
  const Eigen::VectorXd implied = (ew.q * lam).array().sqrt();
  r.stationarity = ((alloc.m - implied).array().abs() / alloc.m.array()).maxCoeff();
  r.complementarity = (lam.array() * (1.0 - c.array()).abs()).maxCoeff();
  r.feasibility = std::max(0.0, (c.array() - 1.0).maxCoeff());
  r.dual_infeasibility = std::max(0.0, -alloc.lambda.minCoeff());
  r.gap = (alloc.m.sum() - dual_value(ew, lam)) / alloc.m.sum();
  r.passed = r.stationarity <= tol && r.complementarity <= tol && r.feasibility <= tol &&
             r.dual_infeasibility <= tol && std::abs(r.gap) <= tol;
  return r;
}

IntegerAllocation integer_round(const Eigen::VectorXd& m, double m_eps) {
  if (!(m_eps > 0) || !std::isfinite(m_eps)) throw std::invalid_argument("M(eps) must be positive");
  IntegerAllocation out;
  out.counts.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!(m[i] > 0)) throw std::invalid_argument("allocation entries must be positive");
    const double scaled = m[i] * m_eps;
    const double snapped = std::ceil(scaled - 1e-9 * std::max(1.0, scaled));
    const auto count = static_cast<std::int64_t>(std::max(1.0, snapped));
    out.counts.push_back(count);
    out.total += count;
  }
  return out;
}

}  // namespace netsample
