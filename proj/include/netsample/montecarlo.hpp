#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "netsample/equilibrium.hpp"
#include "netsample/graph.hpp"

namespace netsample {

// Monte-Carlo validation of the equilibrium error guarantee. Each agent
// learns a local estimate from its own samples, the estimates are mixed by
// the equilibrium weights, and the squared error of the mixed model is
// measured.
//
// Mean estimation: samples theta* + N(0, noise_variance I_dim); the local
// estimate is the sample mean and the error is ||theta_eq - theta*||^2, whose
// expectation is dim * sum_j a_ij^2 noise_variance / m_j (dim = 1 by default).
//
// Linear regression: x ~ N(0, I_dim), y = <x, theta*> + N(0, noise_variance);
// the local estimate is OLS and the error is <x', theta_eq - theta*>^2 at a
// fresh test point x'. Its expectation is
// sum_j a_ij^2 dim noise_variance / (m_j - dim - 1), which needs m_j >= dim + 2.

enum class EstimationTask { MeanEstimation, LinearRegression };

struct EstimationConfig {
  EstimationTask task = EstimationTask::MeanEstimation;
  std::size_t dim = 1;
  double noise_variance = 1.0;
  Eigen::VectorXd ground_truth;  ///< empty means the zero vector
  std::size_t trials = 10'000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  void validate() const;
};

/// sum_j a_ij^2 noise_variance / m_j per agent (normalized or raw counts).
Eigen::VectorXd theoretical_error(const EquilibriumWeights& ew, const Eigen::VectorXd& m,
                                  double noise_variance);

/// Exact expected error of the configured task for integer sample counts.
Eigen::VectorXd expected_error(const EquilibriumWeights& ew, std::span<const std::int64_t> counts,
                               const EstimationConfig& cfg);

/// z-value of a two-sided 99% normal interval.
inline constexpr double kZ99 = 2.5758293035489004;

struct AgentEstimate {
  double mean = 0;
  double std_error = 0;
  double ci_half_width = 0;  ///< 99% normal approximation
  double ci_low() const { return mean - ci_half_width; }
  double ci_high() const { return mean + ci_half_width; }
};

struct SimulationResult {
  std::vector<AgentEstimate> agents;
  Eigen::VectorXd expected;          ///< expected_error for the same counts
  std::size_t resampled_trials = 0;  ///< regression trials redrawn for a singular design
};

/// Runs `cfg.trials` independent trials. Trial k draws from its own RNG
/// stream derived from (seed, k), and per-agent statistics are merged in a
/// fixed order, so results do not depend on the thread count.
SimulationResult simulate(const EquilibriumWeights& ew, std::span<const std::int64_t> counts,
                          const EstimationConfig& cfg);

SimulationResult simulate(const Graph& g, const InfluenceFactors& v,
                          std::span<const std::int64_t> counts, const EstimationConfig& cfg);

struct AgentCheck {
  std::size_t agent = 0;
  std::int64_t m = 0;
  double theoretical = 0;
  double empirical = 0;
  double ci_low = 0;
  double ci_high = 0;
  bool pass = false;
};

struct GuaranteeReport {
  double eps = 0;
  double m_eps = 0;  ///< concrete M(eps) used to scale the normalized allocation
  std::vector<AgentCheck> agents;
  std::size_t resampled_trials = 0;

  bool all_passed() const;
  std::size_t failures() const;
};

/// Scales a normalized allocation by M(eps) = K / eps (K = dim * noise
/// variance), rounds up, adds dim + 1 samples per agent for regression, then
/// simulates and checks empirical <= eps + 3 * (99% CI half-width) per agent.
GuaranteeReport check_guarantee(const Graph& g, const InfluenceFactors& v,
                                const Eigen::VectorXd& normalized_alloc, double eps,
                                const EstimationConfig& cfg);

}  // namespace netsample
