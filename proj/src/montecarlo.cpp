#include "netsample/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Cholesky>

#include "netsample/allocator.hpp"

namespace netsample {

void EstimationConfig::validate() const {
  if (dim == 0) throw std::invalid_argument("dim must be positive");
  if (!(noise_variance > 0) || !std::isfinite(noise_variance))
    throw std::invalid_argument("noise variance must be positive");
  if (ground_truth.size() != 0 && static_cast<std::size_t>(ground_truth.size()) != dim)
    throw std::invalid_argument("ground truth must have dim entries");
  if (trials < 2) throw std::invalid_argument("need at least two trials");
}

Eigen::VectorXd theoretical_error(const EquilibriumWeights& ew, const Eigen::VectorXd& m,
                                  double noise_variance) {
  if (!(m.array() > 0).all()) throw std::invalid_argument("sample counts must be positive");
  return noise_variance * constraint_values(ew, m);
}

Eigen::VectorXd expected_error(const EquilibriumWeights& ew, std::span<const std::int64_t> counts,
                               const EstimationConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(counts.size());
  if (n != ew.q.rows()) throw std::invalid_argument("one sample count per agent is required");
  const double dim = static_cast<double>(cfg.dim);
  Eigen::VectorXd local(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double m = static_cast<double>(counts[static_cast<std::size_t>(j)]);
    if (cfg.task == EstimationTask::MeanEstimation) {
      if (m < 1) throw std::invalid_argument("mean estimation needs m >= 1");
      local[j] = dim * cfg.noise_variance / m;
    } else {
      if (m < dim + 2) throw std::invalid_argument("linear regression needs m >= dim + 2");
      local[j] = dim * cfg.noise_variance / (m - dim - 1.0);
    }
  }
  return ew.q * local;
}

namespace {

// Running mean / sum of squared deviations, merged with Chan's update.
struct Moments {
  double count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    count += 1;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  static Moments merge(const Moments& a, const Moments& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    Moments out;
    out.count = a.count + b.count;
    const double delta = b.mean - a.mean;
    out.mean = a.mean + delta * b.count / out.count;
    out.m2 = a.m2 + b.m2 + delta * delta * a.count * b.count / out.count;
    return out;
  }
};

constexpr std::size_t kChunk = 256;

struct ChunkResult {
  std::vector<Moments> moments;
  std::size_t resampled = 0;
};

std::mt19937_64 trial_stream(std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

class TrialRunner {
 public:
  TrialRunner(const EquilibriumWeights& ew, std::span<const std::int64_t> counts,
              const EstimationConfig& cfg)
      : ew_(ew), counts_(counts), cfg_(cfg), truth_(cfg.ground_truth) {
    if (truth_.size() == 0) truth_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg.dim));
  }

  // Squared errors of every agent for one trial; returns the number of
  // redrawn regression datasets.
  std::size_t run(std::size_t trial, Eigen::VectorXd& errors) const {
    auto rng = trial_stream(cfg_.seed, trial);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double noise_sd = std::sqrt(cfg_.noise_variance);
    const auto n = static_cast<Eigen::Index>(counts_.size());
    const auto dim = static_cast<Eigen::Index>(cfg_.dim);

    std::size_t resampled = 0;
    Eigen::MatrixXd local(n, dim);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto m = static_cast<Eigen::Index>(counts_[static_cast<std::size_t>(j)]);
      if (cfg_.task == EstimationTask::MeanEstimation) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
        for (Eigen::Index s = 0; s < m; ++s)
          for (Eigen::Index k = 0; k < dim; ++k) sum[k] += truth_[k] + noise_sd * normal(rng);
        local.row(j) = (sum / static_cast<double>(m)).transpose();
      } else {
        for (;;) {
          Eigen::MatrixXd x(m, dim);
          Eigen::VectorXd y(m);
          for (Eigen::Index s = 0; s < m; ++s) {
            for (Eigen::Index k = 0; k < dim; ++k) x(s, k) = normal(rng);
            y[s] = x.row(s).dot(truth_) + noise_sd * normal(rng);
          }
          Eigen::LDLT<Eigen::MatrixXd> normal_eq(x.transpose() * x);
          const double pivot = normal_eq.vectorD().minCoeff();
          if (normal_eq.info() != Eigen::Success || !(pivot > 1e-12 * normal_eq.vectorD().maxCoeff())) {
            ++resampled;
            continue;
          }
          local.row(j) = normal_eq.solve(x.transpose() * y).transpose();
          break;
        }
      }
    }

    const Eigen::MatrixXd deviation = (ew_.a * local).rowwise() - truth_.transpose();
    errors.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (cfg_.task == EstimationTask::MeanEstimation) {
        errors[i] = deviation.row(i).squaredNorm();
      } else {
        double proj = 0;
        for (Eigen::Index k = 0; k < dim; ++k) proj += normal(rng) * deviation(i, k);
        errors[i] = proj * proj;
      }
    }
    return resampled;
  }

 private:
  const EquilibriumWeights& ew_;
  std::span<const std::int64_t> counts_;
  const EstimationConfig& cfg_;
  Eigen::VectorXd truth_;
};

Moments merge_range(const std::vector<ChunkResult>& chunks, std::size_t agent, std::size_t lo,
                    std::size_t hi) {
  if (hi - lo == 1) return chunks[lo].moments[agent];
  const std::size_t mid = lo + (hi - lo) / 2;
  return Moments::merge(merge_range(chunks, agent, lo, mid), merge_range(chunks, agent, mid, hi));
}

}  // namespace

SimulationResult simulate(const EquilibriumWeights& ew, std::span<const std::int64_t> counts,
                          const EstimationConfig& cfg) {
  SimulationResult result;
  result.expected = expected_error(ew, counts, cfg);  // validates cfg and counts
  const std::size_t n = counts.size();

  const TrialRunner runner(ew, counts, cfg);
  const std::size_t num_chunks = (cfg.trials + kChunk - 1) / kChunk;
  std::vector<ChunkResult> chunks(num_chunks);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    Eigen::VectorXd errors;
    for (std::size_t c = next++; c < num_chunks; c = next++) {
      ChunkResult& out = chunks[c];
      out.moments.assign(n, Moments{});
      const std::size_t end = std::min(cfg.trials, (c + 1) * kChunk);
      for (std::size_t trial = c * kChunk; trial < end; ++trial) {
        out.resampled += runner.run(trial, errors);
        for (std::size_t i = 0; i < n; ++i) out.moments[i].add(errors[static_cast<Eigen::Index>(i)]);
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, num_chunks);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  result.agents.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Moments total = merge_range(chunks, i, 0, num_chunks);
    AgentEstimate& est = result.agents[i];
    est.mean = total.mean;
    est.std_error = std::sqrt(total.m2 / (total.count - 1) / total.count);
    est.ci_half_width = kZ99 * est.std_error;
  }
  for (const auto& c : chunks) result.resampled_trials += c.resampled;
  return result;
}

SimulationResult simulate(const Graph& g, const InfluenceFactors& v,
                          std::span<const std::int64_t> counts, const EstimationConfig& cfg) {
  return simulate(compute_weights(build_game_matrix(g, v)), counts, cfg);
}

bool GuaranteeReport::all_passed() const { return failures() == 0; }

std::size_t GuaranteeReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(agents.begin(), agents.end(), [](const AgentCheck& a) { return !a.pass; }));
}

GuaranteeReport check_guarantee(const Graph& g, const InfluenceFactors& v,
                                const Eigen::VectorXd& normalized_alloc, double eps,
                                const EstimationConfig& cfg) {
  cfg.validate();
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  if (static_cast<std::size_t>(normalized_alloc.size()) != g.num_nodes())
    throw std::invalid_argument("one allocation entry per agent is required");

  GuaranteeReport report;
  report.eps = eps;
  report.m_eps = static_cast<double>(cfg.dim) * cfg.noise_variance / eps;
  IntegerAllocation rounded = integer_round(normalized_alloc, report.m_eps);
  if (cfg.task == EstimationTask::LinearRegression)
    for (auto& c : rounded.counts) c += static_cast<std::int64_t>(cfg.dim) + 1;

  const EquilibriumWeights ew = compute_weights(build_game_matrix(g, v));
  const SimulationResult sim = simulate(ew, rounded.counts, cfg);
  report.resampled_trials = sim.resampled_trials;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const AgentEstimate& est = sim.agents[i];
    AgentCheck row;
    row.agent = i;
    row.m = rounded.counts[i];
    row.theoretical = sim.expected[static_cast<Eigen::Index>(i)];
    row.empirical = est.mean;
    row.ci_low = est.ci_low();
    row.ci_high = est.ci_high();
    row.pass = est.mean <= eps + 3.0 * est.ci_half_width;
    report.agents.push_back(row);
  }
  return report;
}

}  // namespace netsample
