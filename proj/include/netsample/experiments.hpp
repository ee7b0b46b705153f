#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netsample/allocator.hpp"
#include "netsample/bounds.hpp"
#include "netsample/graph.hpp"

namespace netsample {

/// Graph family plus generator parameters, as accepted on the command line.
struct GraphSpec {
  std::string family;  ///< clique | star | hypercube | rr | er | ba
  std::size_t n = 0;
  std::size_t d = 0;        ///< degree (rr) or dimension (hypercube)
  double p = 0.25;          ///< er edge probability
  std::size_t attach = 2;   ///< ba attachment count
  std::uint64_t seed = 1;

  std::string describe() const;
};

Graph make_graph(const GraphSpec& spec);

/// SplitMix64 mixing; derives independent per-job seeds from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// Runs fn(0..count-1) on up to `threads` workers. Each index runs exactly once.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// Solver optimum with every bound and the relative slack of the general
/// bounds: err_u = (general_upper - opt) / opt, err_l = (opt - general_lower) / opt.
struct InstanceResult {
  Allocation allocation;
  BoundsReport bounds;
  double err_u = 0;
  double err_l = 0;
  bool closed_form_valid = false;
};

/// Relative tolerance for bound/optimum comparisons.
inline constexpr double kSandwichTol = 1e-7;

/// Solves the instance, evaluates all bounds and checks that
/// max(lowers) <= optimum <= min(uppers) within kSandwichTol and that every
/// constructive allocation is feasible. Throws InvariantViolation otherwise.
InstanceResult analyze(const Graph& g, const InfluenceFactors& v, const BarrierOptions& options = {});

double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct DegreeBucket {
  std::size_t n = 0;  ///< graph size the bucket came from
  std::size_t degree = 0;
  std::size_t count = 0;
  double mean = 0;
  double variance = 0;  ///< population variance of m_i within the bucket
};

struct DegreeProfile {
  std::vector<DegreeBucket> buckets;  ///< sorted by (n, degree)
  /// Spearman correlation of degree against bucket mean, per graph size.
  std::vector<std::pair<std::size_t, double>> spearman_by_size;
};

struct DegreeProfileConfig {
  GraphSpec graph;  ///< n is overridden by each entry of `sizes`
  std::vector<std::size_t> sizes;
  double alpha = 1.0;
  std::size_t threads = 1;
  BarrierOptions solver;
};

DegreeProfile degree_profile(const DegreeProfileConfig& cfg);

struct TightnessRecord {
  std::string family;
  std::size_t n = 0;
  std::size_t rep = 0;
  std::string params;
  double optimum = 0;
  double general_lower = 0;
  double general_upper = 0;
  double err_u = 0;
  double err_l = 0;
  bool closed_form_valid = false;
};

struct TightnessConfig {
  std::string family = "rr";  ///< rr | ba | er
  std::vector<std::size_t> sizes;
  double weight_range = 1.0;
  std::size_t repeats = 20;
  std::uint64_t seed = 1;
  double p = 0.25;
  std::size_t attach = 0;  ///< 0: alternate 2 and 3 (three of every five reps use 2)
  std::size_t degree = 0;  ///< 0: round(n^(0.25 + 0.1 k)) with k = rep mod 5
  std::size_t threads = 1;
  BarrierOptions solver;
};

struct TightnessSummary {
  std::vector<TightnessRecord> records;  ///< sorted by (n, rep)
  double max_err_u = 0;
  double max_err_l = 0;
  std::size_t closed_form_valid = 0;
};

TightnessSummary tightness(const TightnessConfig& cfg);

struct AlphaSweepRecord {
  double alpha = 0;
  InstanceResult result;
};

std::vector<AlphaSweepRecord> alpha_sweep(const Graph& g, const std::vector<double>& alphas,
                                          const BarrierOptions& options = {});

}  // namespace netsample
