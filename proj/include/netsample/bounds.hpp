#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

#include "netsample/allocator.hpp"
#include "netsample/equilibrium.hpp"
#include "netsample/graph.hpp"

namespace netsample {

// Bounds on the normalized total sample complexity (units of M(eps)).

struct DegreeBounds {
  double lower = 0;            ///< sum_i 1 / (a d_i + 1)^2
  double upper = 0;            ///< sum_i (a + 1) / (a d_i + 1)
  Eigen::VectorXd allocation;  ///< (a + 1) / (a d_i + 1), feasible
};

/// Throws std::invalid_argument unless `v` is uniform.
DegreeBounds degree_bounds(const Graph& g, const InfluenceFactors& v);

struct GeneralBounds {
  double lower = 0;            ///< max(dual value at gamma, 1)
  double upper = 0;            ///< sum_i 1 / s_i
  Eigen::VectorXd gamma;       ///< max(0, candidate duals)
  Eigen::VectorXd allocation;  ///< 1 / s_i, feasible
};

GeneralBounds general_bounds(const EquilibriumWeights& ew, const BMatrixSummary& bs);

struct SpectralBound {
  double bound = 0;      ///< n max_i (W^-2)_ii
  double per_agent = 0;  ///< max_i (W^-2)_ii, assigned to every agent
};

SpectralBound spectral_upper(const EquilibriumWeights& ew);

/// Every bound for one instance. Degree bounds are present only for uniform
/// influence factors.
struct BoundsReport {
  std::size_t n = 0;
  double trivial_lower = 1;
  double trivial_upper = 0;
  std::optional<DegreeBounds> degree;
  GeneralBounds general;
  SpectralBound spectral;

  double best_lower() const;
  double best_upper() const;

  struct Row {
    std::string name;
    double value;
    bool constructive;
    std::string allocation_ref;  ///< empty for non-constructive bounds
  };
  /// Flat view used for CSV output, in a fixed order.
  std::vector<Row> rows() const;

  /// Named constructive allocations (trivial, degree, general, spectral).
  std::vector<std::pair<std::string, Eigen::VectorXd>> allocations() const;
};

BoundsReport compute_bounds(const Graph& g, const InfluenceFactors& v, const EquilibriumWeights& ew,
                            const BMatrixSummary& bs);

struct CliqueSolution {
  double total = 0;
  double per_agent = 0;
};

/// Exact optimum on K_n with uniform influence alpha.
CliqueSolution clique_closed_form(std::size_t n, double alpha);

enum class Family { Clique, Star, Hypercube, RandomRegular, Expander };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

/// Asymptotic order of the optimum for a graph family, used as an overlay in
/// plots. `d` is the degree (hypercube: dimension) and `tau` the edge
/// expansion, required for Expander.
double family_estimator(Family family, std::size_t n, std::size_t d, double alpha,
                        std::optional<double> tau = std::nullopt);

/// Lower bound on the second Laplacian eigenvalue of a d-regular graph with
/// edge expansion tau (Cheeger).
double cheeger_lambda2_lower(std::size_t d, double tau);

using Rational = boost::multiprecision::cpp_rational;

struct HypercubeIdentity {
  Rational lhs;             ///< sum_{i=0}^d C(d,i) / ((2i+2)(2i+4))
  Rational rhs_leading;     ///< 2^d / ((d+1)(d+2))
  Rational rhs_corrected;   ///< (4 * 2^d - d - 3) / (4 (d+1)(d+2))
  bool exact_match = false; ///< lhs == rhs_corrected
  double ratio_to_leading = 0;
};

/// Exact rational evaluation for 1 <= d <= 30.
HypercubeIdentity hypercube_identity_check(std::size_t d);

}  // namespace netsample
