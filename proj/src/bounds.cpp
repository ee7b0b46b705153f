#include "netsample/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace netsample {

DegreeBounds degree_bounds(const Graph& g, const InfluenceFactors& v) {
  if (!v.is_uniform()) throw std::invalid_argument("degree bounds need uniform influence factors");
  const double alpha = *v.alpha();
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  DegreeBounds out;
  out.allocation.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scaled = alpha * static_cast<double>(g.degree(static_cast<NodeId>(i))) + 1.0;
    out.lower += 1.0 / (scaled * scaled);
    out.allocation[i] = (alpha + 1.0) / scaled;
  }
  out.upper = out.allocation.sum();
  return out;
}

GeneralBounds general_bounds(const EquilibriumWeights& ew, const BMatrixSummary& bs) {
  GeneralBounds out;
  out.allocation = bs.row_sums.array().inverse();
  out.upper = out.allocation.sum();
  out.gamma = bs.lambda.cwiseMax(0.0);
  out.lower = std::max(dual_value(ew, out.gamma), 1.0);
  return out;
}

SpectralBound spectral_upper(const EquilibriumWeights& ew) {
  SpectralBound out;
  out.per_agent = ew.w2diag.maxCoeff();
  out.bound = static_cast<double>(ew.size()) * out.per_agent;
  return out;
}

double BoundsReport::best_lower() const {
  double best = std::max(trivial_lower, general.lower);
  if (degree) best = std::max(best, degree->lower);
  return best;
}

double BoundsReport::best_upper() const {
  double best = std::min({trivial_upper, general.upper, spectral.bound});
  if (degree) best = std::min(best, degree->upper);
  return best;
}

std::vector<BoundsReport::Row> BoundsReport::rows() const {
  std::vector<Row> out;
  out.push_back({"trivial_lower", trivial_lower, false, ""});
  out.push_back({"trivial_upper", trivial_upper, true, "trivial"});
  if (degree) {
    out.push_back({"degree_lower", degree->lower, false, ""});
    out.push_back({"degree_upper", degree->upper, true, "degree"});
  }
  out.push_back({"general_lower", general.lower, false, ""});
  out.push_back({"general_upper", general.upper, true, "general"});
  out.push_back({"spectral_upper", spectral.bound, true, "spectral"});
  return out;
}

std::vector<std::pair<std::string, Eigen::VectorXd>> BoundsReport::allocations() const {
  const auto size = static_cast<Eigen::Index>(n);
  std::vector<std::pair<std::string, Eigen::VectorXd>> out;
  out.emplace_back("trivial", Eigen::VectorXd::Ones(size));
  if (degree) out.emplace_back("degree", degree->allocation);
  out.emplace_back("general", general.allocation);
  out.emplace_back("spectral", Eigen::VectorXd::Constant(size, spectral.per_agent));
  return out;
}

BoundsReport compute_bounds(const Graph& g, const InfluenceFactors& v, const EquilibriumWeights& ew,
                            const BMatrixSummary& bs) {
  BoundsReport r;
  r.n = g.num_nodes();
  r.trivial_upper = static_cast<double>(r.n);
  if (v.is_uniform()) r.degree = degree_bounds(g, v);
  r.general = general_bounds(ew, bs);
  r.spectral = spectral_upper(ew);
  return r;
}

CliqueSolution clique_closed_form(std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("clique needs n >= 1");
  if (!(alpha >= 0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be >= 0");
  const double nn = static_cast<double>(n);
  const double denom = (nn * alpha + 1.0) * (nn * alpha + 1.0);
  return {1.0 + (nn - 1.0) / denom, ((alpha + 1.0) * (alpha + 1.0) + (nn - 1.0) * alpha * alpha) / denom};
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Clique: return "clique";
    case Family::Star: return "star";
    case Family::Hypercube: return "hypercube";
    case Family::RandomRegular: return "random_regular";
    case Family::Expander: return "expander";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "clique") return Family::Clique;
  if (name == "star") return Family::Star;
  if (name == "hypercube") return Family::Hypercube;
  if (name == "random_regular" || name == "rr") return Family::RandomRegular;
  if (name == "expander") return Family::Expander;
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

double family_estimator(Family family, std::size_t n, std::size_t d, double alpha,
                        std::optional<double> tau) {
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  switch (family) {
    case Family::Clique: return 1.0;
    case Family::Star: return nn;
    case Family::Hypercube:
      if (d == 0) throw std::invalid_argument("hypercube dimension must be positive");
      return nn / (dd * dd);
    case Family::RandomRegular:
      if (d == 0 || !(alpha > 0)) throw std::invalid_argument("random regular estimator needs d >= 1, alpha > 0");
      // d >= sqrt(n)/alpha  <=>  n / (alpha d)^2 <= 1
      return std::max(nn / (alpha * alpha * dd * dd), 1.0);
    case Family::Expander: {
      if (!tau) throw std::invalid_argument("expander estimator needs the edge expansion tau");
      if (d == 0 || !(alpha > 0) || !(*tau > 0))
        throw std::invalid_argument("expander estimator needs d >= 1, alpha > 0, tau > 0");
      const double t2 = *tau * *tau;
      return std::max(nn / (alpha * alpha * dd * dd * t2 * t2), 1.0);
    }
  }
  throw std::invalid_argument("unknown family");
}

double cheeger_lambda2_lower(std::size_t d, double tau) {
  return static_cast<double>(d) * tau * tau / 2.0;
}

HypercubeIdentity hypercube_identity_check(std::size_t d) {
  if (d < 1 || d > 30) throw std::invalid_argument("hypercube identity is checked for 1 <= d <= 30");
  using boost::multiprecision::cpp_int;

  HypercubeIdentity out;
  cpp_int binom = 1;  // C(d, i)
  for (std::size_t i = 0; i <= d; ++i) {
    out.lhs += Rational(binom, cpp_int((2 * i + 2) * (2 * i + 4)));
    binom = binom * (d - i) / (i + 1);
  }
  const cpp_int two_d = cpp_int(1) << d;
  const cpp_int dp1 = d + 1;
  const cpp_int dp2 = d + 2;
  out.rhs_leading = Rational(two_d, dp1 * dp2);
  out.rhs_corrected = Rational(4 * two_d - d - 3, 4 * dp1 * dp2);
  out.exact_match = out.lhs == out.rhs_corrected;
  out.ratio_to_leading = static_cast<double>(out.lhs / out.rhs_leading);
  return out;
}

}  // namespace netsample
