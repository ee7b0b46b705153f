#include <doctest.h>

#include <random>

#include "netsample/equilibrium.hpp"
#include "netsample/errors.hpp"

using namespace netsample;

namespace {

EquilibriumWeights weights(const Graph& g, double alpha) {
  return compute_weights(build_game_matrix(g, InfluenceFactors::uniform(alpha)));
}

}  // namespace

TEST_CASE("hand-inverted small cases") {
  CHECK(weights(clique(1), 1.0).a(0, 0) == doctest::Approx(1.0));

  const auto two = weights(clique(2), 1.0);
  CHECK(two.a(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(two.a(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(two.q(0, 0) == doctest::Approx(4.0 / 9).epsilon(1e-14));
  CHECK(two.w2diag[1] == doctest::Approx(5.0 / 9).epsilon(1e-14));

  const auto tri = weights(clique(3), 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(tri.a(i, j) == doctest::Approx(i == j ? 0.5 : 0.25).epsilon(1e-14));
}

TEST_CASE("clique entries follow the closed form") {
  for (std::size_t n : {4u, 7u, 12u})
    for (double alpha : {0.1, 1.0, 10.0}) {
      const auto ew = weights(clique(n), alpha);
      const double nd = static_cast<double>(n);
      CHECK(ew.a(0, 0) == doctest::Approx((alpha + 1) / (nd * alpha + 1)).epsilon(1e-12));
      CHECK(ew.a(0, 1) == doctest::Approx(alpha / (nd * alpha + 1)).epsilon(1e-12));
    }
}

TEST_CASE("row-stochastic, positive, small residual") {
  const Graph g = barabasi_albert(120, 2, 4);
  const auto v = InfluenceFactors::random_uniform(g, 1.0, 4);
  const auto w = build_game_matrix(g, v);
  const auto ew = compute_weights(w);
  CHECK(ew.residual <= 1e-9);
  CHECK((w.w * ew.a - Eigen::MatrixXd::Identity(120, 120)).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((ew.a.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-10);
  CHECK(ew.a.minCoeff() > 0.0);
  CHECK(ew.a == ew.a.transpose());
}

TEST_CASE("fixed point dynamics") {
  const Graph two = clique(2);
  Eigen::MatrixXd theta(2, 1);
  theta << 0.0, 1.0;
  const auto r = best_response_fixed_point(two, InfluenceFactors::uniform(1.0), theta, 1e-12);
  CHECK(r.converged);
  CHECK(r.opinions(0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-10));
  CHECK(r.opinions(1, 0) == doctest::Approx(2.0 / 3).epsilon(1e-10));

  const Graph g = erdos_renyi(20, 0.3, 8);
  Eigen::MatrixXd random = Eigen::MatrixXd::Random(20, 2);
  const auto frozen = best_response_fixed_point(g, InfluenceFactors::uniform(0.0), random, 1e-12);
  CHECK(frozen.opinions == random);

  const Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(20, 1, 3.5);
  const auto still = best_response_fixed_point(g, InfluenceFactors::uniform(2.0), constant, 1e-12);
  CHECK((still.opinions.array() - 3.5).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("fixed point agrees with A theta on random graphs") {
  std::mt19937_64 rng(17);
  const double tol = 1e-9;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 5 + rng() % 46;
    const Graph g = erdos_renyi(n, 0.3, rng());
    const auto v = InfluenceFactors::random_uniform(g, 2.0, rng());
    const auto ew = compute_weights(build_game_matrix(g, v));
    const Eigen::MatrixXd theta = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(n), 3);
    const auto r = best_response_fixed_point(g, v, theta, tol);
    REQUIRE(r.converged);
    CHECK((ew.a * theta - r.opinions).cwiseAbs().maxCoeff() <= 10 * tol);
  }
}

TEST_CASE("entry observations") {
  const auto tri = weights(clique(3), 1.0);
  CHECK(verify_weight_observations(tri, clique(3), InfluenceFactors::uniform(1.0)).ok());

  const Graph s = star(5);
  const auto ew = weights(s, 1.0);
  CHECK(ew.a(0, 0) >= 1.0 / 5);
  CHECK(verify_weight_observations(ew, s, InfluenceFactors::uniform(1.0)).ok());

  const Graph g = barabasi_albert(80, 3, 2);
  for (double alpha : {0.0, 0.3, 1.0, 10.0})
    CHECK(verify_weight_observations(weights(g, alpha), g, InfluenceFactors::uniform(alpha)).ok());

  const auto per_edge = InfluenceFactors::random_uniform(g, 1.0, 1);
  CHECK_THROWS_AS(verify_weight_observations(weights(g, 1.0), g, per_edge), std::invalid_argument);
}
