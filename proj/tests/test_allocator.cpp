#include <doctest.h>

#include <random>

#include "netsample/allocator.hpp"
#include "netsample/bounds.hpp"
#include "netsample/equilibrium.hpp"

using namespace netsample;

namespace {

EquilibriumWeights weights(const Graph& g, const InfluenceFactors& v) {
  return compute_weights(build_game_matrix(g, v));
}

EquilibriumWeights weights(const Graph& g, double alpha) { return weights(g, InfluenceFactors::uniform(alpha)); }

}  // namespace

TEST_CASE("B matrix of small cases") {
  const auto one = b_matrix_summary(weights(clique(1), 1.0));
  CHECK(one.b(0, 0) == doctest::Approx(1.0));
  CHECK(one.lambda[0] == doctest::Approx(1.0));

  const auto tri = b_matrix_summary(weights(clique(3), 1.0));
  CHECK(tri.valid);
  for (int i = 0; i < 3; ++i) {
    CHECK(tri.row_sums[i] == doctest::Approx(8.0 / 3).epsilon(1e-12));
    CHECK(tri.lambda[i] == doctest::Approx(3.0 / 8).epsilon(1e-12));
  }

  const auto two = b_matrix_summary(weights(clique(2), 1.0));
  CHECK(two.row_sums[0] == doctest::Approx(9.0 / 5).epsilon(1e-12));
  CHECK(two.lambda[1] == doctest::Approx(5.0 / 9).epsilon(1e-12));

  // Hub candidate dual is negative on the star: no closed form.
  const auto st = b_matrix_summary(weights(star(5), 1.0));
  CHECK_FALSE(st.valid);
  CHECK(st.row_sums[0] == doctest::Approx(6.75).epsilon(1e-12));
  CHECK(st.lambda[0] == doctest::Approx(-0.378600823045).epsilon(1e-9));
}

TEST_CASE("closed form solutions") {
  const auto tri = closed_form_solve(b_matrix_summary(weights(clique(3), 1.0)));
  REQUIRE(tri);
  CHECK(tri->objective == doctest::Approx(1.125).epsilon(1e-12));
  CHECK(tri->m[1] == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(std::abs(tri->gap) <= 1e-12);

  const auto two = closed_form_solve(b_matrix_summary(weights(clique(2), 1.0)));
  REQUIRE(two);
  CHECK(two->objective == doctest::Approx(10.0 / 9).epsilon(1e-12));

  const auto one = solve(weights(clique(1), 3.0));
  CHECK(one.objective == doctest::Approx(1.0));
  CHECK_FALSE(closed_form_solve(b_matrix_summary(weights(star(5), 1.0))));
}

TEST_CASE("barrier solver on known optima") {
  // Reference optima from an independent conic solver.
  const auto st = solve_primal(weights(star(5), 1.0));
  REQUIRE(st.ok());
  CHECK(st.objective == doctest::Approx(1.87283903186).epsilon(1e-7));
  CHECK(st.m[0] == doctest::Approx(0.228086).epsilon(1e-5));
  CHECK(st.m[3] == doctest::Approx(0.411188).epsilon(1e-5));
  CHECK(st.objective >= 1.04);
  CHECK(st.objective <= 4.4);

  CHECK(solve_primal(weights(star(5), 0.01)).objective == doctest::Approx(4.84791884).epsilon(1e-7));
  CHECK(solve_primal(weights(star(5), 10.0)).objective == doctest::Approx(1.03078364715).epsilon(1e-7));

  const auto k10 = solve_primal(weights(clique(10), 1.0));
  REQUIRE(k10.ok());
  CHECK(k10.objective == doctest::Approx(1.0 + 9.0 / 121).epsilon(1e-7));
  CHECK(k10.gap <= 1e-8);

  const auto decoupled = solve_primal(weights(hypercube(3), 0.0));
  REQUIRE(decoupled.ok());
  CHECK(decoupled.objective == doctest::Approx(8.0).epsilon(1e-7));

  CHECK_THROWS_AS(solve_primal(weights(clique(3), 1.0), BarrierOptions{.tol = 0.5}), std::invalid_argument);
}

TEST_CASE("closed form and barrier agree") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 20 + rng() % 60;
    const Graph g = random_regular(n % 2 ? n + 1 : n, 3 + rng() % 4, rng());
    const auto ew = weights(g, 1.0);
    const auto bs = b_matrix_summary(ew);
    const auto barrier = solve_primal(ew);
    REQUIRE(barrier.ok());
    if (auto closed = closed_form_solve(bs))
      CHECK(std::abs(closed->objective - barrier.objective) / closed->objective <= 1e-6);
  }
}

TEST_CASE("dual value") {
  const auto ew = weights(clique(3), 1.0);
  CHECK(dual_value(ew, Eigen::VectorXd::Zero(3)) == 0.0);
  CHECK(dual_value(ew, Eigen::VectorXd::Constant(3, 1.0 / 3)) >= 1.0);
  CHECK(dual_value(ew, Eigen::VectorXd::Constant(3, 0.375)) == doctest::Approx(1.125).epsilon(1e-12));
  CHECK_THROWS_AS(dual_value(ew, Eigen::VectorXd::Constant(3, -0.1)), std::invalid_argument);
}

TEST_CASE("weak duality on random instances") {
  std::mt19937_64 rng(99);
  std::exponential_distribution<double> expo(1.0);
  for (int graph = 0; graph < 10; ++graph) {
    const std::size_t n = 5 + rng() % 26;
    const Graph g = erdos_renyi(n, 0.3, rng());
    const auto ew = weights(g, InfluenceFactors::random_uniform(g, 1.0, rng()));
    const auto opt = solve(ew);
    REQUIRE(opt.ok());
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd lambda(static_cast<Eigen::Index>(n));
      const double scale = expo(rng);
      for (auto& x : lambda) x = scale * expo(rng);
      CHECK(dual_value(ew, lambda) <= opt.objective * (1 + 1e-9));
    }
  }
}

TEST_CASE("KKT certificates") {
  const auto ew = weights(clique(6), 1.0);
  const auto alloc = solve(ew);
  const auto kkt = verify_kkt(alloc, ew, 1e-8);
  CHECK(kkt.passed);
  CHECK(kkt.stationarity <= 1e-8);

  Allocation perturbed = alloc;
  perturbed.m *= 1.01;
  const auto bad = verify_kkt(perturbed, ew, 1e-8);
  CHECK_FALSE(bad.passed);
  CHECK(bad.stationarity == doctest::Approx(0.01 / 1.01).epsilon(1e-6));

  const Graph ba = barabasi_albert(100, 2, 1);
  const auto ew_ba = weights(ba, 1.0);
  const double tol = 1e-8;
  const auto barrier = solve(ew_ba, BarrierOptions{.tol = tol});
  REQUIRE(barrier.ok());
  CHECK(verify_kkt(barrier, ew_ba, 10 * tol).passed);
}

TEST_CASE("integer rounding") {
  const auto a = integer_round(Eigen::VectorXd::Constant(3, 0.375), 100);
  CHECK(a.counts == std::vector<std::int64_t>{38, 38, 38});
  CHECK(a.total == 114);
  CHECK(integer_round(Eigen::VectorXd::Constant(2, 5.0 / 9), 9).counts == std::vector<std::int64_t>{5, 5});
  Eigen::VectorXd integral(3);
  integral << 1, 2, 7;
  CHECK(integer_round(integral, 1).counts == std::vector<std::int64_t>{1, 2, 7});

  const auto ew = weights(clique(3), 1.0);
  Eigen::VectorXd counts(3);
  for (int i = 0; i < 3; ++i) counts[i] = static_cast<double>(a.counts[static_cast<std::size_t>(i)]) / 100;
  CHECK(is_feasible(ew, counts));
}
