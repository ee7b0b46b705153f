#include <doctest.h>

#include "netsample/allocator.hpp"
#include "netsample/equilibrium.hpp"
#include "netsample/montecarlo.hpp"

using namespace netsample;

namespace {

EquilibriumWeights weights(const Graph& g, double alpha) {
  return compute_weights(build_game_matrix(g, InfluenceFactors::uniform(alpha)));
}

}  // namespace

TEST_CASE("theoretical error") {
  const auto two = weights(clique(2), 1.0);
  const auto e = theoretical_error(two, Eigen::VectorXd::Ones(2), 1.0);
  CHECK(e[0] == doctest::Approx(5.0 / 9).epsilon(1e-12));
  const auto decoupled = theoretical_error(weights(star(4), 0.0), Eigen::VectorXd::Ones(4), 1.0);
  CHECK((decoupled.array() - 1.0).abs().maxCoeff() <= 1e-12);

  const auto tri = weights(clique(3), 1.0);
  const auto opt = solve(tri);
  const auto tight = theoretical_error(tri, opt.m * 100.0, 0.01 * 100.0);
  CHECK((tight.array() - 0.01).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("mean estimation matches theory") {
  const auto two = weights(clique(2), 1.0);
  EstimationConfig cfg;
  cfg.trials = 100'000;
  cfg.seed = 3;
  const std::vector<std::int64_t> counts{1, 1};
  const auto sim = simulate(two, counts, cfg);
  for (const auto& agent : sim.agents) {
    CHECK(std::abs(agent.mean - 5.0 / 9) <= 4 * agent.std_error);
    CHECK(agent.ci_low() <= 5.0 / 9);
    CHECK(agent.ci_high() >= 5.0 / 9);
  }
  CHECK(sim.expected[0] == doctest::Approx(5.0 / 9));
}

TEST_CASE("regression matches theory") {
  EstimationConfig cfg;
  cfg.task = EstimationTask::LinearRegression;
  cfg.dim = 2;
  cfg.trials = 20'000;
  cfg.seed = 8;
  const std::vector<std::int64_t> counts{10};
  const auto sim = simulate(weights(clique(1), 1.0), counts, cfg);
  CHECK(sim.expected[0] == doctest::Approx(2.0 / 7));
  CHECK(std::abs(sim.agents[0].mean - 2.0 / 7) <= 4 * sim.agents[0].std_error);

  const std::vector<std::int64_t> too_few{3};
  CHECK_THROWS_AS(simulate(weights(clique(1), 1.0), too_few, cfg), std::invalid_argument);
}

TEST_CASE("determinism and thread independence") {
  const Graph g = star(6);
  const auto ew = weights(g, 1.0);
  const std::vector<std::int64_t> counts{3, 5, 5, 5, 5, 5};
  EstimationConfig cfg;
  cfg.trials = 3000;
  cfg.seed = 21;
  const auto a = simulate(ew, counts, cfg);
  const auto b = simulate(ew, counts, cfg);
  cfg.threads = 4;
  const auto c = simulate(ew, counts, cfg);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    CHECK(a.agents[i].mean == b.agents[i].mean);
    CHECK(a.agents[i].mean == c.agents[i].mean);
    CHECK(a.agents[i].std_error == c.agents[i].std_error);
  }
}

TEST_CASE("federated error never exceeds the worst local error") {
  const Graph g = star(5);
  const auto ew = weights(g, 1.0);
  const std::vector<std::int64_t> counts{2, 8, 8, 8, 8};
  EstimationConfig cfg;
  cfg.trials = 20'000;
  cfg.seed = 2;
  const auto sim = simulate(ew, counts, cfg);
  for (const auto& agent : sim.agents) CHECK(agent.mean <= 0.5 + 3 * agent.ci_half_width);
}

TEST_CASE("guarantee checks") {
  const Graph k3 = clique(3);
  const auto v = InfluenceFactors::uniform(1.0);
  const auto opt = solve(weights(k3, 1.0));
  EstimationConfig cfg;
  cfg.seed = 4;
  const auto ok = check_guarantee(k3, v, opt.m, 0.01, cfg);
  CHECK(ok.m_eps == doctest::Approx(100.0));
  for (const auto& a : ok.agents) CHECK(a.m == 38);
  CHECK(ok.all_passed());

  const auto halved = check_guarantee(k3, v, opt.m * 0.5, 0.01, cfg);
  CHECK(halved.failures() >= 1);

  const auto trivial = check_guarantee(clique(1), v, Eigen::VectorXd::Ones(1), 1.0, cfg);
  CHECK(trivial.agents[0].m == 1);
  CHECK(trivial.all_passed());

  const Graph s = star(8);
  const auto alpha0 = check_guarantee(s, InfluenceFactors::uniform(0.0), Eigen::VectorXd::Ones(8), 0.05, cfg);
  CHECK(alpha0.all_passed());
}
