#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "hawkes/markov.hpp"
#include "hawkes/rng.hpp"
#include "test_support.hpp"

using namespace hawkes;

namespace {

Eigen::MatrixXd two_state(double p_dd, double p_uu) {
  Eigen::MatrixXd P(2, 2);
  P << p_dd, 1.0 - p_dd, 1.0 - p_uu, p_uu;
  return P;
}

}  // namespace

TEST_SUITE_BEGIN("markov");

TEST_CASE("transition estimation") {
  SUBCASE("deterministic alternation") {
    const auto P = estimate_transitions({0, 1, 0, 1, 0}, 2);
    CHECK(P(0, 0) == 0.0);
    CHECK(P(0, 1) == 1.0);
    CHECK(P(1, 0) == 1.0);
    CHECK(P(1, 1) == 0.0);
  }
  SUBCASE("unvisited or dead-end states are hard errors") {
    CHECK_THROWS_WITH_AS(estimate_transitions({0, 0, 1}, 3), doctest::Contains("state"),
                         std::invalid_argument);
    CHECK_THROWS_AS(estimate_transitions({0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_transitions({0, 3}, 2), std::invalid_argument);
  }
  SUBCASE("frequencies are exact ratios") {
    const auto P = estimate_transitions({0, 0, 1, 0, 1, 1, 0, 0}, 2);
    CHECK(P(0, 0) == doctest::Approx(2.0 / 4.0));
    CHECK(P(0, 1) == doctest::Approx(2.0 / 4.0));
    CHECK(P(1, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(P(1, 1) == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("transition matrix validation") {
  CHECK_THROWS_AS(TransitionMatrix{Eigen::MatrixXd::Identity(3, 3)}, std::invalid_argument);
  Eigen::MatrixXd bad_sum(2, 2);
  bad_sum << 0.5, 0.6, 0.5, 0.5;
  CHECK_THROWS_AS(TransitionMatrix{bad_sum}, std::invalid_argument);
  Eigen::MatrixXd negative(2, 2);
  negative << -0.1, 1.1, 0.5, 0.5;
  CHECK_THROWS_AS(TransitionMatrix{negative}, std::invalid_argument);
  Eigen::MatrixXd reducible(3, 3);
  reducible << 0.5, 0.5, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_WITH_AS(TransitionMatrix{reducible}, doctest::Contains("reducible"),
                       std::invalid_argument);
  // Periodic but irreducible chains construct; ergodicity is checked where a
  // unique stationary regime is required.
  CHECK_NOTHROW(TransitionMatrix(two_state(0.0, 0.0)));
  CHECK_THROWS_WITH_AS(stationary_distribution(TransitionMatrix(two_state(0.0, 0.0))),
                       doctest::Contains("periodic"), std::invalid_argument);
}

TEST_CASE("stationary distribution") {
  SUBCASE("symmetric two-state") {
    const auto pi = stationary_distribution(TransitionMatrix(two_state(0.5, 0.5)));
    CHECK(pi.pi(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pi.pi(1) == doctest::Approx(0.5).epsilon(1e-12));
    const auto sticky = stationary_distribution(TransitionMatrix(two_state(0.9, 0.9)));
    CHECK(sticky.pi(0) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("fitted-scale two-state closed form") {
    // pi_down = (1 - p_uu) / ((1 - p_uu) + (1 - p_dd))
    const double p_dd = 0.4956, p_uu = 0.4933;
    const auto pi = stationary_distribution(TransitionMatrix(two_state(p_dd, p_uu)));
    const double pi_down = (1.0 - p_uu) / ((1.0 - p_uu) + (1.0 - p_dd));
    CHECK(pi.pi(0) == doctest::Approx(pi_down).epsilon(1e-12));
    CHECK(pi.pi(0) == doctest::Approx(0.50114).epsilon(1e-5));
    CHECK(pi.pi(1) == doctest::Approx(0.49886).epsilon(1e-5));
  }
  SUBCASE("matches power iteration on random ergodic chains") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform01() * 31);
      const auto P = oracle::random_ergodic_chain(n, rng);
      const auto pi = stationary_distribution(P);
      const auto ref = oracle::power_iteration_pi(P.matrix());
      CHECK((pi.pi - ref).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("fundamental solve") {
  const TransitionMatrix P(two_state(0.4956, 0.4933));
  const auto pi = stationary_distribution(P);

  SUBCASE("zero rhs gives zero") {
    const auto g = fundamental_solve(P, pi, Eigen::VectorXd::Zero(2));
    CHECK(g.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("residual bound and explicit 2x2 inverse") {
    Eigen::VectorXd marks(2);
    marks << -0.005, 0.005;
    Eigen::VectorXd b = marks.array() - pi.pi.dot(marks);
    const auto g = fundamental_solve(P, pi, b);
    const Eigen::MatrixXd system =
        P.matrix() + Eigen::VectorXd::Ones(2) * pi.pi.transpose() -
        Eigen::MatrixXd::Identity(2, 2);
    CHECK((system * g - b).cwiseAbs().maxCoeff() < 1e-10);
    // hand inverse of the 2x2 system
    const double det = system(0, 0) * system(1, 1) - system(0, 1) * system(1, 0);
    Eigen::VectorXd g_ref(2);
    g_ref << (system(1, 1) * b(0) - system(0, 1) * b(1)) / det,
        (system(0, 0) * b(1) - system(1, 0) * b(0)) / det;
    CHECK((g - g_ref).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("iid chain: the solve swaps the centered two-state rhs") {
    // For P = Pi* the system is 2 Pi* - I; with b = (-1, 1) the hand solve
    // gives g = (1, -1) (rows reduce to g2 = b1, g1 = b2).
    const TransitionMatrix iid(two_state(0.5, 0.5));
    const auto pi_iid = stationary_distribution(iid);
    Eigen::VectorXd b(2);
    b << -1.0, 1.0;
    const auto g = fundamental_solve(iid, pi_iid, b);
    CHECK(g(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g(1) == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("dimension and finiteness checks") {
    CHECK_THROWS_AS(fundamental_solve(P, pi, Eigen::VectorXd::Zero(3)), std::invalid_argument);
    Eigen::VectorXd nan_b = Eigen::VectorXd::Constant(2, std::nan(""));
    CHECK_THROWS_AS(fundamental_solve(P, pi, nan_b), std::invalid_argument);
  }
}

TEST_CASE("fundamental identity on random ergodic chains up to n = 32") {
  Rng rng(99);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform01() * 31);
    const auto P = oracle::random_ergodic_chain(n, rng);
    const auto pi = stationary_distribution(P);
    Eigen::VectorXd marks(n);
    for (int i = 0; i < n; ++i) marks(i) = 2.0 * rng.uniform01() - 1.0;
    Eigen::VectorXd b = marks.array() - pi.pi.dot(marks);
    CHECK(std::abs(pi.pi.dot(b)) < 1e-10);  // centered marks are pi-orthogonal
    const auto g = fundamental_solve(P, pi, b);
    const Eigen::MatrixXd system = P.matrix() +
                                   Eigen::VectorXd::Ones(n) * pi.pi.transpose() -
                                   Eigen::MatrixXd::Identity(n, n);
    CHECK((system * g - b).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + b.norm()));
  }
}

TEST_CASE("chain simulation") {
  SUBCASE("deterministic alternation from a fixed start") {
    Eigen::VectorXd start(2);
    start << 1.0, 0.0;
    const auto path = simulate_chain(TransitionMatrix(two_state(0.0, 0.0)), start, 4, 1);
    CHECK(path == std::vector<int>{0, 1, 0, 1});
  }
  SUBCASE("deterministic per seed") {
    const TransitionMatrix P(two_state(0.7, 0.6));
    Eigen::VectorXd pi0(2);
    pi0 << 0.5, 0.5;
    CHECK(simulate_chain(P, pi0, 50, 8) == simulate_chain(P, pi0, 50, 8));
    CHECK(simulate_chain(P, pi0, 50, 8) != simulate_chain(P, pi0, 50, 9));
  }
  SUBCASE("empirical frequencies recover the fitted-scale chain") {
    const double p_dd = 0.4956, p_uu = 0.4933;
    const TransitionMatrix P(two_state(p_dd, p_uu));
    const auto pi = stationary_distribution(P);
    const auto path = simulate_chain(P, pi.pi, 1'000'000, 31415);
    const auto est = estimate_transitions(path, 2);
    CHECK(std::abs(est(1, 1) - p_uu) < 0.005);
    CHECK(std::abs(est(0, 0) - p_dd) < 0.005);
  }
  SUBCASE("estimate o simulate recovers random chains within binomial error") {
    Rng rng(123);
    const int n = 4;
    const auto P = oracle::random_ergodic_chain(n, rng);
    const auto pi = stationary_distribution(P);
    const long steps = 1'000'000;
    const auto path = simulate_chain(P, pi.pi, steps, 2720);
    std::vector<long> visits(n, 0);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) visits[path[k]] += 1;
    const auto est = estimate_transitions(path, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double p = P(i, j);
        const double tol = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(visits[i]));
        CHECK(std::abs(est(i, j) - p) <= tol);
      }
    }
  }
  SUBCASE("argument validation") {
    const TransitionMatrix P(two_state(0.5, 0.5));
    Eigen::VectorXd pi0(2);
    pi0 << 0.5, 0.5;
    CHECK_THROWS_AS(simulate_chain(P, pi0, 0, 1), std::invalid_argument);
    Eigen::VectorXd bad(2);
    bad << 0.5, 0.6;
    CHECK_THROWS_AS(simulate_chain(P, bad, 5, 1), std::invalid_argument);
  }
}

TEST_SUITE_END();
