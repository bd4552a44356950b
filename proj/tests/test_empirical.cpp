#include <doctest.h>

#include <cmath>
#include <vector>

#include "hawkes/empirical.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"
#include "test_support.hpp"

using namespace hawkes;

namespace {

lob::PriceChangeSeries series_from(const std::vector<double>& times,
                                   const std::vector<double>& changes) {
  lob::PriceChangeSeries out;
  out.s0 = 100.0;
  out.window_start = 0.0;
  out.window_end = times.empty() ? 1.0 : times.back() + 1.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    out.events.push_back({times[i], changes[i]});
  return out;
}

// Brute-force window statistic: enumerate windows and sum marks directly.
std::vector<double> enumerate_residuals(const std::vector<double>& times,
                                        const std::vector<double>& marks, double a_star,
                                        double window) {
  const double t0 = times.front();
  const auto count = static_cast<long>(std::floor((times.back() - t0) / window));
  std::vector<double> out;
  for (long i = 0; i < count; ++i) {
    double sum = 0.0;
    long n = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (times[k] >= t0 + i * window && times[k] < t0 + (i + 1) * window) {
        sum += marks[k];
        ++n;
      }
    }
    out.push_back(sum - a_star * n);
  }
  return out;
}

CompoundModel symmetric_chpdo(double alpha, double beta, double delta = 0.005) {
  Eigen::MatrixXd P(2, 2);
  P << 0.5, 0.5, 0.5, 0.5;
  Eigen::VectorXd marks(2);
  marks << -delta, delta;
  return CompoundModel{HawkesSpec{1.0, exponential_kernel(alpha, beta), Identity{}},
                       TransitionMatrix(P), marks};
}

}  // namespace

TEST_SUITE_BEGIN("empirical");

TEST_CASE("window residuals") {
  SUBCASE("plain displacement with a* = 0") {
    const auto data = series_from({1.0, 2.0, 3.0, 7.0}, {0.005, -0.005, 0.005, 0.005});
    const auto res = window_residuals(data, {0.005, -0.005, 0.005, 0.005}, 0.0, 5.0);
    REQUIRE(res.values.size() == 1);  // span 6 -> one complete 5 s window
    CHECK(res.values[0] == doctest::Approx(0.005).epsilon(1e-12));
  }
  SUBCASE("empty windows score zero") {
    const auto data = series_from({1.0, 2.0, 3.0, 11.5}, {0.005, -0.005, 0.005, 0.005});
    const auto res = window_residuals(data, {0.005, -0.005, 0.005, 0.005}, 0.0, 4.0);
    REQUIRE(res.values.size() == 2);
    CHECK(res.values[1] == 0.0);
  }
  SUBCASE("event counts weigh in through a*") {
    const auto data = series_from({1.0, 2.0, 3.0, 7.0, 8.0}, {0.01, -0.01, 0.01, 0.01, 0.01});
    const auto res =
        window_residuals(data, {0.01, -0.01, 0.01, 0.01, 0.01}, 0.002, 5.0);
    REQUIRE(res.values.size() == 1);
    CHECK(res.values[0] == doctest::Approx(0.01 - 3 * 0.002).epsilon(1e-12));
  }
  SUBCASE("fewer than two complete windows is an error") {
    const auto data = series_from({1.0, 2.0}, {0.005, 0.005});
    CHECK_THROWS_AS(window_residuals(data, {0.005, 0.005}, 0.0, 10.0),
                    std::invalid_argument);
  }
  SUBCASE("window std follows the diffusion prediction on simulated days") {
    const CompoundModel model = symmetric_chpdo(1.0, 2.0);
    const double target = std::sqrt(60.0) * 0.005 * std::sqrt(2.0);
    std::vector<double> stds;
    for (int s = 0; s < 20; ++s) {
      const auto ev = simulate(model.spec, 6000.0, derive_seed(42, s));
      const auto pi = stationary_distribution(model.chain).pi;
      const auto states = simulate_chain(model.chain, pi, static_cast<long>(ev.size()),
                                         derive_seed(43, s));
      std::vector<double> marks(states.size());
      for (std::size_t i = 0; i < states.size(); ++i) marks[i] = model.marks(states[i]);
      lob::PriceChangeSeries data;
      data.window_start = 0.0;
      data.window_end = 6000.0;
      for (std::size_t i = 0; i < marks.size(); ++i)
        data.events.push_back({ev.times()[i], marks[i]});
      stds.push_back(sample_std(window_residuals(data, marks, 0.0, 60.0).values));
    }
    CHECK(std::abs(mean(stds) - target) / target < 0.10);
  }
}

TEST_CASE("std curves") {
  SUBCASE("grid has 120 points") { CHECK(default_window_grid().size() == 120); }
  SUBCASE("deterministic alternation matches brute-force enumeration") {
    std::vector<double> times, marks;
    for (int i = 1; i <= 2000; ++i) {
      times.push_back(i);
      marks.push_back(i % 2 == 0 ? -0.005 : 0.005);
    }
    const auto data = series_from(times, marks);
    const std::vector<double> grid{10.0, 15.0, 60.0, 97.0};
    const auto curve = empirical_std_curve(data, marks, 0.0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto ref = enumerate_residuals(times, marks, 0.0, grid[i]);
      CHECK(curve.points[i].std == doctest::Approx(sample_std(ref)).epsilon(1e-12));
    }
    // even windows hold a whole number of +/- pairs: identically zero
    CHECK(curve.points[0].std == 0.0);
  }
  SUBCASE("theoretical curve is coefficient * sqrt(n)") {
    const auto curve = theoretical_std_curve(0.00186, {1.0, 400.0});
    CHECK(curve.points[0].std == doctest::Approx(0.00186));
    CHECK(curve.points[1].std == doctest::Approx(0.0372));
    const auto zero = theoretical_std_curve(0.0, {10.0, 20.0});
    for (const auto& pt : zero.points) CHECK(pt.std == 0.0);
  }
  SUBCASE("sqrt transform") {
    StdCurve curve{{{100.0, 0.04}}, CurveKind::empirical};
    const auto once = sqrt_transform(curve);
    CHECK(once.points[0].std == doctest::Approx(0.2));
    CHECK(once.kind == CurveKind::sqrt_transformed);
    const auto twice = sqrt_transform(once);
    CHECK(twice.points[0].std == doctest::Approx(std::pow(0.04, 0.25)));
    const auto zeros = sqrt_transform(theoretical_std_curve(0.0, {1.0, 2.0}));
    for (const auto& pt : zeros.points) CHECK(pt.std == 0.0);
  }
}

TEST_CASE("mean squared residual and best fit") {
  std::vector<double> grid;
  for (int n = 10; n <= 1200; n += 10) grid.push_back(n);

  SUBCASE("identical curves score zero; constant offsets square") {
    const auto a = theoretical_std_curve(0.002, grid);
    CHECK(mean_squared_residual(a, a) == 0.0);
    StdCurve shifted = a;
    for (auto& pt : shifted.points) pt.std += 0.01;
    CHECK(mean_squared_residual(shifted, a) == doctest::Approx(1e-4).epsilon(1e-9));
  }
  SUBCASE("grid mismatch is an error") {
    const auto a = theoretical_std_curve(0.002, {10.0, 20.0});
    const auto b = theoretical_std_curve(0.002, {10.0, 30.0});
    CHECK_THROWS_AS(mean_squared_residual(a, b), std::invalid_argument);
    const auto c = theoretical_std_curve(0.002, {10.0});
    CHECK_THROWS_AS(mean_squared_residual(a, c), std::invalid_argument);
  }
  SUBCASE("best fit is exact on curves of the assumed shape") {
    const auto exact = theoretical_std_curve(0.00231, grid);
    const auto fit = best_fit_coefficient(exact, 0.00231);
    CHECK(fit.coefficient == doctest::Approx(0.00231).epsilon(1e-12));
    CHECK(fit.percent_error == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("two-point closed form") {
    StdCurve emp{{{100.0, 0.02}, {400.0, 0.04}}, CurveKind::empirical};
    const auto fit = best_fit_coefficient(emp, 0.002);
    CHECK(fit.coefficient == doctest::Approx(0.002).epsilon(1e-12));
  }
  SUBCASE("degenerate all-zero curve is an error") {
    const auto zeros = theoretical_std_curve(0.0, grid);
    CHECK_THROWS_AS(best_fit_coefficient(zeros, 0.1), std::invalid_argument);
  }
  SUBCASE("scaling the data scales the curve and fit, not the percent error") {
    Rng rng(9);
    std::vector<double> times, marks;
    double t = 0.0;
    for (int i = 0; i < 4000; ++i) {
      times.push_back(t += rng.exponential(1.0));
      marks.push_back((rng.uniform01() < 0.5 ? -0.005 : 0.005) *
                      (1.0 + std::floor(rng.uniform01() * 3.0)));
    }
    const auto data = series_from(times, marks);
    const std::vector<double> small_grid{10.0, 20.0, 40.0, 80.0};
    const auto base = empirical_std_curve(data, marks, 0.0, small_grid);
    const double c = 2.5;
    std::vector<double> scaled_marks = marks;
    for (double& m : scaled_marks) m *= c;
    auto scaled_data = data;
    for (std::size_t i = 0; i < scaled_data.events.size(); ++i)
      scaled_data.events[i].change *= c;
    const auto scaled = empirical_std_curve(scaled_data, scaled_marks, 0.0, small_grid);
    for (std::size_t i = 0; i < base.points.size(); ++i)
      CHECK(scaled.points[i].std == doctest::Approx(c * base.points[i].std).epsilon(1e-10));
    const auto fit_base = best_fit_coefficient(base, 0.004);
    const auto fit_scaled = best_fit_coefficient(scaled, c * 0.004);
    CHECK(fit_scaled.coefficient ==
          doctest::Approx(c * fit_base.coefficient).epsilon(1e-10));
    CHECK(fit_scaled.percent_error == doctest::Approx(fit_base.percent_error).epsilon(1e-8));
  }
  SUBCASE("time translation leaves the curve unchanged") {
    Rng rng(10);
    std::vector<double> times, marks;
    double t = 0.0;
    for (int i = 0; i < 2000; ++i) {
      times.push_back(t += rng.exponential(1.0));
      marks.push_back(rng.uniform01() < 0.5 ? -0.005 : 0.005);
    }
    const std::vector<double> grid2{15.0, 45.0, 90.0};
    const auto base = empirical_std_curve(series_from(times, marks), marks, 0.0, grid2);
    std::vector<double> shifted = times;
    for (double& x : shifted) x += 34200.0;
    const auto moved = empirical_std_curve(series_from(shifted, marks), marks, 0.0, grid2);
    for (std::size_t i = 0; i < base.points.size(); ++i)
      CHECK(moved.points[i].std == doctest::Approx(base.points[i].std).epsilon(1e-12));
  }
}

TEST_CASE("qq against the fitted exponential") {
  SUBCASE("poisson data sits on the diagonal") {
    Rng rng(33);
    std::vector<double> times;
    double t = 0.0;
    for (int i = 0; i < 10000; ++i) times.push_back(t += rng.exponential(2.0));
    const auto qq = qq_poisson_data(EventSequence(times, t + 1.0));
    REQUIRE(qq.size() == 9999);
    double se = 0.0, sf = 0.0, see = 0.0, sff = 0.0, sef = 0.0;
    for (const auto& p : qq) {
      se += p.empirical;
      sf += p.fitted;
      see += p.empirical * p.empirical;
      sff += p.fitted * p.fitted;
      sef += p.empirical * p.fitted;
    }
    const double n = static_cast<double>(qq.size());
    const double corr = (n * sef - se * sf) /
                        std::sqrt((n * see - se * se) * (n * sff - sf * sf));
    CHECK(corr > 0.99);
  }
  SUBCASE("too few events is an error") {
    CHECK_THROWS_AS(qq_poisson_data(EventSequence({1.0, 2.0}, 3.0)), std::invalid_argument);
  }
  SUBCASE("clustered arrivals depart from the diagonal in the short gaps") {
    const HawkesSpec spec{1.0, exponential_kernel(1.4, 2.0), Identity{}};
    const auto ev = simulate(spec, 4000.0, 54321);
    const auto qq = qq_poisson_data(ev);
    // heavier short-gap mass: the lower quartile sits well below the fitted line
    const auto& lower = qq[qq.size() / 4];
    CHECK(lower.empirical < 0.8 * lower.fitted);
  }
}

TEST_CASE("clustering counts") {
  SUBCASE("evenly spaced events give a constant count") {
    std::vector<double> times;
    for (int i = 0; i < 500; ++i) times.push_back(0.5 + i);
    const auto counts = clustering_counts(EventSequence(times, 500.0), 60.0);
    REQUIRE(!counts.empty());
    for (const auto& pt : counts) CHECK(pt.count == 60);
  }
  SUBCASE("empty sequence gives an empty series") {
    CHECK(clustering_counts(EventSequence({}, 100.0), 60.0).empty());
  }
  SUBCASE("hawkes clustering overdisperses the counts") {
    const HawkesSpec spec{1.0, exponential_kernel(1.0, 2.0), Identity{}};  // mu_hat = 0.5
    const auto ev = simulate(spec, 3000.0, 888);
    const auto counts = clustering_counts(ev, 60.0);
    std::vector<double> xs;
    xs.reserve(counts.size());
    for (const auto& pt : counts) xs.push_back(static_cast<double>(pt.count));
    const double m = mean(xs);
    const double v = sample_std(xs) * sample_std(xs);
    CHECK(v / m > 1.5);  // Poisson-matched variance would equal the mean
  }
}

TEST_CASE("verify_fclt") {
  SUBCASE("degenerate marks give a degenerate pass") {
    Eigen::MatrixXd P(2, 2);
    P << 0.5, 0.5, 0.5, 0.5;
    Eigen::VectorXd marks = Eigen::VectorXd::Constant(2, 0.005);
    const CompoundModel model{HawkesSpec{1.0, exponential_kernel(1.0, 2.0), Identity{}},
                              TransitionMatrix(P), marks};
    VerifyOptions opts;
    opts.n = 100.0;
    opts.paths = 100;
    const auto report = verify_fclt(model, opts);
    CHECK(report.predicted_std == 0.0);
    CHECK(report.sample_std == 0.0);
    CHECK(report.z == 0.0);
  }
  SUBCASE("symmetric benchmark at reduced scale") {
    VerifyOptions opts;
    opts.n = 4000.0;
    opts.paths = 300;
    opts.seed = 7;
    const auto report = verify_fclt(symmetric_chpdo(1.0, 2.0), opts);
    CHECK(report.predicted_std == doctest::Approx(0.005 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(std::abs(report.z) <= 3.0);
    CHECK(report.ks_stat < report.ks_critical_1pct);
  }
  SUBCASE("z scores over independent master seeds are standard-normal-consistent") {
    std::vector<double> zs;
    for (int s = 0; s < 50; ++s) {
      VerifyOptions opts;
      opts.n = 500.0;
      opts.paths = 120;
      opts.seed = derive_seed(1000, s);
      zs.push_back(verify_fclt(symmetric_chpdo(1.0, 2.0), opts).z);
    }
    CHECK(std::abs(mean(zs)) < 0.5);
    const double sd = sample_std(zs);
    CHECK(sd > 0.7);
    CHECK(sd < 1.4);
  }
  SUBCASE("path count precondition") {
    VerifyOptions opts;
    opts.paths = 50;
    CHECK_THROWS_AS(verify_fclt(symmetric_chpdo(1.0, 2.0), opts), std::invalid_argument);
  }
}

TEST_CASE("verify_lln") {
  SUBCASE("zero drift for the symmetric chain") {
    VerifyOptions opts;
    opts.n = 2000.0;
    opts.paths = 200;
    opts.seed = 11;
    const auto report = verify_lln(symmetric_chpdo(1.0, 2.0), opts);
    CHECK(report.predicted_drift == 0.0);
    CHECK(std::abs(report.z) <= 3.0);
  }
  SUBCASE("fitted-scale chpdo model") {
    Eigen::MatrixXd P(2, 2);
    P << 0.4956, 0.5044, 0.5067, 0.4933;
    Eigen::VectorXd marks(2);
    marks << -0.005, 0.005;
    const CompoundModel model{
        HawkesSpec{1.4683, exponential_kernel(1045.2676, 2556.1844), Identity{}},
        TransitionMatrix(P), marks};
    VerifyOptions opts;
    opts.n = 10000.0;
    opts.paths = 150;
    opts.seed = 13;
    const auto report = verify_lln(model, opts);
    const auto lp = compute_limit_params(model.chain, model.marks);
    CHECK(report.predicted_drift ==
          doctest::Approx(lln_drift(lp.a_star, 1.4683, 1045.2676 / 2556.1844)).epsilon(1e-9));
    CHECK(std::abs(report.z) <= 3.0);
  }
  SUBCASE("capped-link drift uses the simulated arrival rate") {
    Eigen::MatrixXd P(2, 2);
    P << 0.6, 0.4, 0.45, 0.55;
    Eigen::VectorXd marks(2);
    marks << -0.004, 0.006;
    const CompoundModel model{HawkesSpec{1.0, exponential_kernel(2.0, 1.0), Capped{3.0}},
                              TransitionMatrix(P), marks};
    VerifyOptions opts;
    opts.n = 2000.0;
    opts.paths = 150;
    opts.seed = 17;
    opts.stationary_horizon = 2e4;
    const auto report = verify_lln(model, opts);
    CHECK(report.predicted_drift != 0.0);
    CHECK(std::abs(report.z) <= 4.0);
  }
}

TEST_CASE("mse decreases under quantile refinement") {
  // iid heavy-tailed marks on Poisson arrivals: refining the state partition
  // moves sigma* toward the full mark variance, pulling the theoretical curve
  // up toward the empirical one.
  Rng rng(77);
  std::vector<double> times, marks;
  double t = 0.0;
  while (t < 20000.0) {
    times.push_back(t += rng.exponential(1.0));
    const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    const int magnitude = 1 + static_cast<int>(std::floor(std::pow(rng.uniform01(), 2.0) * 12.0));
    marks.push_back(sign * 0.005 * magnitude);
  }
  const auto data = series_from(times, marks);
  std::vector<double> grid;
  for (int n = 10; n <= 600; n += 10) grid.push_back(n);

  const auto mse_for = [&](int q) {
    const auto [model, states] = lob::build_quantile_states(data, q);
    const auto P = estimate_transitions(states, model.states());
    const auto lp = compute_limit_params(P, model.marks);
    const auto emp = empirical_std_curve(data, marks, lp.a_star, grid);
    const auto theo = theoretical_std_curve(diffusion_coefficient(lp.sigma_star, 1.0, 0.0),
                                            grid);
    return mean_squared_residual(sqrt_transform(emp), sqrt_transform(theo));
  };
  const double mse2 = mse_for(2);
  const double mse8 = mse_for(8);
  const double mse16 = mse_for(16);
  CHECK(mse8 <= mse2 + 1e-12);
  CHECK(mse16 <= mse8 + 1e-12);
}

TEST_SUITE_END();
