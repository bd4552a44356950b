#include "hawkes/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"

namespace hawkes {

WindowResiduals window_residuals(const lob::PriceChangeSeries& changes,
                                 const std::vector<double>& marks, double a_star,
                                 double window) {
  if (!(window > 0.0)) throw std::invalid_argument("empirical: window must be positive");
  if (marks.size() != changes.events.size())
    throw std::invalid_argument("empirical: one mark per event required");
  if (changes.events.empty())
    throw std::invalid_argument("empirical: no events to window");

  const double t0 = changes.events.front().time;
  const double span = changes.events.back().time - t0;
  const long windows = static_cast<long>(std::floor(span / window));
  if (windows < 2)
    throw std::invalid_argument("empirical: fewer than 2 complete windows of " +
                                std::to_string(window) + " s");

  WindowResiduals out{window, std::vector<double>(windows, 0.0)};
  std::vector<long> counts(windows, 0);
  for (std::size_t k = 0; k < changes.events.size(); ++k) {
    const auto w = static_cast<long>(std::floor((changes.events[k].time - t0) / window));
    if (w < 0 || w >= windows) continue;
    out.values[w] += marks[k];
    counts[w] += 1;
  }
  for (long w = 0; w < windows; ++w) out.values[w] -= a_star * static_cast<double>(counts[w]);
  return out;
}

std::vector<double> default_window_grid() {
  std::vector<double> grid;
  for (int n = 10; n <= 1200; n += 10) grid.push_back(n);
  return grid;
}

StdCurve empirical_std_curve(const lob::PriceChangeSeries& changes,
                             const std::vector<double>& marks, double a_star,
                             const std::vector<double>& windows) {
  StdCurve curve;
  curve.kind = CurveKind::empirical;
  for (double n : windows) {
    const auto res = window_residuals(changes, marks, a_star, n);
    curve.points.push_back({n, sample_std(res.values)});
  }
  return curve;
}

StdCurve theoretical_std_curve(double coefficient, const std::vector<double>& windows) {
  if (!(coefficient >= 0.0))
    throw std::invalid_argument("empirical: coefficient must be >= 0");
  StdCurve curve;
  curve.kind = CurveKind::theoretical;
  for (double n : windows) curve.points.push_back({n, coefficient * std::sqrt(n)});
  return curve;
}

StdCurve sqrt_transform(const StdCurve& curve) {
  StdCurve out;
  out.kind = CurveKind::sqrt_transformed;
  out.points.reserve(curve.points.size());
  for (const auto& pt : curve.points) out.points.push_back({pt.window, std::sqrt(pt.std)});
  return out;
}

double mean_squared_residual(const StdCurve& empirical, const StdCurve& theoretical) {
  if (empirical.points.size() != theoretical.points.size() || empirical.points.empty())
    throw std::invalid_argument("empirical: curves must share a non-empty window grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < empirical.points.size(); ++i) {
    if (std::abs(empirical.points[i].window - theoretical.points[i].window) > 1e-9)
      throw std::invalid_argument("empirical: window grids differ");
    const double d = empirical.points[i].std - theoretical.points[i].std;
    acc += d * d;
  }
  return acc / static_cast<double>(empirical.points.size());
}

BestFit best_fit_coefficient(const StdCurve& empirical, double theoretical_coefficient) {
  if (empirical.points.size() < 2)
    throw std::invalid_argument("empirical: best fit needs at least 2 points");
  double num = 0.0, den = 0.0;
  for (const auto& pt : empirical.points) {
    num += pt.std * std::sqrt(pt.window);
    den += pt.window;
  }
  if (num == 0.0)
    throw std::invalid_argument("empirical: degenerate all-zero curve");
  const double c = num / den;
  return BestFit{c, std::abs(theoretical_coefficient - c) / c * 100.0};
}

std::vector<QqPoint> qq_poisson_data(const EventSequence& events) {
  if (events.size() < 10)
    throw std::invalid_argument("empirical: QQ data needs at least 10 events");
  const auto& times = events.times();
  std::vector<double> gaps;
  gaps.reserve(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) gaps.push_back(times[i] - times[i - 1]);
  std::sort(gaps.begin(), gaps.end());
  const double rate = static_cast<double>(gaps.size()) /
                      std::accumulate(gaps.begin(), gaps.end(), 0.0);
  std::vector<QqPoint> out;
  out.reserve(gaps.size());
  const double m = static_cast<double>(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / m;
    out.push_back({gaps[i], -std::log1p(-p) / rate});
  }
  return out;
}

std::vector<ClusterPoint> clustering_counts(const EventSequence& events, double window) {
  if (!(window > 0.0)) throw std::invalid_argument("empirical: window must be positive");
  if (!(events.horizon() > window))
    throw std::invalid_argument("empirical: horizon must exceed the window");
  std::vector<ClusterPoint> out;
  if (events.empty()) return out;

  const auto& times = events.times();
  std::size_t lo = 0, hi = 0;
  for (double t = 0.0; t <= events.horizon() - window; t += 1.0) {
    while (lo < times.size() && times[lo] < t) ++lo;
    while (hi < times.size() && times[hi] < t + window) ++hi;
    out.push_back({t, static_cast<long>(hi - lo)});
  }
  return out;
}

UnitArrivalEstimate estimate_unit_arrivals_stationary(const HawkesSpec& spec, double horizon,
                                                      std::uint64_t seed) {
  if (!(horizon > 0.0))
    throw std::invalid_argument("empirical: stationary horizon must be positive");
  const EventSequence path = simulate(spec, horizon, seed);
  const double burn = 0.1 * horizon;
  const double span = horizon - burn;
  constexpr int kBatches = 100;
  const double batch_len = span / kBatches;

  std::vector<double> rates(kBatches, 0.0);
  for (double t : path.times()) {
    if (t <= burn) continue;
    auto b = static_cast<int>((t - burn) / batch_len);
    if (b >= kBatches) b = kBatches - 1;
    rates[b] += 1.0;
  }
  for (double& r : rates) r /= batch_len;
  const double value = mean(rates);
  const double se = sample_std(rates) / std::sqrt(static_cast<double>(kBatches));
  return UnitArrivalEstimate{value, se};
}

namespace {

struct ArrivalLaw {
  double expected_unit;  // E[N[0,1]] under the stationary regime
  double rel_se;         // Monte Carlo relative error of the estimate, 0 if exact
};

ArrivalLaw resolve_arrival_law(const CompoundModel& model, const VerifyOptions& opts) {
  if (std::holds_alternative<Identity>(model.spec.link)) {
    const double mu_hat = branching_ratio(model.spec.kernel);
    if (mu_hat >= 1.0)
      throw std::invalid_argument("empirical: supercritical model, no limit theorem");
    return {model.spec.baseline / (1.0 - mu_hat), 0.0};
  }
  const auto est = estimate_unit_arrivals_stationary(model.spec, opts.stationary_horizon,
                                                     derive_seed(opts.seed, 0x5eed));
  return {est.value, est.value > 0.0 ? est.std_error / est.value : 0.0};
}

// Per-path statistics of the compound process, filled deterministically by
// path index regardless of the thread schedule.
std::vector<double> compound_paths(const CompoundModel& model, const VerifyOptions& opts,
                                   double a_star, bool fclt_statistic) {
  const double horizon = opts.n * opts.t;
  const Eigen::VectorXd pi = stationary_distribution(model.chain).pi;
  std::vector<double> values(opts.paths, 0.0);

  const auto worker = [&](int first, int step) {
    for (int p = first; p < opts.paths; p += step) {
      const std::uint64_t path_seed = derive_seed(opts.seed, p);
      const EventSequence events = simulate(model.spec, horizon, path_seed);
      const auto count = static_cast<long>(events.size());
      double sum = 0.0;
      if (count > 0) {
        const auto states =
            simulate_chain(model.chain, pi, count, derive_seed(path_seed, 1));
        for (int s : states) sum += model.marks(s);
      }
      values[p] = fclt_statistic
                      ? (sum - static_cast<double>(count) * a_star) / std::sqrt(opts.n)
                      : sum / opts.n;
    }
  };

  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker, j, jobs);
    for (auto& th : pool) th.join();
  }
  return values;
}

}  // namespace

FcltReport verify_fclt(const CompoundModel& model, const VerifyOptions& opts) {
  if (opts.paths < 100) throw std::invalid_argument("empirical: need at least 100 paths");
  validate_spec(model.spec);
  const ArrivalLaw law = resolve_arrival_law(model, opts);
  const LimitParams params = compute_limit_params(model.chain, model.marks);
  const double a_star =
      std::isnan(opts.a_star_override) ? params.a_star : opts.a_star_override;
  const double predicted =
      nonlinear_diffusion_coefficient(params.sigma_star, law.expected_unit) *
      std::sqrt(opts.t);

  const auto values = compound_paths(model, opts, a_star, /*fclt_statistic=*/true);
  const double observed = sample_std(values);

  FcltReport report{};
  report.sample_std = observed;
  report.predicted_std = predicted;
  report.paths = opts.paths;
  report.seed = opts.seed;
  if (predicted == 0.0) {
    report.z = observed == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    report.ks_stat = 0.0;
    report.ks_critical_1pct = ks_critical(0.01, values.size());
    return report;
  }
  const double se_sample = predicted / std::sqrt(2.0 * (opts.paths - 1));
  const double se_pred = 0.5 * predicted * law.rel_se;
  report.z = (observed - predicted) / std::hypot(se_sample, se_pred);

  std::vector<double> normalized(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) normalized[i] = values[i] / predicted;
  report.ks_stat = ks_statistic_normal(std::move(normalized));
  report.ks_critical_1pct = ks_critical(0.01, values.size());
  return report;
}

LlnReport verify_lln(const CompoundModel& model, const VerifyOptions& opts) {
  if (opts.paths < 100) throw std::invalid_argument("empirical: need at least 100 paths");
  validate_spec(model.spec);
  const ArrivalLaw law = resolve_arrival_law(model, opts);
  const LimitParams params = compute_limit_params(model.chain, model.marks);
  const double a_star =
      std::isnan(opts.a_star_override) ? params.a_star : opts.a_star_override;
  const double predicted = a_star * law.expected_unit * opts.t;

  const auto values = compound_paths(model, opts, a_star, /*fclt_statistic=*/false);

  LlnReport report{};
  report.sample_mean = mean(values);
  report.predicted_drift = predicted;
  report.paths = opts.paths;
  report.seed = opts.seed;
  const double se_mean = sample_std(values) / std::sqrt(static_cast<double>(opts.paths));
  const double se_pred = std::abs(a_star) * opts.t * law.expected_unit * law.rel_se;
  const double denom = std::hypot(se_mean, se_pred);
  if (denom == 0.0)
    report.z = report.sample_mean == predicted ? 0.0 : std::numeric_limits<double>::infinity();
  else
    report.z = (report.sample_mean - predicted) / denom;
  return report;
}

}  // namespace hawkes
