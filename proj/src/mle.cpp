#include "hawkes/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hawkes/rng.hpp"

namespace hawkes {

double log_likelihood(double lambda, double alpha, double beta,
                      const EventSequence& events, double window_start) {
  if (!(lambda > 0.0) || !(alpha >= 0.0) || !(beta > 0.0))
    throw std::invalid_argument("mle: require lambda > 0, alpha >= 0, beta > 0");
  const auto& times = events.times();
  const double horizon = events.horizon();
  if (!(window_start <= horizon))
    throw std::invalid_argument("mle: window start past the horizon");
  if (!times.empty() && times.front() < window_start)
    throw std::invalid_argument("mle: events before the window start");

  double ll = -lambda * (horizon - window_start);
  double a = 0.0;  // A_i = exp(-beta (t_i - t_{i-1})) (1 + A_{i-1}), A_1 = 0
  double prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0) a = std::exp(-beta * (times[i] - prev)) * (1.0 + a);
    prev = times[i];
    ll += std::log(lambda + alpha * a);
    ll -= alpha / beta * (1.0 - std::exp(-beta * (horizon - times[i])));
  }
  if (!std::isfinite(ll))
    throw std::runtime_error("mle: log-likelihood overflowed for these parameters");
  return ll;
}

double expected_unit_arrivals(double lambda, double alpha, double beta) {
  if (!(lambda > 0.0) || !(alpha >= 0.0) || !(beta > 0.0))
    throw std::invalid_argument("mle: require lambda > 0, alpha >= 0, beta > 0");
  const double mu_hat = alpha / beta;
  if (mu_hat >= 1.0)
    throw std::invalid_argument("mle: supercritical parameters (alpha/beta >= 1)");
  return lambda / (1.0 - mu_hat);
}

double empirical_unit_arrivals(const EventSequence& events) {
  if (!(events.horizon() > 0.0))
    throw std::invalid_argument("mle: empirical rate needs a positive horizon");
  return static_cast<double>(events.size()) / events.horizon();
}

namespace {

constexpr double kAlphaFloor = 1e-10;  // stands in for alpha = 0 in log space
constexpr double kInf = std::numeric_limits<double>::infinity();

using Point = std::array<double, 3>;

struct Objective {
  const EventSequence& events;
  long budget;
  long count = 0;
  double best = kInf;
  Point best_x{};

  bool exhausted() const { return count >= budget; }

  // Negative log-likelihood at log-parameters z; +inf past the budget.
  double operator()(const Point& z) {
    if (exhausted()) return kInf;
    ++count;
    double value = kInf;
    try {
      value = -log_likelihood(std::exp(z[0]), std::exp(z[1]), std::exp(z[2]), events);
    } catch (const std::runtime_error&) {
      // overflow regions of the box score as infeasible
    }
    if (value < best) {
      best = value;
      best_x = z;
    }
    return value;
  }
};

Point clamp_box(Point z, const Point& lo, const Point& hi) {
  for (int d = 0; d < 3; ++d) z[d] = std::min(hi[d], std::max(lo[d], z[d]));
  return z;
}

void particle_swarm(Objective& obj, const Point& lo, const Point& hi, long evals,
                    std::uint64_t seed) {
  constexpr int kParticles = 24;
  constexpr double kInertia = 0.7298;
  constexpr double kCognitive = 1.49618;
  constexpr double kSocial = 1.49618;

  Rng rng(seed);
  std::array<Point, kParticles> pos, vel, pbest;
  std::array<double, kParticles> pbest_f;
  Point gbest{};
  double gbest_f = kInf;

  for (int p = 0; p < kParticles; ++p) {
    for (int d = 0; d < 3; ++d) {
      const double range = hi[d] - lo[d];
      pos[p][d] = lo[d] + range * rng.uniform01();
      vel[p][d] = 0.25 * range * (2.0 * rng.uniform01() - 1.0);
    }
    pbest[p] = pos[p];
    pbest_f[p] = obj(pos[p]);
    if (pbest_f[p] < gbest_f) {
      gbest_f = pbest_f[p];
      gbest = pos[p];
    }
  }

  const long start = obj.count;
  while (obj.count - start + kParticles <= evals && !obj.exhausted()) {
    for (int p = 0; p < kParticles; ++p) {
      for (int d = 0; d < 3; ++d) {
        vel[p][d] = kInertia * vel[p][d] +
                    kCognitive * rng.uniform01() * (pbest[p][d] - pos[p][d]) +
                    kSocial * rng.uniform01() * (gbest[d] - pos[p][d]);
      }
      for (int d = 0; d < 3; ++d) pos[p][d] += vel[p][d];
      pos[p] = clamp_box(pos[p], lo, hi);
      const double f = obj(pos[p]);
      if (f < pbest_f[p]) {
        pbest_f[p] = f;
        pbest[p] = pos[p];
        if (f < gbest_f) {
          gbest_f = f;
          gbest = pos[p];
        }
      }
    }
  }
}

// Nelder-Mead from a start point, clamped to the box. Returns true when the
// simplex collapsed below the tolerance before the budget ran out.
bool nelder_mead(Objective& obj, Point start, const Point& lo, const Point& hi,
                 double tolerance) {
  constexpr int kDim = 3;
  std::array<Point, kDim + 1> x;
  std::array<double, kDim + 1> f;
  x[0] = clamp_box(start, lo, hi);
  f[0] = obj(x[0]);
  for (int d = 0; d < kDim; ++d) {
    Point p = x[0];
    const double step = 0.05 * (hi[d] - lo[d]);
    p[d] += (p[d] + step <= hi[d]) ? step : -step;
    x[d + 1] = clamp_box(p, lo, hi);
    f[d + 1] = obj(x[d + 1]);
  }

  const auto order = [&] {
    for (int i = 0; i <= kDim; ++i)
      for (int j = i + 1; j <= kDim; ++j)
        if (f[j] < f[i]) {
          std::swap(f[i], f[j]);
          std::swap(x[i], x[j]);
        }
  };

  while (!obj.exhausted()) {
    order();
    if (std::isfinite(f[0]) && std::isfinite(f[kDim]) &&
        f[kDim] - f[0] <= tolerance * (1.0 + std::abs(f[0])))
      return true;

    Point centroid{};
    for (int i = 0; i < kDim; ++i)
      for (int d = 0; d < kDim; ++d) centroid[d] += x[i][d] / kDim;

    const auto affine = [&](double coef) {
      Point p;
      for (int d = 0; d < kDim; ++d)
        p[d] = centroid[d] + coef * (x[kDim][d] - centroid[d]);
      return clamp_box(p, lo, hi);
    };

    const Point xr = affine(-1.0);
    const double fr = obj(xr);
    if (fr < f[0]) {
      const Point xe = affine(-2.0);
      const double fe = obj(xe);
      if (fe < fr) {
        x[kDim] = xe;
        f[kDim] = fe;
      } else {
        x[kDim] = xr;
        f[kDim] = fr;
      }
    } else if (fr < f[kDim - 1]) {
      x[kDim] = xr;
      f[kDim] = fr;
    } else {
      const Point xc = affine(fr < f[kDim] ? -0.5 : 0.5);
      const double fc = obj(xc);
      if (fc < std::min(fr, f[kDim])) {
        x[kDim] = xc;
        f[kDim] = fc;
      } else {
        for (int i = 1; i <= kDim; ++i) {
          for (int d = 0; d < kDim; ++d) x[i][d] = 0.5 * (x[i][d] + x[0][d]);
          f[i] = obj(x[i]);
        }
      }
    }
  }
  return false;
}

}  // namespace

FitResult fit_mle(const EventSequence& events, const FitConfig& config) {
  if (events.size() < 10)
    throw std::invalid_argument("mle: fewer than 10 events, parameters unidentifiable");
  if (config.budget < 1) throw std::invalid_argument("mle: budget must be >= 1");
  if (config.restarts < 1) throw std::invalid_argument("mle: restarts must be >= 1");
  if (!(config.lower[0] > 0.0) || !(config.lower[2] > 0.0) || !(config.lower[1] >= 0.0))
    throw std::invalid_argument("mle: lower bounds must be positive (alpha may be 0)");
  for (int d = 0; d < 3; ++d)
    if (!(config.upper[d] > config.lower[d]))
      throw std::invalid_argument("mle: upper bounds must exceed lower bounds");

  const Point lo{std::log(config.lower[0]), std::log(std::max(config.lower[1], kAlphaFloor)),
                 std::log(config.lower[2])};
  const Point hi{std::log(config.upper[0]), std::log(config.upper[1]),
                 std::log(config.upper[2])};

  Objective obj{events, config.budget};
  const long polish = std::min<long>(2000, std::max<long>(config.budget / 5, 1));
  const long per_restart = std::max<long>((config.budget - polish) / config.restarts, 1);

  for (int r = 0; r < config.restarts && !obj.exhausted(); ++r)
    particle_swarm(obj, lo, hi, per_restart, derive_seed(config.seed, r));

  bool converged = false;
  if (obj.best < kInf)
    converged = nelder_mead(obj, obj.best_x, lo, hi, config.tolerance);

  if (!(obj.best < kInf))
    throw std::runtime_error("mle: no feasible parameters found inside the bounds");

  FitResult result;
  result.lambda = std::exp(obj.best_x[0]);
  result.alpha = std::exp(obj.best_x[1]);
  if (result.alpha <= 2.0 * kAlphaFloor) result.alpha = 0.0;
  result.beta = std::exp(obj.best_x[2]);
  result.loglik = -obj.best;
  result.mu_hat = result.alpha / result.beta;
  result.supercritical = result.mu_hat >= 1.0;
  result.expected_unit_arrivals =
      result.supercritical ? std::numeric_limits<double>::quiet_NaN()
                           : result.lambda / (1.0 - result.mu_hat);
  result.converged = converged;
  result.evaluations = obj.count;
  return result;
}

}  // namespace hawkes
