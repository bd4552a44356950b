#include "hawkes/process.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "hawkes/rng.hpp"

namespace hawkes {

double apply_link(const NonlinearLink& link, double x) {
  return std::visit(
      [x](const auto& h) -> double {
        using H = std::decay_t<decltype(h)>;
        if constexpr (std::is_same_v<H, Identity>) {
          return x;
        } else if constexpr (std::is_same_v<H, Indicator>) {
          return x > 0.0 ? 1.0 : 0.0;
        } else {
          return std::min(std::max(x, 0.0), h.ceiling);
        }
      },
      link);
}

void validate_spec(const HawkesSpec& spec) {
  if (!(spec.baseline > 0.0) || !std::isfinite(spec.baseline))
    throw std::invalid_argument("hawkes: baseline rate must be positive");
  // Re-run the kernel factory checks so hand-built specs are covered too.
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ExponentialKernel>) {
          exponential_kernel(k.alpha, k.beta);
        } else if constexpr (std::is_same_v<K, PowerLawKernel>) {
          power_law_kernel(k.k, k.c, k.p);
        }
      },
      spec.kernel);
  if (const auto* capped = std::get_if<Capped>(&spec.link)) {
    if (!(capped->ceiling > 0.0) || !std::isfinite(capped->ceiling))
      throw std::invalid_argument("hawkes: capped link ceiling must be positive");
  }
}

bool stationary_admissible(const HawkesSpec& spec) {
  if (!std::holds_alternative<Identity>(spec.link)) return true;
  if (std::holds_alternative<NullKernel>(spec.kernel)) return true;
  return branching_ratio(spec.kernel) < 1.0;
}

EventSequence::EventSequence(std::vector<double> times, double horizon)
    : times_(std::move(times)), horizon_(horizon) {
  if (!(horizon_ >= 0.0) || !std::isfinite(horizon_))
    throw std::invalid_argument("hawkes: horizon must be finite and non-negative");
  if (times_.empty()) return;
  if (times_.front() < 0.0)
    throw std::invalid_argument("hawkes: event times must be non-negative");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1]))
      throw std::invalid_argument("hawkes: event times must be strictly increasing");
  }
  if (times_.back() > horizon_)
    throw std::invalid_argument("hawkes: event times must not exceed the horizon");
}

namespace {

// Integral of mu over [0, u].
double kernel_mass(const ExcitationKernel& kernel, double u) {
  return std::visit(
      [u](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, NullKernel>) {
          return 0.0;
        } else if constexpr (std::is_same_v<K, ExponentialKernel>) {
          return k.alpha / k.beta * (1.0 - std::exp(-k.beta * u));
        } else {
          return k.k / (k.p - 1.0) *
                 (std::pow(k.c, 1.0 - k.p) - std::pow(k.c + u, 1.0 - k.p));
        }
      },
      kernel);
}

template <typename F>
double simpson_recurse(const F& f, double a, double fa, double b, double fb, double m,
                       double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth >= 40 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
         simpson_recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, fa, b, fb, m, fm, whole, tol, 0);
}

constexpr double kGapTolerance = 1e-10;

// Integral of h(lambda + excitation) over one inter-event gap
// [seg_start, seg_end], where the history is events[0..n_hist).
double integrate_gap(const HawkesSpec& spec, const std::vector<double>& times,
                     std::size_t n_hist, double seg_start, double seg_end) {
  if (!(seg_end > seg_start)) return 0.0;
  if (std::holds_alternative<NullKernel>(spec.kernel))
    return apply_link(spec.link, spec.baseline) * (seg_end - seg_start);
  if (const auto* ek = std::get_if<ExponentialKernel>(&spec.kernel)) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n_hist; ++j)
      sum += std::exp(-ek->beta * (seg_start - times[j]));
    const auto f = [&](double s) {
      return apply_link(spec.link,
                        spec.baseline + ek->alpha * sum * std::exp(-ek->beta * (s - seg_start)));
    };
    return adaptive_simpson(f, seg_start, seg_end, kGapTolerance);
  }
  const auto& pk = std::get<PowerLawKernel>(spec.kernel);
  const auto f = [&](double s) {
    double linear = spec.baseline;
    for (std::size_t j = 0; j < n_hist; ++j)
      linear += pk.k * std::pow(pk.c + s - times[j], -pk.p);
    return apply_link(spec.link, linear);
  };
  return adaptive_simpson(f, seg_start, seg_end, kGapTolerance);
}

}  // namespace

double intensity_at(const HawkesSpec& spec, const EventSequence& events, double t) {
  validate_spec(spec);
  if (!(t >= 0.0)) throw std::invalid_argument("hawkes: intensity time must be >= 0");
  double linear = spec.baseline;
  for (double ti : events.times()) {
    if (!(ti < t)) break;
    linear += kernel_value(spec.kernel, t - ti);
  }
  return apply_link(spec.link, linear);
}

double compensator(const HawkesSpec& spec, const EventSequence& events, double t) {
  validate_spec(spec);
  if (t < 0.0 || t > events.horizon())
    throw std::invalid_argument("hawkes: compensator time outside [0, horizon]");
  if (t == 0.0) return 0.0;

  const auto& times = events.times();
  if (std::holds_alternative<Identity>(spec.link)) {
    double acc = spec.baseline * t;
    for (double ti : times) {
      if (!(ti < t)) break;
      acc += kernel_mass(spec.kernel, t - ti);
    }
    return acc;
  }

  double acc = 0.0;
  double seg_start = 0.0;
  std::size_t i = 0;
  while (i < times.size() && times[i] < t) {
    acc += integrate_gap(spec, times, i, seg_start, times[i]);
    seg_start = times[i];
    ++i;
  }
  acc += integrate_gap(spec, times, i, seg_start, t);
  return acc;
}

EventSequence simulate(const HawkesSpec& spec, double horizon, std::uint64_t seed,
                       std::size_t max_events) {
  validate_spec(spec);
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("hawkes: simulation horizon must be positive");
  if (!stationary_admissible(spec))
    throw std::invalid_argument(
        "hawkes: supercritical spec (branching ratio >= 1 with identity link)");

  Rng rng(seed);
  std::vector<double> times;
  const auto* ek = std::get_if<ExponentialKernel>(&spec.kernel);
  const auto* pk = std::get_if<PowerLawKernel>(&spec.kernel);

  double t_cur = 0.0;
  double decayed_sum = 0.0;  // exp kernel: sum of exp(-beta (t_cur - t_j))
  const auto linear_now = [&](double at) {
    double linear = spec.baseline;
    if (ek) {
      linear += ek->alpha * decayed_sum;
    } else if (pk) {
      for (double tj : times) linear += pk->k * std::pow(pk->c + at - tj, -pk->p);
    }
    return linear;
  };

  while (true) {
    // The linear intensity decays between events, so its value just after
    // t_cur dominates the whole next gap; h monotone carries that through.
    const double bound = apply_link(spec.link, linear_now(t_cur));
    const double wait = rng.exponential(bound);
    if (wait <= 0.0) continue;
    const double t_cand = t_cur + wait;
    if (t_cand > horizon) break;
    if (ek) decayed_sum *= std::exp(-ek->beta * (t_cand - t_cur));
    const double lam = apply_link(spec.link, linear_now(t_cand));
    if (rng.uniform01() * bound <= lam) {
      times.push_back(t_cand);
      if (times.size() > max_events)
        throw std::runtime_error("hawkes: simulate aborted, event count exceeded cap of " +
                                 std::to_string(max_events) +
                                 " (near-critical or exploding intensity)");
      if (ek) decayed_sum += 1.0;
    }
    t_cur = t_cand;
  }
  return EventSequence(std::move(times), horizon);
}

std::vector<double> rescaled_interarrivals(const HawkesSpec& spec,
                                           const EventSequence& events) {
  validate_spec(spec);
  if (events.empty())
    throw std::invalid_argument("hawkes: rescaled interarrivals need a non-empty sequence");

  const auto& times = events.times();
  std::vector<double> out;
  out.reserve(times.size());

  if (std::holds_alternative<Identity>(spec.link)) {
    if (const auto* ek = std::get_if<ExponentialKernel>(&spec.kernel)) {
      double decayed_sum = 0.0;  // sum exp(-beta (t_{i-1} - t_j)), j <= i-1
      double prev = 0.0;
      for (double ti : times) {
        const double gap = ti - prev;
        const double shrink = std::exp(-ek->beta * gap);
        out.push_back(spec.baseline * gap +
                      ek->alpha / ek->beta * decayed_sum * (1.0 - shrink));
        decayed_sum = decayed_sum * shrink + 1.0;
        prev = ti;
      }
      return out;
    }
    double prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      double inc = spec.baseline * (times[i] - prev);
      for (std::size_t j = 0; j < i; ++j)
        inc += kernel_mass(spec.kernel, times[i] - times[j]) -
               kernel_mass(spec.kernel, prev - times[j]);
      out.push_back(inc);
      prev = times[i];
    }
    return out;
  }

  double prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    out.push_back(integrate_gap(spec, times, i, prev, times[i]));
    prev = times[i];
  }
  return out;
}

}  // namespace hawkes
