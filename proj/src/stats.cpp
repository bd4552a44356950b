#include "hawkes/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("stats: mean of empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("stats: std needs at least 2 values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

double ks_against_cdf(std::vector<double>& xs, double (*cdf)(double, double), double param) {
  if (xs.empty()) throw std::invalid_argument("stats: KS of empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i], param);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

}  // namespace

double ks_statistic_normal(std::vector<double> xs) {
  return ks_against_cdf(
      xs, [](double x, double) { return normal_cdf(x); }, 0.0);
}

double ks_statistic_exponential(std::vector<double> xs, double rate) {
  if (rate <= 0) throw std::invalid_argument("stats: exponential rate must be positive");
  return ks_against_cdf(
      xs, [](double x, double r) { return x <= 0 ? 0.0 : 1.0 - std::exp(-r * x); }, rate);
}

double ks_critical(double alpha, std::size_t n) {
  if (n == 0 || alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("stats: bad KS critical arguments");
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double rn = std::sqrt(static_cast<double>(n));
  return c / (rn + 0.12 + 0.11 / rn);
}

}  // namespace hawkes
