#include "hawkes/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkes {

ExcitationKernel null_kernel() { return NullKernel{}; }

ExcitationKernel exponential_kernel(double alpha, double beta) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("kernel: exponential alpha must be >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("kernel: exponential beta must be > 0");
  return ExponentialKernel{alpha, beta};
}

ExcitationKernel power_law_kernel(double k, double c, double p) {
  if (!(k >= 0.0) || !std::isfinite(k))
    throw std::invalid_argument("kernel: power-law k must be >= 0");
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("kernel: power-law c must be > 0");
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("kernel: power-law p must be > 1 for a finite mass");
  return PowerLawKernel{k, c, p};
}

double kernel_value(const ExcitationKernel& kernel, double t) {
  return std::visit(
      [t](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, NullKernel>) {
          return 0.0;
        } else if constexpr (std::is_same_v<K, ExponentialKernel>) {
          return k.alpha * std::exp(-k.beta * t);
        } else {
          return k.k * std::pow(k.c + t, -k.p);
        }
      },
      kernel);
}

double branching_ratio(const ExcitationKernel& kernel) {
  return std::visit(
      [](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, NullKernel>) {
          return 0.0;
        } else if constexpr (std::is_same_v<K, ExponentialKernel>) {
          return k.alpha / k.beta;
        } else {
          return k.k * std::pow(k.c, 1.0 - k.p) / (k.p - 1.0);
        }
      },
      kernel);
}

bool finite_first_moment(const ExcitationKernel& kernel) {
  if (const auto* pl = std::get_if<PowerLawKernel>(&kernel)) return pl->p > 2.0;
  return true;
}

}  // namespace hawkes
