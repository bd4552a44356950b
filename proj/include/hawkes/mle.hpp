#pragma once

#include <array>
#include <cstdint>

#include "hawkes/process.hpp"

namespace hawkes {

/// Search box and budget for the global likelihood fit. Bounds are on
/// (lambda, alpha, beta); the optimizer works in log coordinates.
struct FitConfig {
  std::array<double, 3> lower{1e-6, 0.0, 1e-6};
  std::array<double, 3> upper{1e3, 1e6, 1e6};
  long budget = 20'000;
  int restarts = 4;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
};

struct FitResult {
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double loglik = 0.0;
  double mu_hat = 0.0;
  double expected_unit_arrivals = 0.0;  // NaN when supercritical
  bool converged = false;
  bool supercritical = false;
  long evaluations = 0;
};

/// Exponential-kernel Hawkes log-likelihood over the window
/// [window_start, horizon]:
///   sum_i log(lambda + alpha A_i) - Lambda(horizon)
/// with the O(n) recursion A_i = exp(-beta (t_i - t_{i-1})) (1 + A_{i-1}).
/// Translation-covariant: shifting events, horizon, and window_start by the
/// same amount leaves the value unchanged.
double log_likelihood(double lambda, double alpha, double beta,
                      const EventSequence& events, double window_start = 0.0);

/// Multi-start particle-swarm maximization of the log-likelihood over the
/// box, followed by a Nelder-Mead polish. Deterministic per config.seed.
/// Fewer than 10 events is an error (unidentifiable).
FitResult fit_mle(const EventSequence& events, const FitConfig& config = {});

/// lambda / (1 - alpha/beta); requires alpha/beta < 1.
double expected_unit_arrivals(double lambda, double alpha, double beta);

/// Observed count divided by horizon.
double empirical_unit_arrivals(const EventSequence& events);

}  // namespace hawkes
