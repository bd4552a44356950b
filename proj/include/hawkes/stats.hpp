#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hawkes {

/// Sample mean.
double mean(std::span<const double> xs);

/// Sample standard deviation with the (n-1) denominator. Requires n >= 2.
double sample_std(std::span<const double> xs);

/// Standard normal CDF.
double normal_cdf(double x);

/// Kolmogorov-Smirnov statistic of xs against the standard normal law.
double ks_statistic_normal(std::vector<double> xs);

/// Kolmogorov-Smirnov statistic of xs against Exp(rate).
double ks_statistic_exponential(std::vector<double> xs, double rate);

/// Critical KS value at significance alpha (asymptotic, Stephens' small-sample
/// correction). Valid for the usual alpha in {0.10, 0.05, 0.01, ...}.
double ks_critical(double alpha, std::size_t n);

}  // namespace hawkes
