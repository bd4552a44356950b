#pragma once

#include <variant>

namespace hawkes {

/// mu(t) identically zero: the process is homogeneous Poisson.
struct NullKernel {};

/// mu(t) = alpha * exp(-beta t), alpha >= 0, beta > 0.
struct ExponentialKernel {
  double alpha;
  double beta;
};

/// mu(t) = k / (c + t)^p, k >= 0, c > 0, p > 1 so the kernel mass is finite.
struct PowerLawKernel {
  double k;
  double c;
  double p;
};

using ExcitationKernel = std::variant<NullKernel, ExponentialKernel, PowerLawKernel>;

/// Validating factories. Throw std::invalid_argument on bad parameters.
ExcitationKernel null_kernel();
ExcitationKernel exponential_kernel(double alpha, double beta);
ExcitationKernel power_law_kernel(double k, double c, double p);

/// mu(t) for t >= 0.
double kernel_value(const ExcitationKernel& kernel, double t);

/// Branching ratio mu_hat = integral of mu over [0, inf):
/// 0 for Null, alpha/beta for Exponential, k c^(1-p) / (p-1) for PowerLaw.
double branching_ratio(const ExcitationKernel& kernel);

/// Whether the first moment integral of s * mu(s) is finite (PowerLaw needs
/// p > 2). The diffusion limits assume it; simulation does not.
bool finite_first_moment(const ExcitationKernel& kernel);

}  // namespace hawkes
