#pragma once

#include <Eigen/Dense>

#include "hawkes/markov.hpp"

namespace hawkes {

/// Drift and volatility ingredients of the mark chain: mean mark a*, centered
/// marks b, fundamental solution g, per-state variance contributions v, and
/// sigma* = sqrt(sum pi_i v_i).
struct LimitParams {
  double a_star = 0.0;
  double sigma_star = 0.0;
  Eigen::VectorXd b;
  Eigen::VectorXd g;
  Eigen::VectorXd v;
  Eigen::VectorXd pi;
};

/// General n-state formula:
///   a*   = sum_i pi_i a(i)
///   b(i) = a(i) - a*
///   g    = (P + Pi* - I)^-1 b
///   v(i) = b(i)^2 + sum_j (g(j)-g(i))^2 P(i,j) - 2 b(i) sum_j (g(j)-g(i)) P(i,j)
LimitParams compute_limit_params(const TransitionMatrix& P, const MarkTable& marks);

/// Two-state chain P = [[p_dd, 1-p_dd], [1-p_uu, p_uu]] with marks (a1, a2).
/// Delegates to the general formula; p in {0,1} is rejected.
LimitParams two_state_closed_form(double p_dd, double p_uu, double a1, double a2);

/// Fixed-tick special case with marks (-delta, +delta).
LimitParams chpdo_closed_form(double p_dd, double p_uu, double delta);

/// sigma* sqrt(lambda / (1 - mu_hat)); the constant scaling W(t) in the
/// diffusion limit. Requires mu_hat < 1.
double diffusion_coefficient(double sigma_star, double lambda, double mu_hat);

/// sigma* sqrt(E[N[0,1]]) for non-linear arrival laws, with the expected
/// number of unit-interval arrivals supplied empirically or by simulation.
double nonlinear_diffusion_coefficient(double sigma_star, double expected_unit_arrivals);

/// a* lambda / (1 - mu_hat): the linear growth rate of the price path.
double lln_drift(double a_star, double lambda, double mu_hat);

}  // namespace hawkes
