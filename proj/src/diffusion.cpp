#include "hawkes/diffusion.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkes {

LimitParams compute_limit_params(const TransitionMatrix& P, const MarkTable& marks) {
  const int n = P.states();
  if (marks.size() != n)
    throw std::invalid_argument("diffusion: mark table size must match the state count");
  if (!marks.allFinite()) throw std::invalid_argument("diffusion: marks must be finite");

  LimitParams out;
  const StationaryDistribution pi = stationary_distribution(P);
  out.pi = pi.pi;
  out.a_star = pi.pi.dot(marks);
  out.b = marks.array() - out.a_star;
  out.g = fundamental_solve(P, pi, out.b);

  out.v = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double sq = 0.0;   // sum_j (g(j) - g(i))^2 P(i,j)
    double lin = 0.0;  // sum_j (g(j) - g(i)) P(i,j)
    for (int j = 0; j < n; ++j) {
      const double d = out.g(j) - out.g(i);
      sq += d * d * P(i, j);
      lin += d * P(i, j);
    }
    out.v(i) = out.b(i) * out.b(i) + sq - 2.0 * out.b(i) * lin;
  }

  double var = pi.pi.dot(out.v);
  if (var < 0.0) {
    if (var < -1e-12)
      throw std::runtime_error("diffusion: negative variance from limit formula");
    var = 0.0;
  }
  out.sigma_star = std::sqrt(var);
  return out;
}

LimitParams two_state_closed_form(double p_dd, double p_uu, double a1, double a2) {
  if (!(p_dd > 0.0 && p_dd < 1.0 && p_uu > 0.0 && p_uu < 1.0))
    throw std::invalid_argument("diffusion: transition probabilities must lie strictly in (0, 1)");
  Eigen::MatrixXd P(2, 2);
  P << p_dd, 1.0 - p_dd, 1.0 - p_uu, p_uu;
  Eigen::VectorXd marks(2);
  marks << a1, a2;
  return compute_limit_params(TransitionMatrix(std::move(P)), marks);
}

LimitParams chpdo_closed_form(double p_dd, double p_uu, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("diffusion: delta must be positive");
  return two_state_closed_form(p_dd, p_uu, -delta, delta);
}

double diffusion_coefficient(double sigma_star, double lambda, double mu_hat) {
  if (!(sigma_star >= 0.0)) throw std::invalid_argument("diffusion: sigma* must be >= 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("diffusion: lambda must be positive");
  if (!(mu_hat >= 0.0 && mu_hat < 1.0))
    throw std::invalid_argument("diffusion: supercritical (mu_hat >= 1), no diffusion limit");
  return sigma_star * std::sqrt(lambda / (1.0 - mu_hat));
}

double nonlinear_diffusion_coefficient(double sigma_star, double expected_unit_arrivals) {
  if (!(sigma_star >= 0.0)) throw std::invalid_argument("diffusion: sigma* must be >= 0");
  if (!(expected_unit_arrivals >= 0.0))
    throw std::invalid_argument("diffusion: expected unit arrivals must be >= 0");
  return sigma_star * std::sqrt(expected_unit_arrivals);
}

double lln_drift(double a_star, double lambda, double mu_hat) {
  if (!(lambda > 0.0)) throw std::invalid_argument("diffusion: lambda must be positive");
  if (!(mu_hat >= 0.0 && mu_hat < 1.0))
    throw std::invalid_argument("diffusion: supercritical (mu_hat >= 1), no LLN limit");
  return a_star * lambda / (1.0 - mu_hat);
}

}  // namespace hawkes
