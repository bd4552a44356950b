#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace hawkes {

/// Row-stochastic matrix of an irreducible, aperiodic chain on states
/// 0..n-1. Construction validates entries, row sums, and ergodicity.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(Eigen::MatrixXd rows);

  int states() const { return static_cast<int>(rows_.rows()); }
  const Eigen::MatrixXd& matrix() const { return rows_; }
  double operator()(int i, int j) const { return rows_(i, j); }

 private:
  Eigen::MatrixXd rows_;
};

/// Unique invariant distribution of an ergodic chain: pi P = pi, sum pi = 1.
struct StationaryDistribution {
  Eigen::VectorXd pi;
};

/// Signed price-change value attached to each state.
using MarkTable = Eigen::VectorXd;

/// Empirical transition matrix from an observed state path (0-based states).
/// A state in 0..n-1 with no outgoing observation is an error naming it.
TransitionMatrix estimate_transitions(const std::vector<int>& state_sequence, int n);

/// Direct solve of pi (P - I) = 0 with the normalization row replacing one
/// equation; validated to ||pi P - pi||_inf <= 1e-10.
StationaryDistribution stationary_distribution(const TransitionMatrix& P);

/// g = (P + Pi* - I)^-1 b where Pi* stacks pi in every row. The residual is
/// checked against 1e-10 * (1 + ||b||).
Eigen::VectorXd fundamental_solve(const TransitionMatrix& P,
                                  const StationaryDistribution& pi,
                                  const Eigen::VectorXd& b);

/// Chain path of `steps` states, the first drawn from pi0. Deterministic per
/// seed.
std::vector<int> simulate_chain(const TransitionMatrix& P, const Eigen::VectorXd& pi0,
                                long steps, std::uint64_t seed);

}  // namespace hawkes
