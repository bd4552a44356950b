#include "hawkes/markov.hpp"

#include <Eigen/LU>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "hawkes/rng.hpp"

namespace hawkes {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kEntrySlack = 1e-12;

// Reachability over the positive-entry digraph from a start node, following
// rows (forward) or columns (backward).
std::vector<bool> reachable(const Eigen::MatrixXd& P, int start, bool forward) {
  const int n = static_cast<int>(P.rows());
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  seen[start] = true;
  frontier.push(start);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v = 0; v < n; ++v) {
      const double w = forward ? P(u, v) : P(v, u);
      if (w > 0.0 && !seen[v]) {
        seen[v] = true;
        frontier.push(v);
      }
    }
  }
  return seen;
}

// Period of a strongly connected chain: gcd of level[u] + 1 - level[v] over
// positive edges (u, v), levels from a BFS tree.
int chain_period(const Eigen::MatrixXd& P) {
  const int n = static_cast<int>(P.rows());
  std::vector<int> level(n, -1);
  std::queue<int> frontier;
  level[0] = 0;
  frontier.push(0);
  int g = 0;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v = 0; v < n; ++v) {
      if (!(P(u, v) > 0.0)) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      } else {
        g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  return g == 0 ? 1 : g;
}

}  // namespace

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  const int n = static_cast<int>(rows_.rows());
  if (n < 1 || rows_.cols() != n)
    throw std::invalid_argument("markov: transition matrix must be square and non-empty");
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p = rows_(i, j);
      if (!(p >= -kEntrySlack) || !(p <= 1.0 + kEntrySlack) || !std::isfinite(p))
        throw std::invalid_argument("markov: transition probabilities must lie in [0, 1]");
      rows_(i, j) = std::min(1.0, std::max(0.0, p));
      sum += rows_(i, j);
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      throw std::invalid_argument("markov: row " + std::to_string(i) +
                                  " sums to " + std::to_string(sum) + ", expected 1");
  }
  const auto fwd = reachable(rows_, 0, true);
  const auto bwd = reachable(rows_, 0, false);
  for (int i = 0; i < n; ++i) {
    if (!fwd[i] || !bwd[i])
      throw std::invalid_argument("markov: chain is reducible (state " + std::to_string(i) +
                                  " not in the communicating class of state 0)");
  }
  // Periodic chains are allowed to exist (deterministic alternation is a
  // legitimate observed path); ergodicity is enforced where a unique
  // stationary regime is actually needed.
}

TransitionMatrix estimate_transitions(const std::vector<int>& state_sequence, int n) {
  if (n < 1) throw std::invalid_argument("markov: state count must be positive");
  if (state_sequence.size() < 2)
    throw std::invalid_argument("markov: need at least 2 observations to estimate transitions");
  for (int s : state_sequence) {
    if (s < 0 || s >= n)
      throw std::invalid_argument("markov: state " + std::to_string(s) +
                                  " outside 0.." + std::to_string(n - 1));
  }
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k + 1 < state_sequence.size(); ++k)
    counts(state_sequence[k], state_sequence[k + 1]) += 1.0;
  Eigen::MatrixXd P(n, n);
  for (int i = 0; i < n; ++i) {
    const double total = counts.row(i).sum();
    if (total == 0.0)
      throw std::invalid_argument("markov: state " + std::to_string(i) +
                                  " has no outgoing observations; merge states or reduce n");
    P.row(i) = counts.row(i) / total;
  }
  return TransitionMatrix(std::move(P));
}

StationaryDistribution stationary_distribution(const TransitionMatrix& P) {
  const int n = P.states();
  if (chain_period(P.matrix()) != 1)
    throw std::invalid_argument("markov: chain is periodic, not ergodic");
  // (P^T - I) pi = 0 with the last equation replaced by sum pi = 1.
  Eigen::MatrixXd system = P.matrix().transpose() - Eigen::MatrixXd::Identity(n, n);
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd pi = system.partialPivLu().solve(rhs);

  for (int i = 0; i < n; ++i) {
    if (pi(i) < -1e-10)
      throw std::runtime_error("markov: stationary solve produced a negative probability");
    pi(i) = std::max(pi(i), 0.0);
  }
  pi /= pi.sum();
  const double residual = (pi.transpose() * P.matrix() - pi.transpose()).cwiseAbs().maxCoeff();
  if (residual > 1e-10)
    throw std::runtime_error("markov: stationary distribution residual " +
                             std::to_string(residual) + " exceeds 1e-10");
  return StationaryDistribution{std::move(pi)};
}

Eigen::VectorXd fundamental_solve(const TransitionMatrix& P, const StationaryDistribution& pi,
                                  const Eigen::VectorXd& b) {
  const int n = P.states();
  if (pi.pi.size() != n || b.size() != n)
    throw std::invalid_argument("markov: dimension mismatch in fundamental solve");
  if (!b.allFinite()) throw std::invalid_argument("markov: b must be finite");

  const Eigen::MatrixXd pi_star = Eigen::VectorXd::Ones(n) * pi.pi.transpose();
  const Eigen::MatrixXd system = P.matrix() + pi_star - Eigen::MatrixXd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible())
    throw std::runtime_error(
        "markov: fundamental matrix P + Pi* - I is singular (condition estimate " +
        std::to_string(lu.rcond()) + ")");
  Eigen::VectorXd g = lu.solve(b);
  const double residual = (system * g - b).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * (1.0 + b.norm()))
    throw std::runtime_error("markov: fundamental solve residual " + std::to_string(residual) +
                             " too large (condition estimate " + std::to_string(lu.rcond()) +
                             ")");
  return g;
}

std::vector<int> simulate_chain(const TransitionMatrix& P, const Eigen::VectorXd& pi0,
                                long steps, std::uint64_t seed) {
  const int n = P.states();
  if (steps < 1) throw std::invalid_argument("markov: steps must be >= 1");
  if (pi0.size() != n || pi0.minCoeff() < 0.0 || std::abs(pi0.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("markov: initial distribution must be a probability vector");

  Rng rng(seed);
  std::vector<int> path;
  path.reserve(static_cast<std::size_t>(steps));
  int state = rng.categorical(pi0);
  path.push_back(state);
  for (long k = 1; k < steps; ++k) {
    state = rng.categorical(P.matrix().row(state));
    path.push_back(state);
  }
  return path;
}

}  // namespace hawkes
