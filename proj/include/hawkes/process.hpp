#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "hawkes/kernel.hpp"

namespace hawkes {

/// h(x) = x.
struct Identity {};
/// h(x) = 1 for x > 0, else 0.
struct Indicator {};
/// h(x) = min(max(x, 0), ceiling), ceiling > 0.
struct Capped {
  double ceiling;
};

using NonlinearLink = std::variant<Identity, Indicator, Capped>;

double apply_link(const NonlinearLink& link, double x);

/// Full intensity law: lambda(t) = h(baseline + sum mu(t - t_i)).
struct HawkesSpec {
  double baseline = 1.0;
  ExcitationKernel kernel = NullKernel{};
  NonlinearLink link = Identity{};
};

/// Throws std::invalid_argument if the spec violates its invariants
/// (baseline > 0, kernel parameters valid, Capped ceiling > 0).
void validate_spec(const HawkesSpec& spec);

/// True when the spec admits a stationary regime: any non-Identity link here
/// is bounded, and Identity requires branching ratio < 1.
bool stationary_admissible(const HawkesSpec& spec);

/// Strictly increasing event times on [0, horizon].
class EventSequence {
 public:
  EventSequence() = default;
  EventSequence(std::vector<double> times, double horizon);

  const std::vector<double>& times() const { return times_; }
  double horizon() const { return horizon_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

 private:
  std::vector<double> times_;
  double horizon_ = 0.0;
};

/// Conditional intensity at t given the events strictly before t.
double intensity_at(const HawkesSpec& spec, const EventSequence& events, double t);

/// Compensator Lambda(t) = integral of the intensity over [0, t].
/// Closed form for the Identity link; adaptive Simpson between event times
/// otherwise. Rejects t outside [0, horizon].
double compensator(const HawkesSpec& spec, const EventSequence& events, double t);

/// Ogata thinning with a piecewise-constant dominating rate, refreshed after
/// every accepted event and every rejected candidate. Deterministic per seed.
/// Identity-link specs require branching ratio < 1; paths that exceed
/// max_events abort with a diagnostic.
EventSequence simulate(const HawkesSpec& spec, double horizon, std::uint64_t seed,
                       std::size_t max_events = 10'000'000);

/// Time-rescaling residuals {Lambda(t_i) - Lambda(t_{i-1})} with t_0 = 0.
/// Unit-exponential i.i.d. under the true model.
std::vector<double> rescaled_interarrivals(const HawkesSpec& spec,
                                           const EventSequence& events);

}  // namespace hawkes
