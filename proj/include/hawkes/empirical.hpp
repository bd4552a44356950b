#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hawkes/diffusion.hpp"
#include "hawkes/lob.hpp"
#include "hawkes/markov.hpp"
#include "hawkes/process.hpp"

namespace hawkes {

enum class CurveKind { empirical, theoretical, sqrt_transformed };

struct StdCurvePoint {
  double window;  // seconds
  double std;     // dollars
};

struct StdCurve {
  std::vector<StdCurvePoint> points;
  CurveKind kind = CurveKind::empirical;
};

struct WindowResiduals {
  double window;
  std::vector<double> values;
};

/// Per-window displacement minus a* times the window's event count, over
/// disjoint complete windows [i n, (i+1) n) anchored at the first event.
/// `marks` gives the displacement contributed by each event (raw changes for
/// the empirical curve, model marks for simulated paths). Fewer than two
/// complete windows is an error.
WindowResiduals window_residuals(const lob::PriceChangeSeries& changes,
                                 const std::vector<double>& marks, double a_star,
                                 double window);

/// Window grid 10 s .. 1200 s in steps of 10 s.
std::vector<double> default_window_grid();

/// Sample standard deviation ((count-1) denominator) of the window residuals
/// at each grid size.
StdCurve empirical_std_curve(const lob::PriceChangeSeries& changes,
                             const std::vector<double>& marks, double a_star,
                             const std::vector<double>& windows = default_window_grid());

/// std(n) = coefficient * sqrt(n).
StdCurve theoretical_std_curve(double coefficient, const std::vector<double>& windows);

/// Pointwise square root (the variance-stabilizing transform).
StdCurve sqrt_transform(const StdCurve& curve);

/// Mean of squared pointwise differences; the grids must match.
double mean_squared_residual(const StdCurve& empirical, const StdCurve& theoretical);

struct BestFit {
  double coefficient;
  double percent_error;
};

/// Least squares through the origin of std against sqrt(n) on untransformed
/// curves: c* = sum std_i sqrt(n_i) / sum n_i.
BestFit best_fit_coefficient(const StdCurve& empirical, double theoretical_coefficient);

struct QqPoint {
  double empirical;  // sorted inter-arrival
  double fitted;     // exponential quantile at the matching level
};

/// QQ data of the inter-arrival times against the fitted exponential law
/// (rate = 1/mean). Requires at least 10 events.
std::vector<QqPoint> qq_poisson_data(const EventSequence& events);

struct ClusterPoint {
  double time;
  long count;
};

/// Number of events in [t, t + window) sampled on a 1 s grid.
std::vector<ClusterPoint> clustering_counts(const EventSequence& events, double window = 60.0);

/// Arrival law plus mark chain: the compound mid-price model.
struct CompoundModel {
  HawkesSpec spec;
  TransitionMatrix chain;
  MarkTable marks;
};

struct UnitArrivalEstimate {
  double value;
  double std_error;
};

/// E[N[0,1]] under the stationary regime, estimated by one long simulated
/// path with the first 10% of the horizon discarded; the standard error comes
/// from batch means.
UnitArrivalEstimate estimate_unit_arrivals_stationary(const HawkesSpec& spec, double horizon,
                                                      std::uint64_t seed);

struct FcltReport {
  double sample_std;
  double predicted_std;
  double z;
  double ks_stat;
  double ks_critical_1pct;
  int paths;
  std::uint64_t seed;
};

struct LlnReport {
  double sample_mean;
  double predicted_drift;
  double z;
  int paths;
  std::uint64_t seed;
};

struct VerifyOptions {
  double n = 1e4;       // diffusion scale
  double t = 1.0;       // rescaled time
  int paths = 1000;
  std::uint64_t seed = 1;
  int jobs = 1;
  double stationary_horizon = 1e5;  // for non-Identity links
  double a_star_override = std::numeric_limits<double>::quiet_NaN();
};

/// Monte Carlo check of the diffusion limit: the sample standard deviation of
/// (S_{nt} - N(nt) a*) / sqrt(n) over independent paths against
/// sigma* sqrt(E[N[0,1]] t).
FcltReport verify_fclt(const CompoundModel& model, const VerifyOptions& opts);

/// Monte Carlo check of the LLN: the ensemble mean of S_{nt}/n against
/// a* E[N[0,1]] t.
LlnReport verify_lln(const CompoundModel& model, const VerifyOptions& opts);

}  // namespace hawkes
