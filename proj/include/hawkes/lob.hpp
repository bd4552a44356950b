#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace hawkes::lob {

struct LobRow {
  double time;  // seconds since midnight
  double bid;   // dollars
  double ask;   // dollars
};

/// Level-1 book states, one per input row, times non-decreasing.
struct LobSeries {
  std::vector<LobRow> rows;
  long crossed_rejected = 0;  // rows dropped because bid > ask
};

struct PriceChange {
  double time;
  double change;  // signed mid-price move, never zero
};

/// Mid-price change events inside the trimmed session window.
struct PriceChangeSeries {
  std::vector<PriceChange> events;
  double s0 = 0.0;           // mid-price at the window start
  double window_start = 0.0;
  double window_end = 0.0;
};

/// State partition of the observed changes. Sign-based models split at zero;
/// quantile models carry per-side bin boundaries.
struct StateModel {
  enum class Kind { sign, quantile };
  Kind kind = Kind::sign;
  Eigen::VectorXd marks;              // per-state value, strictly ascending
  std::vector<double> down_bounds;    // quantile bins for changes < 0
  std::vector<double> up_bounds;      // quantile bins for changes > 0

  int states() const { return static_cast<int>(marks.size()); }
  int state_of(double change) const;
  /// Concatenated boundary list (down side then up side) for serialization.
  std::vector<double> boundary_list() const;
};

/// Parses a LOBSTER-style level-1 file pair: message rows
/// `time,type,orderid,size,price,direction` and book rows
/// `askprice,asksize,bidprice,bidsize`, prices in 1e-4 dollar units,
/// no headers, matching row counts. Malformed rows raise errors naming the
/// line; crossed books are dropped with a count.
LobSeries parse_lob(const std::string& message_path, const std::string& orderbook_path);

/// Mid-price change series over [open + trim, close - trim]. Duplicate
/// timestamps keep the last book state; consecutive equal mids collapse.
PriceChangeSeries mid_price_events(const LobSeries& series, double trim = 900.0);

/// Two states at -delta / +delta assigned by sign.
std::pair<StateModel, std::vector<int>> build_fixed_tick(const PriceChangeSeries& changes,
                                                         double delta = 0.005);

/// Two states valued at the mean downward / mean upward change.
std::pair<StateModel, std::vector<int>> build_two_state_mean(const PriceChangeSeries& changes);

/// Quantile-based n-state construction: each side is cut at interpolated
/// order-statistic quantiles (levels j/q), duplicates rejected, side extremes
/// closing the partition; state values are the bin means, ascending. With
/// per_side = false the q levels are split between the two sides.
std::pair<StateModel, std::vector<int>> build_quantile_states(const PriceChangeSeries& changes,
                                                              int q, bool per_side = true);

struct LiquiditySummary {
  double orders_per_second;
  long daily_price_changes;
};

LiquiditySummary liquidity_summary(const LobSeries& series, const PriceChangeSeries& changes);

struct TickHistogram {
  std::vector<long> counts;  // counts[m-1] = changes of |size| ~ m half-ticks
  double fraction_above_half_tick;
};

/// |change| binned to the nearest multiple of the half tick (0.005 $).
TickHistogram tick_histogram(const PriceChangeSeries& changes);

}  // namespace hawkes::lob
