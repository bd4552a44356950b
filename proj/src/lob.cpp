#include "hawkes/lob.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace hawkes::lob {

namespace {

constexpr double kHalfTick = 0.005;
constexpr double kPriceUnit = 1e-4;  // LOBSTER integer price unit in dollars

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(std::string_view s, const std::string& file, long line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("lob: " + file + ": malformed number '" + std::string(s) +
                             "' on line " + std::to_string(line_no));
  return value;
}

// Type-7 (linear interpolation on order statistics) empirical quantile of a
// sorted sample.
double quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

struct SideBins {
  std::vector<double> bounds;  // single value means one point state
  std::vector<double> means;
};

// One side of the change distribution cut at interior quantiles, with the
// side extremes closing the partition and empty bins merged away.
SideBins side_quantile_bins(std::vector<double> values, int levels) {
  std::sort(values.begin(), values.end());
  std::vector<double> bounds{values.front(), values.back()};
  for (int j = 1; j < levels; ++j)
    bounds.push_back(quantile(values, static_cast<double>(j) / levels));
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  SideBins bins;
  if (bounds.size() == 1) {
    bins.bounds = bounds;
    bins.means = {bounds.front()};
    return bins;
  }

  while (true) {
    const std::size_t m = bounds.size() - 1;  // interval count
    std::vector<double> sums(m, 0.0);
    std::vector<long> counts(m, 0);
    for (double x : values) {
      std::size_t i;
      if (x >= bounds[m - 1]) {
        i = m - 1;  // top bin is closed at both ends
      } else {
        i = static_cast<std::size_t>(
                std::upper_bound(bounds.begin(), bounds.end(), x) - bounds.begin()) -
            1;
      }
      sums[i] += x;
      counts[i] += 1;
    }
    std::size_t empty = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (counts[i] == 0) {
        empty = i;
        break;
      }
    }
    if (empty == m) {
      bins.bounds = bounds;
      bins.means.resize(m);
      for (std::size_t i = 0; i < m; ++i)
        bins.means[i] = sums[i] / static_cast<double>(counts[i]);
      return bins;
    }
    // An interpolated boundary landed in a gap of the data; drop the empty
    // bin's left edge, merging it into its neighbour.
    bounds.erase(bounds.begin() + static_cast<long>(empty));
  }
}

int side_state_of(const std::vector<double>& bounds, double x) {
  if (bounds.size() <= 1) return 0;
  const std::size_t m = bounds.size() - 1;
  if (x >= bounds[m - 1]) return static_cast<int>(m) - 1;
  if (x < bounds.front()) return 0;
  return static_cast<int>(
             std::upper_bound(bounds.begin(), bounds.end(), x) - bounds.begin()) -
         1;
}

}  // namespace

int StateModel::state_of(double change) const {
  if (change == 0.0) throw std::invalid_argument("lob: zero change has no state");
  if (kind == Kind::sign) return change < 0.0 ? 0 : 1;
  if (change < 0.0) return side_state_of(down_bounds, change);
  const int down_states =
      down_bounds.size() <= 1 ? 1 : static_cast<int>(down_bounds.size()) - 1;
  return down_states + side_state_of(up_bounds, change);
}

std::vector<double> StateModel::boundary_list() const {
  if (kind == Kind::sign) return {0.0};
  std::vector<double> all = down_bounds;
  all.insert(all.end(), up_bounds.begin(), up_bounds.end());
  return all;
}

LobSeries parse_lob(const std::string& message_path, const std::string& orderbook_path) {
  std::ifstream messages(message_path);
  if (!messages) throw std::runtime_error("lob: cannot open " + message_path);
  std::ifstream books(orderbook_path);
  if (!books) throw std::runtime_error("lob: cannot open " + orderbook_path);

  LobSeries series;
  std::string msg_line, book_line;
  long line_no = 0;
  double prev_time = -1.0;
  while (std::getline(messages, msg_line)) {
    ++line_no;
    if (!std::getline(books, book_line))
      throw std::runtime_error("lob: " + orderbook_path + " has fewer rows than " +
                               message_path);
    const auto msg = split_fields(msg_line);
    if (msg.size() != 6)
      throw std::runtime_error("lob: " + message_path + ": expected 6 fields on line " +
                               std::to_string(line_no));
    const auto book = split_fields(book_line);
    if (book.size() != 4)
      throw std::runtime_error("lob: " + orderbook_path + ": expected 4 fields on line " +
                               std::to_string(line_no));

    const double time = parse_double(msg[0], message_path, line_no);
    const double ask = parse_double(book[0], orderbook_path, line_no) * kPriceUnit;
    const double bid = parse_double(book[2], orderbook_path, line_no) * kPriceUnit;
    if (!(bid > 0.0) || !(ask > 0.0))
      throw std::runtime_error("lob: " + orderbook_path + ": non-positive price on line " +
                               std::to_string(line_no));
    if (time < prev_time)
      throw std::runtime_error("lob: " + message_path + ": times decrease on line " +
                               std::to_string(line_no));
    prev_time = time;
    if (bid > ask) {
      ++series.crossed_rejected;
      continue;
    }
    series.rows.push_back(LobRow{time, bid, ask});
  }
  if (std::getline(books, book_line))
    throw std::runtime_error("lob: " + message_path + " has fewer rows than " + orderbook_path);
  if (series.rows.empty())
    throw std::runtime_error("lob: " + message_path + ": no usable rows");
  return series;
}

PriceChangeSeries mid_price_events(const LobSeries& series, double trim) {
  if (series.rows.empty()) throw std::invalid_argument("lob: empty series");
  if (!(trim >= 0.0)) throw std::invalid_argument("lob: trim must be >= 0");
  const double open = series.rows.front().time;
  const double close = series.rows.back().time;
  const double lo = open + trim;
  const double hi = close - trim;
  if (!(lo < hi))
    throw std::invalid_argument("lob: session window empty after trimming " +
                                std::to_string(trim) + " s per side");

  PriceChangeSeries out;
  out.window_start = lo;
  out.window_end = hi;
  bool have_prev = false;
  double prev_mid = 0.0;
  const auto& rows = series.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    // Equal timestamps describe one atomic burst; only the last state counts.
    if (i + 1 < rows.size() && rows[i + 1].time == rows[i].time) continue;
    if (rows[i].time < lo || rows[i].time > hi) continue;
    const double mid = 0.5 * (rows[i].bid + rows[i].ask);
    if (!have_prev) {
      out.s0 = mid;
      prev_mid = mid;
      have_prev = true;
      continue;
    }
    if (std::abs(mid - prev_mid) > 1e-12) {
      out.events.push_back(PriceChange{rows[i].time, mid - prev_mid});
      prev_mid = mid;
    }
  }
  if (!have_prev)
    throw std::invalid_argument("lob: no book rows inside the trimmed window");
  return out;
}

std::pair<StateModel, std::vector<int>> build_fixed_tick(const PriceChangeSeries& changes,
                                                         double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("lob: delta must be positive");
  StateModel model;
  model.kind = StateModel::Kind::sign;
  model.marks.resize(2);
  model.marks << -delta, delta;
  std::vector<int> states;
  states.reserve(changes.events.size());
  for (const auto& e : changes.events) states.push_back(e.change < 0.0 ? 0 : 1);
  return {std::move(model), std::move(states)};
}

std::pair<StateModel, std::vector<int>> build_two_state_mean(const PriceChangeSeries& changes) {
  double down_sum = 0.0, up_sum = 0.0;
  long down_n = 0, up_n = 0;
  for (const auto& e : changes.events) {
    if (e.change < 0.0) {
      down_sum += e.change;
      ++down_n;
    } else {
      up_sum += e.change;
      ++up_n;
    }
  }
  if (down_n == 0 || up_n == 0)
    throw std::invalid_argument("lob: one-sided data, need both upward and downward moves");

  StateModel model;
  model.kind = StateModel::Kind::sign;
  model.marks.resize(2);
  model.marks << down_sum / static_cast<double>(down_n), up_sum / static_cast<double>(up_n);
  std::vector<int> states;
  states.reserve(changes.events.size());
  for (const auto& e : changes.events) states.push_back(e.change < 0.0 ? 0 : 1);
  return {std::move(model), std::move(states)};
}

std::pair<StateModel, std::vector<int>> build_quantile_states(const PriceChangeSeries& changes,
                                                              int q, bool per_side) {
  if (q < 2) throw std::invalid_argument("lob: need at least 2 quantiles");
  std::vector<double> downs, ups;
  for (const auto& e : changes.events)
    (e.change < 0.0 ? downs : ups).push_back(e.change);
  if (downs.empty() || ups.empty())
    throw std::invalid_argument("lob: one-sided data, need both upward and downward moves");

  const int down_levels = per_side ? q : std::max(1, q / 2);
  const int up_levels = per_side ? q : std::max(1, q - q / 2);
  const SideBins down = side_quantile_bins(std::move(downs), down_levels);
  const SideBins up = side_quantile_bins(std::move(ups), up_levels);

  StateModel model;
  model.kind = StateModel::Kind::quantile;
  model.down_bounds = down.bounds;
  model.up_bounds = up.bounds;
  model.marks.resize(static_cast<long>(down.means.size() + up.means.size()));
  for (std::size_t i = 0; i < down.means.size(); ++i) model.marks(static_cast<long>(i)) = down.means[i];
  for (std::size_t i = 0; i < up.means.size(); ++i)
    model.marks(static_cast<long>(down.means.size() + i)) = up.means[i];

  std::vector<int> states;
  states.reserve(changes.events.size());
  for (const auto& e : changes.events) states.push_back(model.state_of(e.change));
  return {std::move(model), std::move(states)};
}

LiquiditySummary liquidity_summary(const LobSeries& series, const PriceChangeSeries& changes) {
  if (series.rows.size() < 2)
    throw std::invalid_argument("lob: liquidity summary needs at least 2 rows");
  const double span = series.rows.back().time - series.rows.front().time;
  if (!(span > 0.0)) throw std::invalid_argument("lob: zero session span");
  return LiquiditySummary{static_cast<double>(series.rows.size()) / span,
                          static_cast<long>(changes.events.size())};
}

TickHistogram tick_histogram(const PriceChangeSeries& changes) {
  TickHistogram hist;
  hist.fraction_above_half_tick = 0.0;
  long above = 0;
  for (const auto& e : changes.events) {
    const long m = std::max<long>(1, std::lround(std::abs(e.change) / kHalfTick));
    if (static_cast<std::size_t>(m) > hist.counts.size()) hist.counts.resize(m, 0);
    hist.counts[m - 1] += 1;
    if (m >= 2) ++above;
  }
  if (!changes.events.empty())
    hist.fraction_above_half_tick =
        static_cast<double>(above) / static_cast<double>(changes.events.size());
  return hist;
}

}  // namespace hawkes::lob
