#include "hawkes/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "hawkes/process.hpp"
#include "hawkes/rng.hpp"

namespace hawkes::lob {

namespace {

struct Row {
  double time;
  long long bid_u;  // 1e-4 dollar units
  long long ask_u;
  bool is_change;
};

void emit(std::ofstream& messages, std::ofstream& books, const Row& row, Rng& rng,
          long long& order_id) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", row.time);
  const int type = 1 + static_cast<int>(rng.uniform01() * 5.0);
  const int direction = rng.uniform01() < 0.5 ? -1 : 1;
  const long long size = 1 + static_cast<long long>(rng.uniform01() * 500.0);
  const long long price = direction > 0 ? row.bid_u : row.ask_u;
  messages << buf << ',' << type << ',' << ++order_id << ',' << size << ',' << price << ','
           << direction << '\n';
  const long long ask_size = 50 + static_cast<long long>(rng.uniform01() * 2000.0);
  const long long bid_size = 50 + static_cast<long long>(rng.uniform01() * 2000.0);
  books << row.ask_u << ',' << ask_size << ',' << row.bid_u << ',' << bid_size << '\n';
}

}  // namespace

void write_synthetic_day(const std::string& message_path, const std::string& orderbook_path,
                         const FixtureConfig& config, std::uint64_t seed) {
  if (config.magnitude_weights.empty())
    throw std::invalid_argument("fixture: need at least one magnitude weight");
  if (!(config.rows_per_second > 0.0) || !(config.session_seconds > 0.0))
    throw std::invalid_argument("fixture: rates and session length must be positive");

  const HawkesSpec spec{config.lambda, exponential_kernel(config.alpha, config.beta),
                        Identity{}};
  const EventSequence arrivals = simulate(spec, config.session_seconds, derive_seed(seed, 1));

  Rng rng(derive_seed(seed, 2));

  // Sign chain started from its stationary law.
  const double pi_down =
      (1.0 - config.p_uu) / ((1.0 - config.p_uu) + (1.0 - config.p_dd));
  int sign_state = rng.uniform01() < pi_down ? 0 : 1;

  long long bid_u = std::llround((config.start_price - 0.5 * config.spread) * 1e4);
  long long ask_u = bid_u + std::llround(config.spread * 1e4);

  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(config.rows_per_second * config.session_seconds) +
               arrivals.size() + 16);

  long change_index = 0;
  for (double t : arrivals.times()) {
    const int m = 1 + rng.categorical(config.magnitude_weights);
    const double stay = sign_state == 0 ? config.p_dd : config.p_uu;
    if (rng.uniform01() >= stay) sign_state = 1 - sign_state;
    const long long shift = (sign_state == 0 ? -1 : 1) * 50LL * m;  // m half-ticks

    if (bid_u + shift <= 0) continue;  // keep prices positive on pathological walks
    ++change_index;
    if (config.duplicate_every > 0 && change_index % config.duplicate_every == 0) {
      // Same-timestamp burst: a transient half-updated book first, then the
      // settled one; parsers must keep only the last state.
      rows.push_back(Row{t, bid_u, ask_u + shift, false});
    }
    bid_u += shift;
    ask_u += shift;
    rows.push_back(Row{t, bid_u, ask_u, true});
  }

  // Quote churn that leaves the mid untouched, padding the row count to the
  // configured order rate.
  const auto total_target = static_cast<long>(
      std::llround(config.rows_per_second * config.session_seconds));
  const long noise = std::max<long>(0, total_target - static_cast<long>(rows.size()));
  std::vector<double> noise_times(noise);
  for (long i = 0; i < noise; ++i)
    noise_times[i] = config.session_seconds * rng.uniform01();
  std::sort(noise_times.begin(), noise_times.end());
  for (double t : noise_times) rows.push_back(Row{t, 0, 0, false});

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.time < b.time; });

  // Noise rows echo whatever book is current at their slot.
  long long cur_bid = std::llround((config.start_price - 0.5 * config.spread) * 1e4);
  long long cur_ask = cur_bid + std::llround(config.spread * 1e4);
  for (auto& row : rows) {
    if (row.bid_u == 0) {
      row.bid_u = cur_bid;
      row.ask_u = cur_ask;
    } else if (row.is_change) {
      cur_bid = row.bid_u;
      cur_ask = row.ask_u;
    }
  }

  std::ofstream messages(message_path);
  if (!messages) throw std::runtime_error("fixture: cannot open " + message_path);
  std::ofstream books(orderbook_path);
  if (!books) throw std::runtime_error("fixture: cannot open " + orderbook_path);
  long long order_id = 0;
  for (const auto& row : rows) {
    Row shifted = row;
    shifted.time += config.session_open;
    emit(messages, books, shifted, rng, order_id);
  }
}

}  // namespace hawkes::lob
