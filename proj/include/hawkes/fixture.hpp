#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hawkes::lob {

/// Knobs for a synthetic LOBSTER-format day. The defaults are scaled to the
/// liquid-ticker regime: ~51 book rows per second and ~64k mid-price changes
/// over a 23400 s session, with a heavy-ish tail of change magnitudes.
struct FixtureConfig {
  double session_open = 34200.0;   // 9:30 in seconds since midnight
  double session_seconds = 23400.0;
  double start_price = 585.0;      // dollars
  double spread = 0.04;            // dollars, kept constant

  // Arrival law for mid-price changes (exponential kernel).
  double lambda = 1.6259;
  double alpha = 1045.2676;
  double beta = 2556.1844;

  // Sign chain and magnitude mixture: magnitude m half-ticks with weight
  // magnitude_weights[m-1].
  double p_dd = 0.4956;
  double p_uu = 0.4933;
  std::vector<double> magnitude_weights{0.39, 0.26, 0.14, 0.09, 0.06, 0.03, 0.02, 0.01};

  double rows_per_second = 51.0;   // total book rows emitted per session second
  int duplicate_every = 997;       // emit a duplicate-timestamp burst every k-th change
};

/// Writes a message/orderbook CSV pair. Deterministic per seed.
void write_synthetic_day(const std::string& message_path, const std::string& orderbook_path,
                         const FixtureConfig& config, std::uint64_t seed);

}  // namespace hawkes::lob
