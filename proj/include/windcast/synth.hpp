#ifndef WINDCAST_SYNTH_HPP
#define WINDCAST_SYNTH_HPP

#include <cstdint>
#include <string>

#include "windcast/series.hpp"

namespace windcast {

/**
 * Seeded bivariate order-1 linear process shaped like a wind recording:
 *
 *   [speed, power]_{t+1} = c + A [speed, power]_t + noise
 *
 * with stable A (spectral radius < 1), stationary mean near 8 m/s and
 * 300 kW, and 10-minute cadence. The exact linear law makes the series a
 * useful oracle for lag-regression recovery tests.
 */
struct SynthConfig {
  std::size_t length = 5000;
  std::uint64_t seed = 7;
  std::int64_t start_epoch = 1546300800;  // 2019-01-01T00:00:00Z
  std::int64_t cadence_seconds = 600;
  bool include_direction = false;
  double noise_speed = 0.4;
  double noise_power = 12.0;
};

BivariateSeries generate_synthetic(const SynthConfig& cfg);

/// Writes the series as CSV (timestamp,wind_speed,wind_power[,wind_direction])
/// with round-trip-exact numeric formatting.
void write_series_csv(const BivariateSeries& series, const std::string& path);

}  // namespace windcast

#endif  // WINDCAST_SYNTH_HPP
