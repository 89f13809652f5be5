#include "windcast/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "windcast/rng.hpp"

namespace windcast {

namespace {

// Stable coupling: speed drives power strongly, power barely feeds back.
// Eigenvalues 0.88 and 0.77; stationary mean [8, 300].
constexpr double kA[2][2] = {{0.85, 0.0008}, {3.0, 0.80}};
constexpr double kC[2] = {0.96, 36.0};

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

BivariateSeries generate_synthetic(const SynthConfig& cfg) {
  if (cfg.length < 2) {
    throw std::invalid_argument("generate_synthetic: length must be >= 2");
  }
  if (cfg.cadence_seconds < 1) {
    throw std::invalid_argument("generate_synthetic: cadence must be positive");
  }
  Rng rng(cfg.seed);
  std::vector<std::int64_t> timestamps(cfg.length);
  std::vector<double> speed(cfg.length);
  std::vector<double> power(cfg.length);
  std::vector<double> direction;

  double s = 8.0;
  double p = 300.0;
  for (std::size_t i = 0; i < cfg.length; ++i) {
    timestamps[i] =
        cfg.start_epoch + static_cast<std::int64_t>(i) * cfg.cadence_seconds;
    speed[i] = s;
    power[i] = p;
    const double ns = kC[0] + kA[0][0] * s + kA[0][1] * p +
                      cfg.noise_speed * rng.normal();
    const double np = kC[1] + kA[1][0] * s + kA[1][1] * p +
                      cfg.noise_power * rng.normal();
    s = ns;
    p = np;
  }

  if (cfg.include_direction) {
    direction.resize(cfg.length);
    double d = 180.0;
    for (std::size_t i = 0; i < cfg.length; ++i) {
      direction[i] = d;
      d = std::fmod(d + rng.uniform(-15.0, 15.0) + 360.0, 360.0);
    }
  }

  return BivariateSeries(std::move(timestamps), std::move(speed),
                         std::move(power), std::move(direction));
}

void write_series_csv(const BivariateSeries& series, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: stable newlines
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  const bool dir = series.has_direction();
  out << "timestamp,wind_speed,wind_power";
  if (dir) {
    out << ",wind_direction";
  }
  out << "\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_timestamp(series.timestamps()[i]) << ','
        << format_value(series.speed()[i]) << ','
        << format_value(series.power()[i]);
    if (dir) {
      out << ',' << format_value(series.direction()[i]);
    }
    out << "\n";
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace windcast
