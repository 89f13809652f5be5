#ifndef WINDCAST_SERIES_HPP
#define WINDCAST_SERIES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "windcast/tensor.hpp"

namespace windcast {

/// Column names expected in input CSV files. Remappable via config.
struct ColumnSchema {
  std::string timestamp = "timestamp";
  std::string speed = "wind_speed";
  std::string power = "wind_power";
  std::string direction = "wind_direction";
};

/**
 * Timestamped two-channel (speed, power) series with an optional
 * direction channel.
 *
 * Construction enforces the structural invariants: at least two rows,
 * strictly increasing timestamps, and equal channel lengths. Value-range
 * issues (negative speeds, directions outside [0, 360)) are reported by
 * validate_series() instead of rejected, so that dirty recordings can
 * still be inspected.
 */
class BivariateSeries {
 public:
  BivariateSeries(std::vector<std::int64_t> timestamps,
                  std::vector<double> speed, std::vector<double> power,
                  std::vector<double> direction = {});

  std::size_t size() const { return timestamps_.size(); }
  bool has_direction() const { return !direction_.empty(); }

  const std::vector<std::int64_t>& timestamps() const { return timestamps_; }
  const std::vector<double>& speed() const { return speed_; }
  const std::vector<double>& power() const { return power_; }
  const std::vector<double>& direction() const { return direction_; }

  /**
   * Feature matrix for rows [begin, end): columns are speed, power and,
   * when requested and present, direction.
   */
  Tensor features(std::size_t begin, std::size_t end,
                  bool include_direction = false) const;
  Tensor features(bool include_direction = false) const {
    return features(0, size(), include_direction);
  }

 private:
  std::vector<std::int64_t> timestamps_;
  std::vector<double> speed_;
  std::vector<double> power_;
  std::vector<double> direction_;
};

struct RejectedRow {
  std::size_t row = 0;  // 1-based line number in the file, header = line 1
  std::string reason;
};

struct LoadResult {
  BivariateSeries series;
  std::vector<RejectedRow> rejected;
};

/**
 * Loads a CSV file into a BivariateSeries.
 *
 * The header row is required. Rows whose mapped fields fail to parse are
 * skipped and reported in LoadResult::rejected with their line numbers.
 * Missing file, missing mapped column, non-monotonic timestamps and an
 * empty (or single-row) result are errors.
 */
LoadResult load_csv(const std::string& path, const ColumnSchema& schema = {});

/// Parses one timestamp cell: integer epoch seconds or ISO-8601
/// ("YYYY-MM-DD HH:MM[:SS]", 'T' or space separator, optional 'Z').
std::int64_t parse_timestamp(const std::string& text);

/// Formats epoch seconds as "YYYY-MM-DDTHH:MM:SS" (UTC).
std::string format_timestamp(std::int64_t epoch_seconds);

struct CadenceGap {
  std::size_t index = 0;  // row immediately after the irregular interval
  std::int64_t delta_seconds = 0;
};

struct RangeViolation {
  std::size_t row = 0;
  std::string channel;
  double value = 0.0;
};

struct ValidationReport {
  std::int64_t modal_delta_seconds = 0;
  std::vector<CadenceGap> gaps;
  std::vector<RangeViolation> range_violations;
  bool clean() const { return gaps.empty() && range_violations.empty(); }
};

/// Report-only check: cadence gaps against the modal inter-timestamp
/// delta, negative speeds, and directions outside [0, 360).
ValidationReport validate_series(const BivariateSeries& series);

/// Chronological split fractions; must sum to 1 within 1e-12.
struct SplitSpec {
  double train = 0.70;
  double val = 0.15;
  double test = 0.15;
  void validate() const;
};

struct SegmentRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

struct Split {
  SegmentRange train;
  SegmentRange val;
  SegmentRange test;
};

/**
 * Contiguous chronological train/val/test split. Boundaries fall at
 * floor(L * fraction) for train and val; the remainder goes to test.
 * Throws if any segment would be empty.
 */
Split chronological_split(const BivariateSeries& series, const SplitSpec& spec);
Split chronological_split(std::size_t length, const SplitSpec& spec);

}  // namespace windcast

#endif  // WINDCAST_SERIES_HPP
