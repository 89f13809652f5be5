#include "windcast/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace windcast {

BivariateSeries::BivariateSeries(std::vector<std::int64_t> timestamps,
                                 std::vector<double> speed,
                                 std::vector<double> power,
                                 std::vector<double> direction)
    : timestamps_(std::move(timestamps)),
      speed_(std::move(speed)),
      power_(std::move(power)),
      direction_(std::move(direction)) {
  if (timestamps_.size() < 2) {
    throw std::invalid_argument("BivariateSeries: series too short (length " +
                                std::to_string(timestamps_.size()) +
                                ", need >= 2)");
  }
  if (speed_.size() != timestamps_.size() ||
      power_.size() != timestamps_.size() ||
      (!direction_.empty() && direction_.size() != timestamps_.size())) {
    throw std::invalid_argument("BivariateSeries: channel length mismatch");
  }
  for (std::size_t i = 1; i < timestamps_.size(); ++i) {
    if (timestamps_[i] <= timestamps_[i - 1]) {
      throw std::invalid_argument("BivariateSeries: non-monotonic timestamp at index " +
                                  std::to_string(i));
    }
  }
}

Tensor BivariateSeries::features(std::size_t begin, std::size_t end,
                                 bool include_direction) const {
  if (begin >= end || end > size()) {
    throw std::out_of_range("BivariateSeries::features: bad range");
  }
  const bool with_dir = include_direction && has_direction();
  if (include_direction && !has_direction()) {
    throw std::invalid_argument(
        "BivariateSeries::features: direction channel requested but absent");
  }
  const std::size_t cols = with_dir ? 3 : 2;
  Tensor out({end - begin, cols});
  for (std::size_t i = begin; i < end; ++i) {
    out(i - begin, 0) = speed_[i];
    out(i - begin, 1) = power_[i];
    if (with_dir) {
      out(i - begin, 2) = direction_[i];
    }
  }
  return out;
}

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  return *end == '\0' && std::isfinite(out);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

}  // namespace

std::int64_t parse_timestamp(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) {
    throw std::invalid_argument("empty timestamp");
  }
  // Integer epoch seconds.
  {
    const char* begin = s.c_str();
    char* end = nullptr;
    long long v = std::strtoll(begin, &end, 10);
    if (end != begin && *end == '\0') {
      return static_cast<std::int64_t>(v);
    }
  }
  // ISO-8601 date or date-time, 'T' or space separated, optional :SS and Z.
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  char sep = 0;
  int n = std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h,
                      &mi, &sec);
  if (n >= 6 && (sep == 'T' || sep == ' ' || sep == 't')) {
    // Trailing 'Z' (or nothing) is accepted; anything else is rejected.
    std::size_t tail = s.find_last_of("0123456789");
    std::string rest = s.substr(tail + 1);
    if (!(rest.empty() || rest == "Z" || rest == "z")) {
      throw std::invalid_argument("cannot parse timestamp '" + s + "'");
    }
  } else if (n == 3) {
    h = mi = sec = 0;
  } else {
    throw std::invalid_argument("cannot parse timestamp '" + s + "'");
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 ||
      mi > 59 || sec < 0 || sec > 60) {
    throw std::invalid_argument("timestamp fields out of range in '" + s + "'");
  }
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + sec;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d", y, m, d,
                static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                static_cast<int>(rem % 60));
  return buf;
}

LoadResult load_csv(const std::string& path, const ColumnSchema& schema) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("empty file: " + path);
  }
  const std::vector<std::string> names = split_csv_line(header);
  auto find_column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto ts_col = find_column(schema.timestamp);
  const auto speed_col = find_column(schema.speed);
  const auto power_col = find_column(schema.power);
  const auto dir_col = find_column(schema.direction);
  if (!ts_col) throw std::runtime_error("missing column '" + schema.timestamp + "' in " + path);
  if (!speed_col) throw std::runtime_error("missing column '" + schema.speed + "' in " + path);
  if (!power_col) throw std::runtime_error("missing column '" + schema.power + "' in " + path);

  std::vector<std::int64_t> timestamps;
  std::vector<double> speed, power, direction;
  std::vector<RejectedRow> rejected;

  std::string line;
  std::size_t line_no = 1;  // header already consumed
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    const std::size_t needed =
        std::max({*ts_col, *speed_col, *power_col, dir_col ? *dir_col : 0});
    if (fields.size() <= needed) {
      rejected.push_back({line_no, "too few fields"});
      continue;
    }
    std::int64_t ts;
    double sp, pw, dir = 0.0;
    try {
      ts = parse_timestamp(fields[*ts_col]);
    } catch (const std::exception& e) {
      rejected.push_back({line_no, e.what()});
      continue;
    }
    if (!parse_double(fields[*speed_col], sp)) {
      rejected.push_back({line_no, "cannot parse " + schema.speed + " '" +
                                       fields[*speed_col] + "'"});
      continue;
    }
    if (!parse_double(fields[*power_col], pw)) {
      rejected.push_back({line_no, "cannot parse " + schema.power + " '" +
                                       fields[*power_col] + "'"});
      continue;
    }
    if (dir_col && !parse_double(fields[*dir_col], dir)) {
      rejected.push_back({line_no, "cannot parse " + schema.direction + " '" +
                                       fields[*dir_col] + "'"});
      continue;
    }
    if (!timestamps.empty() && ts <= timestamps.back()) {
      throw std::runtime_error("non-monotonic timestamp at row " +
                               std::to_string(line_no) + " in " + path);
    }
    timestamps.push_back(ts);
    speed.push_back(sp);
    power.push_back(pw);
    if (dir_col) direction.push_back(dir);
  }
  if (timestamps.empty()) {
    throw std::runtime_error("no data rows in " + path);
  }
  if (timestamps.size() < 2) {
    throw std::runtime_error("series too short in " + path +
                             " (need at least 2 valid rows)");
  }
  return LoadResult{
      BivariateSeries(std::move(timestamps), std::move(speed), std::move(power),
                      std::move(direction)),
      std::move(rejected)};
}

ValidationReport validate_series(const BivariateSeries& series) {
  ValidationReport report;
  const auto& ts = series.timestamps();

  std::map<std::int64_t, std::size_t> delta_counts;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    ++delta_counts[ts[i] - ts[i - 1]];
  }
  // Modal delta; ties resolved toward the smaller interval.
  std::size_t best = 0;
  for (const auto& [delta, count] : delta_counts) {
    if (count > best) {
      best = count;
      report.modal_delta_seconds = delta;
    }
  }
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const std::int64_t delta = ts[i] - ts[i - 1];
    if (delta != report.modal_delta_seconds) {
      report.gaps.push_back({i, delta});
    }
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.speed()[i] < 0.0) {
      report.range_violations.push_back({i, "speed", series.speed()[i]});
    }
  }
  if (series.has_direction()) {
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double d = series.direction()[i];
      if (d < 0.0 || d >= 360.0) {
        report.range_violations.push_back({i, "direction", d});
      }
    }
  }
  return report;
}

void SplitSpec::validate() const {
  for (double f : {train, val, test}) {
    if (!(f > 0.0 && f < 1.0)) {
      throw std::invalid_argument("SplitSpec: fractions must lie in (0, 1)");
    }
  }
  if (std::fabs(train + val + test - 1.0) > 1e-12) {
    throw std::invalid_argument("SplitSpec: fractions must sum to 1");
  }
}

Split chronological_split(std::size_t length, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n_train =
      static_cast<std::size_t>(std::floor(static_cast<double>(length) * spec.train));
  const std::size_t n_val =
      static_cast<std::size_t>(std::floor(static_cast<double>(length) * spec.val));
  if (n_train == 0 || n_val == 0 || n_train + n_val >= length) {
    throw std::invalid_argument("chronological_split: series too short for spec");
  }
  Split split;
  split.train = {0, n_train};
  split.val = {n_train, n_train + n_val};
  split.test = {n_train + n_val, length};
  return split;
}

Split chronological_split(const BivariateSeries& series, const SplitSpec& spec) {
  return chronological_split(series.size(), spec);
}

}  // namespace windcast
