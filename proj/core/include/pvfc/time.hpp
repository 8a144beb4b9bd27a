#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace pvfc {

/// All timestamps are UTC, second resolution.
using utc_time = std::chrono::sys_seconds;
using std::chrono::seconds;

inline constexpr seconds kStep15{900};
inline constexpr seconds kStepHour{3600};
inline constexpr seconds kStepDay{86400};

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (the trailing Z optional, 'T' or ' '
/// separator) or a bare "YYYY-MM-DD" meaning midnight UTC.
utc_time parse_iso8601(const std::string& text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(utc_time t);

inline bool aligned_to(utc_time t, seconds step) {
  return t.time_since_epoch().count() % step.count() == 0;
}

/// Start of the UTC day containing t.
inline utc_time floor_day(utc_time t) {
  auto s = t.time_since_epoch().count();
  return utc_time{seconds{s - (s % kStepDay.count() + kStepDay.count()) % kStepDay.count()}};
}

/// A contiguous range of n timestamps starting at `start` with a fixed step.
struct TimeGrid {
  utc_time start{};
  std::size_t size = 0;
  seconds step = kStep15;

  utc_time at(std::size_t i) const { return start + step * static_cast<std::int64_t>(i); }
  utc_time end() const { return at(size); }  // one past the last timestamp

  /// Index of t on the grid, or npos when t is off-grid or out of range.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index_of(utc_time t) const {
    const auto d = (t - start).count();
    if (d < 0 || d % step.count() != 0) return npos;
    const auto i = static_cast<std::size_t>(d / step.count());
    return i < size ? i : npos;
  }

  bool operator==(const TimeGrid&) const = default;
};

/// 15-minute grid spanning [begin, end) inclusive of begin; both aligned.
TimeGrid grid15_between(utc_time begin, utc_time end);

}  // namespace pvfc
