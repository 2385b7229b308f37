#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace noteffect {

// Absolute UTC timestamps and durations, both in milliseconds.
using Millis = std::int64_t;

inline constexpr Millis kSecond = 1000;
inline constexpr Millis kMinute = 60 * kSecond;
inline constexpr Millis kHour = 60 * kMinute;
inline constexpr Millis kGridStep = 15 * kMinute;

// Accepts YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]. A space may replace 'T'.
// Throws DataError on malformed input.
Millis parse_iso8601(std::string_view text);

// Always emits YYYY-MM-DDTHH:MM:SS.fffZ.
std::string format_iso8601(Millis t);

// Grid index at or before `age` (floor division, also for negative ages).
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return -floor_div(-a, b);
}

}  // namespace noteffect
