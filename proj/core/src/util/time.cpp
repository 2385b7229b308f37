#include "noteffect/util/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "noteffect/util/error.hpp"

namespace noteffect {

namespace {

int parse_digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) throw DataError("truncated timestamp: " + std::string(text));
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + count, value);
  if (ec != std::errc() || ptr != text.data() + pos + count)
    throw DataError("malformed timestamp: " + std::string(text));
  return value;
}

void expect(std::string_view text, std::size_t pos, std::string_view allowed) {
  if (pos >= text.size() || allowed.find(text[pos]) == std::string_view::npos)
    throw DataError("malformed timestamp: " + std::string(text));
}

}  // namespace

Millis parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  // YYYY-MM-DDTHH:MM:SS
  expect(text, 4, "-");
  expect(text, 7, "-");
  expect(text, 10, "T ");
  expect(text, 13, ":");
  expect(text, 16, ":");
  const int y = parse_digits(text, 0, 4);
  const int mo = parse_digits(text, 5, 2);
  const int d = parse_digits(text, 8, 2);
  const int h = parse_digits(text, 11, 2);
  const int mi = parse_digits(text, 14, 2);
  const int s = parse_digits(text, 17, 2);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60)
    throw DataError("invalid calendar value in timestamp: " + std::string(text));

  std::size_t pos = 19;
  Millis frac = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    Millis scale = 100;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 3) frac += (text[pos] - '0') * scale;
      scale /= 10;
      ++digits;
      ++pos;
    }
    if (digits == 0) throw DataError("malformed timestamp fraction: " + std::string(text));
  }
  Millis offset = 0;
  if (pos < text.size()) {
    if (text[pos] == 'Z' && pos + 1 == text.size()) {
      ++pos;
    } else if ((text[pos] == '+' || text[pos] == '-') && pos + 6 == text.size()) {
      const int sign = text[pos] == '+' ? 1 : -1;
      expect(text, pos + 3, ":");
      const int oh = parse_digits(text, pos + 1, 2);
      const int om = parse_digits(text, pos + 4, 2);
      offset = sign * (oh * kHour + om * kMinute);
      pos = text.size();
    } else {
      throw DataError("malformed timestamp zone: " + std::string(text));
    }
  }
  const Millis days = sys_days{ymd}.time_since_epoch().count();
  return days * 24 * kHour + h * kHour + mi * kMinute + s * kSecond + frac - offset;
}

std::string format_iso8601(Millis t) {
  using namespace std::chrono;
  const Millis day_ms = 24 * kHour;
  const Millis days = floor_div(t, day_ms);
  Millis rem = t - days * day_ms;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  const int h = static_cast<int>(rem / kHour);
  rem %= kHour;
  const int mi = static_cast<int>(rem / kMinute);
  rem %= kMinute;
  const int s = static_cast<int>(rem / kSecond);
  const int ms = static_cast<int>(rem % kSecond);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h, mi, s, ms);
  return buf;
}

}  // namespace noteffect
