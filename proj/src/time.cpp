#include "prodfreq/time.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace prodfreq {
namespace {

// Civil-from-days and days-from-civil per the proleptic Gregorian calendar.
constexpr std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr void civil_from_days(std::int64_t z, int& y, unsigned& m,
                               unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

std::optional<Instant> parse_iso8601(std::string_view text) {
  // Strip surrounding whitespace.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.size() < 16) return std::nullopt;

  if (text[4] != '-' || text[7] != '-') return std::nullopt;
  if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
  if (!all_digits(text.substr(0, 4)) || !all_digits(text.substr(5, 2)) ||
      !all_digits(text.substr(8, 2)) || !all_digits(text.substr(11, 2)) ||
      text[13] != ':' || !all_digits(text.substr(14, 2)))
    return std::nullopt;

  const int year = to_int(text.substr(0, 4));
  const int month = to_int(text.substr(5, 2));
  const int day = to_int(text.substr(8, 2));
  const int hour = to_int(text.substr(11, 2));
  const int minute = to_int(text.substr(14, 2));
  int second = 0;
  std::int64_t millis = 0;
  std::size_t pos = 16;

  if (pos < text.size() && text[pos] == ':') {
    if (pos + 3 > text.size() || !all_digits(text.substr(pos + 1, 2)))
      return std::nullopt;
    second = to_int(text.substr(pos + 1, 2));
    pos += 3;
    if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
      ++pos;
      std::size_t start = pos;
      while (pos < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[pos])))
        ++pos;
      if (pos == start) return std::nullopt;
      std::string_view frac = text.substr(start, pos - start);
      // Truncate to milliseconds.
      for (std::size_t i = 0; i < 3; ++i)
        millis = millis * 10 + (i < frac.size() ? frac[i] - '0' : 0);
    }
  }

  std::int64_t offset_minutes = 0;
  if (pos < text.size()) {
    const char c = text[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      const int sign = c == '+' ? 1 : -1;
      ++pos;
      if (pos + 2 > text.size() || !all_digits(text.substr(pos, 2)))
        return std::nullopt;
      int oh = to_int(text.substr(pos, 2));
      pos += 2;
      int om = 0;
      if (pos < text.size() && text[pos] == ':') ++pos;
      if (pos + 2 <= text.size() && all_digits(text.substr(pos, 2))) {
        om = to_int(text.substr(pos, 2));
        pos += 2;
      }
      offset_minutes = sign * (oh * 60 + om);
    } else {
      return std::nullopt;
    }
  }
  if (pos != text.size()) return std::nullopt;

  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
      minute > 59 || second > 60)
    return std::nullopt;

  const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                            static_cast<unsigned>(day));
  std::int64_t total_ms = days * 86'400'000LL +
                          (hour * 3600LL + minute * 60LL + second) * 1000LL +
                          millis;
  total_ms -= offset_minutes * 60'000LL;
  return Instant{Duration{total_ms}};
}

std::string format_iso8601(Instant t) {
  std::int64_t ms = t.time_since_epoch().count();
  std::int64_t days = ms / 86'400'000LL;
  std::int64_t rem = ms % 86'400'000LL;
  if (rem < 0) {
    rem += 86'400'000LL;
    --days;
  }
  int year;
  unsigned month, day;
  civil_from_days(days, year, month, day);
  const int hour = static_cast<int>(rem / 3'600'000LL);
  rem %= 3'600'000LL;
  const int minute = static_cast<int>(rem / 60'000LL);
  rem %= 60'000LL;
  const int second = static_cast<int>(rem / 1000LL);
  const int milli = static_cast<int>(rem % 1000LL);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", year,
                month, day, hour, minute, second, milli);
  return buf;
}

double hours_between(Instant a, Instant b) {
  return static_cast<double>((b - a).count()) / 3'600'000.0;
}

}  // namespace prodfreq
