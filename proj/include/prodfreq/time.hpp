#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace prodfreq {

// Timestamps are UTC instants with millisecond resolution. Offsets in the
// input are normalized away at parse time.
using Duration = std::chrono::milliseconds;
using Instant = std::chrono::time_point<std::chrono::system_clock, Duration>;

// Accepts YYYY-MM-DD[T ]HH:MM[:SS[.fraction]][Z|+HH:MM|-HH:MM].
// A missing offset is read as UTC. Returns nullopt on malformed input.
std::optional<Instant> parse_iso8601(std::string_view text);

// Canonical form: YYYY-MM-DDTHH:MM:SS.sssZ
std::string format_iso8601(Instant t);

double hours_between(Instant a, Instant b);

constexpr Duration minutes(std::int64_t m) { return Duration{m * 60'000}; }
constexpr Duration seconds(std::int64_t s) { return Duration{s * 1'000}; }
constexpr Duration hours(std::int64_t h) { return minutes(h * 60); }

}  // namespace prodfreq
