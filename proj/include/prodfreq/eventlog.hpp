#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prodfreq/signal.hpp"
#include "prodfreq/time.hpp"

namespace prodfreq {

// ---- event records ---------------------------------------------------------

enum class LifecycleKind { Start, Complete, Other };

struct Lifecycle {
  LifecycleKind kind = LifecycleKind::Other;
  std::string raw;
};

struct EventRecord {
  std::string case_id;
  std::string activity;
  Instant timestamp{};
  std::string resource;
  Lifecycle lifecycle;
};

struct EventLog {
  // Input order preserved; per-case indices sorted by (timestamp, input order).
  std::vector<EventRecord> records;
  std::map<std::string, std::vector<std::size_t>> cases;
  std::set<std::string> activities;
};

struct RowRejection {
  std::size_t line_number = 0;
  std::string reason;
};

struct ParseResult {
  EventLog log;
  std::vector<RowRejection> rejected;
};

enum class LogFormat { Csv };

// CSV schema: header "case_id,activity,timestamp,resource,lifecycle".
// Malformed rows are rejected with a diagnostic, not fatal. A log with zero
// accepted rows raises EmptyLog.
ParseResult parse_log(std::istream& in, LogFormat format = LogFormat::Csv);
ParseResult parse_log_file(const std::string& path,
                           LogFormat format = LogFormat::Csv);

// Canonical CSV, suitable for byte-stable round trips.
std::string serialize_log(const EventLog& log);

bool operator==(const EventRecord& a, const EventRecord& b);

// ---- sampling period -------------------------------------------------------

struct SamplingPeriod {
  double raw_seconds = 0.0;   // labour_hours / (2 * cases), exact
  Duration value{0};          // rounded value actually used
  std::string rounding;       // "floor_minute", "floor_second" or "none"
};

// Labour time is the sum over cases of (last - first) timestamps. Throws
// DegenerateLog when that total is zero.
SamplingPeriod compute_sampling_period(const EventLog& log);

double total_labour_hours(const EventLog& log);

// ---- main paths ------------------------------------------------------------

struct MainPath {
  std::string name;  // "<initial>_<final>"
  std::string initial_activity;
  std::string final_activity;
  std::vector<std::string> activity_sequence;
  std::set<std::string> case_ids;
};

struct PathExtraction {
  std::vector<MainPath> paths;          // one per final actually reached
  std::size_t unmatched_cases = 0;      // excluded and counted
};

// A case belongs to a path when it contains `initial` and later the path's
// final activity; a case reaching several finals goes to the one occurring
// last. Throws UnknownActivity when `initial` or every final is absent from
// the log's activity set.
PathExtraction extract_main_paths(const EventLog& log,
                                  const std::string& initial,
                                  const std::set<std::string>& finals);

// ---- discrete sampling -----------------------------------------------------

enum class Channel { Output, Labour, Capital };

// Selector semantics:
//  * activity only: that activity across the whole log;
//  * path only: whole cases of the path (cumulative aliveness for Output);
//  * both: the activity restricted to the path's cases.
// `exclude_activities` removes activities from consideration (path span and
// labour both shrink); used for the filtered comparison variant.
struct SignalSelector {
  std::optional<std::string> activity;
  const MainPath* path = nullptr;
  std::set<std::string> exclude_activities;
};

struct SamplingConfig {
  Duration sample_period{0};
  std::optional<Instant> origin;            // default: first event in scope
  std::size_t max_bins = 10'000'000;
  // Capital proxy override: value per bin, replacing the default
  // distinct-active-resources count.
  std::optional<std::vector<double>> capital_override;
};

// Output: completion counts per bin (activity) or alive-case counts (path).
// Labour: resource-busy hours per bin from start/complete pairs, falling
// back to inter-event gaps attributed to the later event.
// Capital: distinct resources active in the bin unless overridden.
ProductionSignal sample_production(const EventLog& log,
                                   const SignalSelector& selector,
                                   const SamplingConfig& config,
                                   Channel channel);

}  // namespace prodfreq
