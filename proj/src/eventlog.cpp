#include "prodfreq/eventlog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "prodfreq/errors.hpp"
#include "prodfreq/log.hpp"

namespace prodfreq {

// ---- csv -------------------------------------------------------------------

namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// RFC-4180-ish field splitting; returns false on unterminated quotes.
bool split_csv_row(const std::string& line, std::vector<std::string>& out) {
  out.clear();
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) return false;
  out.push_back(field);
  return true;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

Lifecycle parse_lifecycle(const std::string& raw) {
  const std::string lower = to_lower(trim(raw));
  if (lower == "start") return {LifecycleKind::Start, raw};
  if (lower == "complete") return {LifecycleKind::Complete, raw};
  return {LifecycleKind::Other, raw};
}

const char* kHeader = "case_id,activity,timestamp,resource,lifecycle";

}  // namespace

bool operator==(const EventRecord& a, const EventRecord& b) {
  return a.case_id == b.case_id && a.activity == b.activity &&
         a.timestamp == b.timestamp && a.resource == b.resource &&
         a.lifecycle.kind == b.lifecycle.kind &&
         a.lifecycle.raw == b.lifecycle.raw;
}

ParseResult parse_log(std::istream& in, LogFormat format) {
  if (format != LogFormat::Csv)
    throw Error(ErrorCode::FormatError, "unsupported log format");

  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<std::string> fields;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line[0] == '\xEF' &&
        line[1] == '\xBB' && line[2] == '\xBF')
      line.erase(0, 3);
    if (trim(line).empty()) continue;

    if (!header_seen) {
      if (to_lower(trim(line)) != kHeader)
        throw Error(ErrorCode::FormatError,
                    std::string("expected header '") + kHeader + "'");
      header_seen = true;
      continue;
    }

    if (!split_csv_row(line, fields)) {
      result.rejected.push_back({line_no, "unterminated quoted field"});
      continue;
    }
    if (fields.size() != 5) {
      result.rejected.push_back({line_no, "expected 5 fields, got " +
                                              std::to_string(fields.size())});
      continue;
    }
    const std::string case_id = trim(fields[0]);
    const std::string activity = trim(fields[1]);
    if (case_id.empty() || activity.empty()) {
      result.rejected.push_back({line_no, "empty case_id or activity"});
      continue;
    }
    const auto ts = parse_iso8601(fields[2]);
    if (!ts) {
      result.rejected.push_back({line_no, "unparseable timestamp '" +
                                              trim(fields[2]) + "'"});
      continue;
    }
    EventRecord rec;
    rec.case_id = case_id;
    rec.activity = activity;
    rec.timestamp = *ts;
    rec.resource = trim(fields[3]);
    rec.lifecycle = parse_lifecycle(fields[4]);
    result.log.records.push_back(std::move(rec));
  }

  if (!header_seen)
    throw Error(ErrorCode::EmptyLog, "input contains no header row");
  if (result.log.records.empty())
    throw Error(ErrorCode::EmptyLog, "log contains no accepted event rows");

  for (std::size_t i = 0; i < result.log.records.size(); ++i) {
    const EventRecord& r = result.log.records[i];
    result.log.cases[r.case_id].push_back(i);
    result.log.activities.insert(r.activity);
  }
  // Chronological per-case order with input order as the stable tie-break.
  for (auto& [id, idx] : result.log.cases) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return result.log.records[a].timestamp < result.log.records[b].timestamp;
    });
  }
  if (!result.rejected.empty())
    log_warn("rejected " + std::to_string(result.rejected.size()) +
             " malformed rows");
  return result;
}

ParseResult parse_log_file(const std::string& path, LogFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open log file: " + path);
  return parse_log(in, format);
}

std::string serialize_log(const EventLog& log) {
  std::string out = kHeader;
  out += '\n';
  for (const EventRecord& r : log.records) {
    out += csv_escape(r.case_id);
    out += ',';
    out += csv_escape(r.activity);
    out += ',';
    out += format_iso8601(r.timestamp);
    out += ',';
    out += csv_escape(r.resource);
    out += ',';
    switch (r.lifecycle.kind) {
      case LifecycleKind::Start: out += "start"; break;
      case LifecycleKind::Complete: out += "complete"; break;
      case LifecycleKind::Other: out += csv_escape(r.lifecycle.raw); break;
    }
    out += '\n';
  }
  return out;
}

// ---- sampling period -------------------------------------------------------

double total_labour_hours(const EventLog& log) {
  double hours = 0.0;
  for (const auto& [id, idx] : log.cases) {
    if (idx.size() < 2) continue;
    hours += hours_between(log.records[idx.front()].timestamp,
                           log.records[idx.back()].timestamp);
  }
  return hours;
}

SamplingPeriod compute_sampling_period(const EventLog& log) {
  if (log.cases.empty())
    throw Error(ErrorCode::EmptyLog, "no cases in log");
  const double labour = total_labour_hours(log);
  if (labour <= 0.0)
    throw Error(ErrorCode::DegenerateLog,
                "total labour time is zero; cannot derive a sampling period");
  SamplingPeriod sp;
  sp.raw_seconds = labour * 3600.0 / (2.0 * static_cast<double>(log.cases.size()));
  const auto raw_ms = static_cast<std::int64_t>(std::floor(sp.raw_seconds * 1000.0));
  const std::int64_t minute_ms = 60'000;
  if (raw_ms >= minute_ms) {
    sp.value = Duration{(raw_ms / minute_ms) * minute_ms};
    sp.rounding = "floor_minute";
  } else if (raw_ms >= 1000) {
    sp.value = Duration{(raw_ms / 1000) * 1000};
    sp.rounding = "floor_second";
  } else if (raw_ms >= 1) {
    sp.value = Duration{raw_ms};
    sp.rounding = "none";
  } else {
    throw Error(ErrorCode::DegenerateLog,
                "sampling period below one millisecond");
  }
  return sp;
}

// ---- main paths ------------------------------------------------------------

PathExtraction extract_main_paths(const EventLog& log,
                                  const std::string& initial,
                                  const std::set<std::string>& finals) {
  if (!log.activities.count(initial))
    throw Error(ErrorCode::UnknownActivity,
                "initial activity not present in log: " + initial);
  bool any_final = false;
  for (const auto& f : finals) any_final |= log.activities.count(f) > 0;
  if (finals.empty() || !any_final)
    throw Error(ErrorCode::UnknownActivity,
                "no configured final activity present in log");

  struct PathAccum {
    std::set<std::string> case_ids;
    std::map<std::vector<std::string>, std::size_t> sequence_counts;
  };
  std::map<std::string, PathAccum> accums;  // keyed by final activity
  std::size_t unmatched = 0;

  for (const auto& [case_id, idx] : log.cases) {
    // First occurrence of the initial activity.
    std::size_t init_pos = idx.size();
    for (std::size_t p = 0; p < idx.size(); ++p) {
      if (log.records[idx[p]].activity == initial) {
        init_pos = p;
        break;
      }
    }
    if (init_pos == idx.size()) {
      ++unmatched;
      continue;
    }
    // Last occurrence of any final after the initial: the case's outcome.
    std::size_t final_pos = idx.size();
    for (std::size_t p = idx.size(); p-- > init_pos + 1;) {
      if (finals.count(log.records[idx[p]].activity)) {
        final_pos = p;
        break;
      }
    }
    if (final_pos == idx.size()) {
      ++unmatched;
      continue;
    }

    const std::string& final_act = log.records[idx[final_pos]].activity;
    PathAccum& acc = accums[final_act];
    acc.case_ids.insert(case_id);
    // Trimmed activity trace with consecutive repeats collapsed (start and
    // complete rows of one activity count once).
    std::vector<std::string> seq;
    for (std::size_t p = init_pos; p <= final_pos; ++p) {
      const std::string& a = log.records[idx[p]].activity;
      if (seq.empty() || seq.back() != a) seq.push_back(a);
    }
    ++acc.sequence_counts[seq];
  }

  PathExtraction out;
  out.unmatched_cases = unmatched;
  for (const auto& final_act : finals) {
    auto it = accums.find(final_act);
    if (it == accums.end()) continue;
    MainPath path;
    path.name = initial + "_" + final_act;
    path.initial_activity = initial;
    path.final_activity = final_act;
    path.case_ids = it->second.case_ids;
    // Modal trace; count ties resolve to the lexicographically smallest,
    // which std::map ordering gives for free.
    std::size_t best = 0;
    for (const auto& [seq, count] : it->second.sequence_counts) {
      if (count > best) {
        best = count;
        path.activity_sequence = seq;
      }
    }
    out.paths.push_back(std::move(path));
  }
  return out;
}

// ---- discrete sampling -----------------------------------------------------

namespace {

struct BusyInterval {
  Instant begin{};
  Instant end{};
  std::string resource;
};

// Start/complete pairing when present; inter-event gaps attributed to the
// later event otherwise. `case_records` is time-ordered. `in_scope` marks
// records whose activity belongs to the requested selector.
void collect_intervals(const EventLog& log,
                       const std::vector<std::size_t>& case_records,
                       const std::vector<bool>& in_scope, bool have_starts,
                       std::vector<BusyInterval>& out) {
  if (have_starts) {
    std::map<std::pair<std::string, std::string>, std::vector<Instant>> open;
    for (std::size_t p = 0; p < case_records.size(); ++p) {
      const EventRecord& r = log.records[case_records[p]];
      if (!in_scope[p]) continue;
      const auto key = std::make_pair(r.activity, r.resource);
      if (r.lifecycle.kind == LifecycleKind::Start) {
        open[key].push_back(r.timestamp);
      } else if (r.lifecycle.kind == LifecycleKind::Complete) {
        auto it = open.find(key);
        if (it != open.end() && !it->second.empty()) {
          out.push_back({it->second.back(), r.timestamp, r.resource});
          it->second.pop_back();
        }
      }
    }
  } else {
    for (std::size_t p = 1; p < case_records.size(); ++p) {
      if (!in_scope[p]) continue;
      const EventRecord& prev = log.records[case_records[p - 1]];
      const EventRecord& cur = log.records[case_records[p]];
      out.push_back({prev.timestamp, cur.timestamp, cur.resource});
    }
  }
}

}  // namespace

ProductionSignal sample_production(const EventLog& log,
                                   const SignalSelector& selector,
                                   const SamplingConfig& config,
                                   Channel channel) {
  if (config.sample_period.count() <= 0)
    throw Error(ErrorCode::ParameterError, "sample period must be positive");
  if (!selector.activity && !selector.path)
    throw Error(ErrorCode::UnknownSelector,
                "selector names neither an activity nor a path");
  if (selector.activity && !log.activities.count(*selector.activity))
    throw Error(ErrorCode::UnknownActivity,
                "activity not present in log: " + *selector.activity);

  const auto excluded = [&](const std::string& a) {
    return selector.exclude_activities.count(a) > 0;
  };
  const auto case_selected = [&](const std::string& id) {
    return !selector.path || selector.path->case_ids.count(id) > 0;
  };
  const auto activity_selected = [&](const std::string& a) {
    if (excluded(a)) return false;
    return !selector.activity || a == *selector.activity;
  };

  // Scope pass: find time extent and whether start events exist at all.
  Instant first{Duration{0}}, last{Duration{0}};
  bool any = false;
  bool have_starts = false;
  for (const auto& [id, idx] : log.cases) {
    if (!case_selected(id)) continue;
    for (std::size_t ri : idx) {
      const EventRecord& r = log.records[ri];
      if (!activity_selected(r.activity)) continue;
      if (!any || r.timestamp < first) first = r.timestamp;
      if (!any || r.timestamp > last) last = r.timestamp;
      any = true;
      have_starts |= r.lifecycle.kind == LifecycleKind::Start;
    }
  }

  ProductionSignal sig;
  sig.sample_period = config.sample_period;
  sig.scale = Scale::Linear;
  {
    std::string label;
    switch (channel) {
      case Channel::Output: label = "Y"; break;
      case Channel::Labour: label = "L"; break;
      case Channel::Capital: label = "K"; break;
    }
    if (selector.activity) label += ":" + *selector.activity;
    if (selector.path) label += "@" + selector.path->name;
    sig.label = label;
  }
  if (!any) return sig;  // empty scope: zero-length signal

  const Instant origin = config.origin.value_or(first);
  const auto ts_ms = static_cast<double>(config.sample_period.count());
  const auto bin_of = [&](Instant t) -> std::int64_t {
    const double delta = static_cast<double>((t - origin).count());
    return static_cast<std::int64_t>(std::floor(delta / ts_ms));
  };
  const std::int64_t last_bin = bin_of(last);
  if (last_bin < 0)
    throw Error(ErrorCode::ResolutionError,
                "sampling origin lies after the selected events");
  const auto bins = static_cast<std::size_t>(last_bin) + 1;
  if (bins > config.max_bins)
    throw Error(ErrorCode::ResolutionError,
                "bin count " + std::to_string(bins) + " exceeds cap " +
                    std::to_string(config.max_bins));
  sig.values.assign(bins, 0.0);

  const auto clamp_bin = [&](std::int64_t b) {
    return std::min<std::int64_t>(std::max<std::int64_t>(b, 0), last_bin);
  };

  if (channel == Channel::Output) {
    if (selector.activity) {
      // Completion counts; all events only when the scope has no completes.
      bool have_completes = false;
      for (const auto& [id, idx] : log.cases) {
        if (!case_selected(id)) continue;
        for (std::size_t ri : idx) {
          const EventRecord& r = log.records[ri];
          if (!activity_selected(r.activity)) continue;
          have_completes |= r.lifecycle.kind == LifecycleKind::Complete;
        }
      }
      for (const auto& [id, idx] : log.cases) {
        if (!case_selected(id)) continue;
        for (std::size_t ri : idx) {
          const EventRecord& r = log.records[ri];
          if (!activity_selected(r.activity)) continue;
          if (have_completes && r.lifecycle.kind != LifecycleKind::Complete)
            continue;
          sig.values[static_cast<std::size_t>(clamp_bin(bin_of(r.timestamp)))] += 1.0;
        }
      }
    } else {
      // Cumulative aliveness: a case counts in every bin its span overlaps.
      for (const auto& [id, idx] : log.cases) {
        if (!case_selected(id)) continue;
        // Per-case indices are already time-ordered.
        Instant s{}, e{};
        bool found = false;
        for (std::size_t ri : idx) {
          const EventRecord& r = log.records[ri];
          if (!activity_selected(r.activity)) continue;
          if (!found) s = r.timestamp;
          e = r.timestamp;
          found = true;
        }
        if (!found) continue;
        const std::int64_t b0 = clamp_bin(bin_of(s));
        const std::int64_t b1 = clamp_bin(bin_of(e));
        for (std::int64_t b = b0; b <= b1; ++b)
          sig.values[static_cast<std::size_t>(b)] += 1.0;
      }
    }
  } else {
    // Labour and the default capital proxy both derive from busy intervals.
    std::vector<BusyInterval> intervals;
    for (const auto& [id, idx] : log.cases) {
      if (!case_selected(id)) continue;
      std::vector<std::size_t> case_records;
      std::vector<bool> in_scope;
      bool case_any_scope = false;
      for (std::size_t ri : idx) {
        const EventRecord& r = log.records[ri];
        if (excluded(r.activity)) continue;
        case_records.push_back(ri);
        const bool scoped = activity_selected(r.activity);
        in_scope.push_back(scoped);
        case_any_scope |= scoped;
      }
      if (case_any_scope)
        collect_intervals(log, case_records, in_scope, have_starts, intervals);
    }

    if (channel == Channel::Labour) {
      const double ms_per_hour = 3'600'000.0;
      for (const BusyInterval& iv : intervals) {
        if (iv.end <= iv.begin) continue;
        const std::int64_t b0 = clamp_bin(bin_of(iv.begin));
        const std::int64_t b1 = clamp_bin(bin_of(iv.end));
        for (std::int64_t b = b0; b <= b1; ++b) {
          const double bin_start =
              static_cast<double>(b) * ts_ms +
              static_cast<double>(origin.time_since_epoch().count());
          const double bin_end = bin_start + ts_ms;
          const double s =
              std::max(bin_start, static_cast<double>(
                                      iv.begin.time_since_epoch().count()));
          const double e = std::min(
              bin_end,
              static_cast<double>(iv.end.time_since_epoch().count()));
          if (e > s)
            sig.values[static_cast<std::size_t>(b)] += (e - s) / ms_per_hour;
        }
      }
    } else {
      if (config.capital_override) {
        const auto& k = *config.capital_override;
        if (k.size() < bins)
          throw Error(ErrorCode::InputError,
                      "capital override shorter than the sampled horizon");
        for (std::size_t b = 0; b < bins; ++b) sig.values[b] = k[b];
      } else {
        // Distinct resources with a busy interval touching the bin.
        std::vector<std::set<std::string>> active(bins);
        for (const BusyInterval& iv : intervals) {
          if (iv.resource.empty()) continue;
          const std::int64_t b0 = clamp_bin(bin_of(iv.begin));
          const std::int64_t b1 = clamp_bin(bin_of(iv.end));
          for (std::int64_t b = b0; b <= b1; ++b)
            active[static_cast<std::size_t>(b)].insert(iv.resource);
        }
        for (std::size_t b = 0; b < bins; ++b)
          sig.values[b] = static_cast<double>(active[b].size());
      }
    }
  }

  sig.gates.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) sig.gates[b] = sig.values[b] > 0.0;
  return sig;
}

}  // namespace prodfreq
