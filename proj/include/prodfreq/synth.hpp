#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prodfreq/eventlog.hpp"
#include "prodfreq/time.hpp"

namespace prodfreq {

// ---- synthetic log generator ----------------------------------------------
// Deterministic for a fixed seed: same spec -> byte-identical CSV.

struct DurationSpec {
  // "fixed": minutes; "exponential": mean_minutes;
  // "uniform": [min_minutes, max_minutes]; "lognormal": mu/sigma of ln(min).
  std::string dist = "fixed";
  double minutes = 30.0;
  double mean_minutes = 30.0;
  double min_minutes = 10.0;
  double max_minutes = 60.0;
  double mu = 3.0;
  double sigma = 0.5;
};

struct ActivitySpec {
  std::string name;
  DurationSpec duration;
};

struct PathSpec {
  std::string name;
  double weight = 1.0;
  std::vector<ActivitySpec> activities;  // executed sequentially
};

struct ArrivalSpec {
  std::string kind = "poisson";  // "poisson" | "fixed"
  double rate_per_hour = 1.0;    // poisson
  double interval_minutes = 60;  // fixed
};

struct GeneratorSpec {
  std::uint64_t seed = 1;
  std::size_t case_count = 100;
  Instant start_time{};
  ArrivalSpec arrival;
  std::vector<PathSpec> paths;
  int resources_per_activity = 2;
  bool lifecycle = true;  // emit start+complete rows; otherwise complete only
};

struct GeneratedLog {
  EventLog log;
  std::string csv;         // canonical serialization
  std::string truth_json;  // ground-truth sidecar
};

// Path counts are exact largest-remainder apportionments of the weights, so
// the sidecar's per-path counts are reproducible from the spec alone.
GeneratedLog generate_log(const GeneratorSpec& spec);

GeneratorSpec generator_spec_from_json(const std::string& json_text);

}  // namespace prodfreq
