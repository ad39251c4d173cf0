#include "prodfreq/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "prodfreq/errors.hpp"

namespace prodfreq {
namespace {

using nlohmann::json;

// All draws go through one uniform primitive so the byte stream depends only
// on the mt19937_64 sequence, not on library distribution internals.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  double uniform01() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double mean) {
    return -mean * std::log1p(-uniform01());
  }

  double normal() {
    // Box-Muller; one value per pair keeps the draw count predictable.
    const double u1 = std::max(uniform01(), 1e-300);
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::uint64_t index(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }

 private:
  std::mt19937_64 rng_;
};

double draw_minutes(const DurationSpec& d, Draws& rng) {
  if (d.dist == "fixed") return d.minutes;
  if (d.dist == "exponential") return rng.exponential(d.mean_minutes);
  if (d.dist == "uniform") return rng.uniform(d.min_minutes, d.max_minutes);
  if (d.dist == "lognormal") return std::exp(d.mu + d.sigma * rng.normal());
  throw Error(ErrorCode::SchemaError, "unknown duration dist: " + d.dist);
}

double mean_minutes(const DurationSpec& d) {
  if (d.dist == "fixed") return d.minutes;
  if (d.dist == "exponential") return d.mean_minutes;
  if (d.dist == "uniform") return 0.5 * (d.min_minutes + d.max_minutes);
  if (d.dist == "lognormal") return std::exp(d.mu + 0.5 * d.sigma * d.sigma);
  return 0.0;
}

// Largest-remainder apportionment of case_count across path weights.
std::vector<std::size_t> apportion(const std::vector<PathSpec>& paths,
                                   std::size_t n) {
  double total = 0.0;
  for (const auto& p : paths) total += p.weight;
  if (total <= 0.0)
    throw Error(ErrorCode::WeightError, "path weights must sum to > 0");
  std::vector<std::size_t> counts(paths.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const double exact = paths[i].weight / total * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned)
    ++counts[remainders[r % remainders.size()].second];
  return counts;
}

}  // namespace

GeneratedLog generate_log(const GeneratorSpec& spec) {
  if (spec.paths.empty())
    throw Error(ErrorCode::SchemaError, "generator spec has no paths");
  if (spec.case_count == 0)
    throw Error(ErrorCode::SchemaError, "generator spec has zero cases");
  for (const auto& p : spec.paths) {
    if (p.activities.empty())
      throw Error(ErrorCode::SchemaError,
                  "path '" + p.name + "' has no activities");
    for (const auto& a : p.activities) {
      const DurationSpec& d = a.duration;
      const bool bad =
          (d.dist == "fixed" && d.minutes < 0.0) ||
          (d.dist == "exponential" && d.mean_minutes <= 0.0) ||
          (d.dist == "uniform" && (d.min_minutes < 0.0 ||
                                   d.max_minutes < d.min_minutes)) ||
          (d.dist == "lognormal" && d.sigma < 0.0);
      if (bad)
        throw Error(ErrorCode::SchemaError,
                    "invalid duration parameters for activity '" + a.name +
                        "'");
    }
  }

  Draws rng(spec.seed);
  const std::vector<std::size_t> counts = apportion(spec.paths, spec.case_count);

  // Deterministic shuffled path assignment per case.
  std::vector<std::size_t> assignment;
  assignment.reserve(spec.case_count);
  for (std::size_t i = 0; i < counts.size(); ++i)
    assignment.insert(assignment.end(), counts[i], i);
  for (std::size_t i = assignment.size(); i > 1; --i)
    std::swap(assignment[i - 1], assignment[rng.index(i)]);

  GeneratedLog out;
  int width = 1;
  for (std::size_t c = spec.case_count; c >= 10; c /= 10) ++width;

  Instant arrival = spec.start_time;
  for (std::size_t c = 0; c < spec.case_count; ++c) {
    if (c > 0) {
      double gap_minutes;
      if (spec.arrival.kind == "poisson")
        gap_minutes = rng.exponential(60.0 / spec.arrival.rate_per_hour);
      else if (spec.arrival.kind == "fixed")
        gap_minutes = spec.arrival.interval_minutes;
      else
        throw Error(ErrorCode::SchemaError,
                    "unknown arrival kind: " + spec.arrival.kind);
      arrival += Duration{static_cast<std::int64_t>(gap_minutes * 60'000.0)};
    }

    std::ostringstream id;
    id << "c";
    id.width(width);
    id.fill('0');
    id << (c + 1);

    const PathSpec& path = spec.paths[assignment[c]];
    Instant clock = arrival;
    for (const ActivitySpec& act : path.activities) {
      const double dur_min = std::max(draw_minutes(act.duration, rng), 0.0);
      const Instant start = clock;
      const Instant end =
          start + Duration{static_cast<std::int64_t>(dur_min * 60'000.0)};
      std::string resource =
          "R_" + act.name + "_" +
          std::to_string(rng.index(static_cast<std::uint64_t>(
              std::max(spec.resources_per_activity, 1))));

      if (spec.lifecycle) {
        out.log.records.push_back(
            {id.str(), act.name, start, resource, {LifecycleKind::Start, "start"}});
      }
      out.log.records.push_back({id.str(),
                                 act.name,
                                 end,
                                 resource,
                                 {LifecycleKind::Complete, "complete"}});
      clock = end;
    }
  }

  for (std::size_t i = 0; i < out.log.records.size(); ++i) {
    const EventRecord& r = out.log.records[i];
    out.log.cases[r.case_id].push_back(i);
    out.log.activities.insert(r.activity);
  }
  for (auto& [id, idx] : out.log.cases) {
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) {
                       return out.log.records[a].timestamp <
                              out.log.records[b].timestamp;
                     });
  }

  out.csv = serialize_log(out.log);

  json truth;
  truth["seed"] = spec.seed;
  truth["case_count"] = spec.case_count;
  truth["start_time"] = format_iso8601(spec.start_time);
  truth["arrival"] = {{"kind", spec.arrival.kind}};
  if (spec.arrival.kind == "poisson")
    truth["arrival"]["rate_per_hour"] = spec.arrival.rate_per_hour;
  else
    truth["arrival"]["interval_minutes"] = spec.arrival.interval_minutes;
  json path_counts = json::object();
  json path_means = json::object();
  double expected_labour_hours = 0.0;
  for (std::size_t i = 0; i < spec.paths.size(); ++i) {
    const PathSpec& p = spec.paths[i];
    const std::string name = p.name.empty() ? "path" + std::to_string(i) : p.name;
    path_counts[name] = counts[i];
    double mean_min = 0.0;
    for (const auto& a : p.activities) mean_min += mean_minutes(a.duration);
    path_means[name] = mean_min / 60.0;
    expected_labour_hours +=
        static_cast<double>(counts[i]) * mean_min / 60.0;
  }
  truth["path_counts"] = path_counts;
  truth["mean_case_duration_hours"] = path_means;
  truth["expected_labour_hours"] = expected_labour_hours;
  out.truth_json = truth.dump(2) + "\n";
  return out;
}

GeneratorSpec generator_spec_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError,
                std::string("generator spec is not valid JSON: ") + e.what());
  }
  GeneratorSpec spec;
  try {
    spec.seed = j.value("seed", 1ULL);
    spec.case_count = j.value("case_count", std::size_t{100});
    if (j.contains("start_time")) {
      const auto t = parse_iso8601(j["start_time"].get<std::string>());
      if (!t)
        throw Error(ErrorCode::SchemaError, "unparseable start_time");
      spec.start_time = *t;
    }
    if (j.contains("arrival")) {
      const json& a = j["arrival"];
      spec.arrival.kind = a.value("kind", std::string("poisson"));
      spec.arrival.rate_per_hour = a.value("rate_per_hour", 1.0);
      spec.arrival.interval_minutes = a.value("interval_minutes", 60.0);
    }
    spec.resources_per_activity = j.value("resources_per_activity", 2);
    spec.lifecycle = j.value("lifecycle", true);
    if (!j.contains("paths") || !j["paths"].is_array())
      throw Error(ErrorCode::SchemaError, "generator spec needs a paths array");
    for (const json& pj : j["paths"]) {
      PathSpec p;
      p.name = pj.value("name", std::string{});
      p.weight = pj.value("weight", 1.0);
      for (const json& aj : pj.at("activities")) {
        ActivitySpec a;
        a.name = aj.at("name").get<std::string>();
        if (aj.contains("duration")) {
          const json& dj = aj["duration"];
          a.duration.dist = dj.value("dist", std::string("fixed"));
          a.duration.minutes = dj.value("minutes", 30.0);
          a.duration.mean_minutes = dj.value("mean_minutes", 30.0);
          a.duration.min_minutes = dj.value("min_minutes", 10.0);
          a.duration.max_minutes = dj.value("max_minutes", 60.0);
          a.duration.mu = dj.value("mu", 3.0);
          a.duration.sigma = dj.value("sigma", 0.5);
        }
        p.activities.push_back(std::move(a));
      }
      spec.paths.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError,
                std::string("generator spec field error: ") + e.what());
  }
  return spec;
}

}  // namespace prodfreq
