#include "prodfreq/cli.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prodfreq/control.hpp"
#include "prodfreq/econ.hpp"
#include "prodfreq/errors.hpp"
#include "prodfreq/eventlog.hpp"
#include "prodfreq/log.hpp"
#include "prodfreq/ltitasks.hpp"
#include "prodfreq/signal.hpp"
#include "prodfreq/simkit.hpp"
#include "prodfreq/spectral.hpp"
#include "prodfreq/synth.hpp"
#include "prodfreq/time.hpp"

namespace prodfreq::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---- shared helpers --------------------------------------------------------

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    if (!ok) c = '_';
  }
  return out;
}

// "5m", "30s", "1.5h", "250ms"; a bare number means seconds.
Duration parse_ts_flag(const std::string& text) {
  if (text.empty())
    throw Error(ErrorCode::UsageError, "--ts value is empty");
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::UsageError, "--ts is not a duration: " + text);
  }
  const std::string unit = text.substr(pos);
  double ms = 0.0;
  if (unit == "h")
    ms = v * 3'600'000.0;
  else if (unit == "m")
    ms = v * 60'000.0;
  else if (unit == "s" || unit.empty())
    ms = v * 1'000.0;
  else if (unit == "ms")
    ms = v;
  else
    throw Error(ErrorCode::UsageError, "--ts has unknown unit: " + unit);
  if (!(ms > 0.0))
    throw Error(ErrorCode::UsageError, "--ts must be positive");
  return Duration{static_cast<std::int64_t>(ms)};
}

// "INIT:FIN1,INIT:FIN2" -> one shared initial plus the set of finals.
std::pair<std::string, std::set<std::string>> parse_paths_flag(
    const std::string& text) {
  std::string initial;
  std::set<std::string> finals;
  std::stringstream ss(text);
  std::string pair;
  while (std::getline(ss, pair, ',')) {
    const auto colon = pair.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == pair.size())
      throw Error(ErrorCode::UsageError,
                  "--paths entries must look like INITIAL:FINAL, got: " + pair);
    const std::string init = pair.substr(0, colon);
    const std::string fin = pair.substr(colon + 1);
    if (initial.empty())
      initial = init;
    else if (initial != init)
      throw Error(ErrorCode::UsageError,
                  "--paths entries must share one initial activity");
    finals.insert(fin);
  }
  if (initial.empty())
    throw Error(ErrorCode::UsageError, "--paths is empty");
  return {initial, finals};
}

std::set<std::string> parse_csv_set(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

// Frequency in cycles/sample rendered in every unit the converter knows.
json freq_units(double cycles, Duration ts) {
  json j;
  j["cycles_per_sample"] = cycles;
  j["hz_paper"] =
      unit_convert(cycles, FreqUnit::CyclesPerSample, FreqUnit::HzPaper, ts);
  if (ts.count() > 0)
    j["requests_per_hour"] = unit_convert(
        cycles, FreqUnit::CyclesPerSample, FreqUnit::RequestsPerHour, ts);
  return j;
}

void stamp(json& j, const std::optional<long long>& epoch) {
  if (epoch)
    j["epoch"] = *epoch;
  else
    j["generated_at"] = static_cast<long long>(std::time(nullptr));
}

std::string spectrum_csv(const SpectrumSummary& s) {
  std::string out = "frequency_cycles_per_sample,magnitude\n";
  for (std::size_t i = 0; i < s.frequencies.size(); ++i)
    out += fmt_num(s.frequencies[i]) + "," + fmt_num(s.magnitudes[i]) + "\n";
  return out;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out =
      "path,f_m_before,f_m_after,f_0_before,f_0_after,kappa_m,kappa_0,"
      "filtered\n";
  for (const auto& r : rows) {
    out += r.path + "," + fmt_num(r.f_m_before) + "," + fmt_num(r.f_m_after) +
           "," + fmt_num(r.f_0_before) + "," + fmt_num(r.f_0_after) + "," +
           fmt_num(r.kappa_m) + "," + fmt_num(r.kappa_0) + "," +
           (r.filtered ? "1" : "0") + "\n";
  }
  return out;
}

json comparison_json(const std::vector<ComparisonRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json e;
    e["path"] = r.path;
    e["f_m_before"] = r.f_m_before;
    e["f_m_after"] = r.f_m_after;
    e["f_0_before"] = r.f_0_before;
    e["f_0_after"] = r.f_0_after;
    e["kappa_m"] = r.kappa_m;
    e["kappa_0"] = r.kappa_0;
    e["filtered"] = r.filtered;
    arr.push_back(e);
  }
  return arr;
}

// ---- log analysis helpers --------------------------------------------------

struct LogAnalysis {
  EventLog log;
  std::size_t rejected_rows = 0;
  SamplingPeriod ts;
  PathExtraction extraction;
  std::map<std::string, SpectrumSummary> spectra;
  std::map<std::string, SpectrumSummary> filtered;
};

SamplingPeriod resolve_ts(const EventLog& log,
                          const std::optional<Duration>& override_ts) {
  if (!override_ts) return compute_sampling_period(log);
  SamplingPeriod sp;
  sp.value = *override_ts;
  sp.rounding = "override";
  sp.raw_seconds = static_cast<double>(override_ts->count()) / 1000.0;
  try {
    sp.raw_seconds = compute_sampling_period(log).raw_seconds;
  } catch (const Error&) {
    // Degenerate labour time; the override still stands.
  }
  return sp;
}

LogAnalysis analyze_log(const std::string& log_path,
                        const std::string& paths_flag,
                        const std::optional<Duration>& override_ts,
                        const std::set<std::string>& exclude, Window window) {
  LogAnalysis a;
  ParseResult pr = parse_log_file(log_path);
  a.log = std::move(pr.log);
  a.rejected_rows = pr.rejected.size();
  if (a.rejected_rows > 0)
    log_warn(std::to_string(a.rejected_rows) + " malformed rows rejected in " +
             log_path);
  a.ts = resolve_ts(a.log, override_ts);

  const auto [initial, finals] = parse_paths_flag(paths_flag);
  a.extraction = extract_main_paths(a.log, initial, finals);

  for (const MainPath& p : a.extraction.paths) {
    SamplingConfig cfg;
    cfg.sample_period = a.ts.value;
    SignalSelector sel;
    sel.path = &p;
    a.spectra[p.name] = spectrum(
        sample_production(a.log, sel, cfg, Channel::Output), window);
    if (!exclude.empty()) {
      SignalSelector fsel;
      fsel.path = &p;
      fsel.exclude_activities = exclude;
      a.filtered[p.name] = spectrum(
          sample_production(a.log, fsel, cfg, Channel::Output), window);
    }
  }
  return a;
}

json path_summaries(const LogAnalysis& a,
                    const std::map<std::string, SpectrumSummary>& spectra) {
  json out = json::object();
  for (const MainPath& p : a.extraction.paths) {
    const auto it = spectra.find(p.name);
    if (it == spectra.end()) continue;
    json e;
    e["initial"] = p.initial_activity;
    e["final"] = p.final_activity;
    e["cases"] = p.case_ids.size();
    e["sequence"] = p.activity_sequence;
    e["f_m"] = freq_units(it->second.f_m, a.ts.value);
    e["f_0"] = freq_units(it->second.f_0, a.ts.value);
    e["n_samples"] = it->second.n_samples;
    out[p.name] = e;
  }
  return out;
}

// Positional pairing between two extractions, overridable with
// "before=after" pairs.
std::map<std::string, std::string> build_pairing(
    const LogAnalysis& before, const LogAnalysis& after,
    const std::string& pairing_flag) {
  std::map<std::string, std::string> pairing;
  if (!pairing_flag.empty()) {
    std::stringstream ss(pairing_flag);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos)
        throw Error(ErrorCode::UsageError,
                    "--pairing entries must look like BEFORE=AFTER");
      pairing[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
    return pairing;
  }
  const std::size_t n =
      std::min(before.extraction.paths.size(), after.extraction.paths.size());
  if (before.extraction.paths.size() != after.extraction.paths.size())
    log_warn("path counts differ between the two logs; pairing the first " +
             std::to_string(n) + " in order");
  for (std::size_t i = 0; i < n; ++i)
    pairing[before.extraction.paths[i].name] = after.extraction.paths[i].name;
  return pairing;
}

// ---- subcommand: analyze ---------------------------------------------------

struct AnalyzeArgs {
  std::string log_path;
  std::string paths_flag;
  std::string log_after;
  std::string paths_after;
  std::string pairing_flag;
  std::string ts_text;
  std::string exclude_text;
  std::string window_text = "hann";
  std::string out_dir = ".";
  std::optional<long long> epoch;
};

Window parse_window(const std::string& text) {
  if (text == "hann") return Window::Hann;
  if (text == "rect") return Window::Rect;
  throw Error(ErrorCode::UsageError, "--window must be hann or rect");
}

int cmd_analyze(const AnalyzeArgs& args) {
  const std::optional<Duration> ts_override =
      args.ts_text.empty() ? std::nullopt
                           : std::optional<Duration>(parse_ts_flag(args.ts_text));
  const std::set<std::string> exclude = parse_csv_set(args.exclude_text);
  const Window window = parse_window(args.window_text);

  const LogAnalysis before = analyze_log(args.log_path, args.paths_flag,
                                         ts_override, exclude, window);
  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);

  json summary;
  summary["log"] = args.log_path;
  summary["rejected_rows"] = before.rejected_rows;
  summary["sampling"] = {{"raw_seconds", before.ts.raw_seconds},
                         {"period_ms", before.ts.value.count()},
                         {"rounding", before.ts.rounding}};
  summary["labour_hours"] = total_labour_hours(before.log);
  summary["unmatched_cases"] = before.extraction.unmatched_cases;
  summary["paths"] = path_summaries(before, before.spectra);
  if (!before.filtered.empty())
    summary["filtered_paths"] = path_summaries(before, before.filtered);

  for (const auto& [name, sp] : before.spectra)
    write_file(out_dir / ("spectrum_" + sanitize(name) + ".csv"),
               spectrum_csv(sp));
  for (const auto& [name, sp] : before.filtered)
    write_file(out_dir / ("spectrum_" + sanitize(name) + "_filtered.csv"),
               spectrum_csv(sp));

  if (!args.log_after.empty()) {
    const std::string paths_after =
        args.paths_after.empty() ? args.paths_flag : args.paths_after;
    const LogAnalysis after = analyze_log(args.log_after, paths_after,
                                          ts_override, exclude, window);
    summary["log_after"] = args.log_after;
    summary["sampling_after"] = {{"raw_seconds", after.ts.raw_seconds},
                                 {"period_ms", after.ts.value.count()},
                                 {"rounding", after.ts.rounding}};
    summary["paths_after"] = path_summaries(after, after.spectra);
    if (!after.filtered.empty())
      summary["filtered_paths_after"] = path_summaries(after, after.filtered);

    const auto pairing = build_pairing(before, after, args.pairing_flag);
    const auto rows = compare_logs(
        before.spectra, after.spectra, pairing,
        before.filtered.empty() ? nullptr : &before.filtered,
        after.filtered.empty() ? nullptr : &after.filtered);
    summary["comparison"] = comparison_json(rows);
    write_file(out_dir / "comparison.csv", comparison_csv(rows));
    for (const auto& [name, sp] : after.spectra)
      write_file(out_dir / ("spectrum_after_" + sanitize(name) + ".csv"),
                 spectrum_csv(sp));
  }

  stamp(summary, args.epoch);
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  return 0;
}

// ---- subcommand: fit -------------------------------------------------------

struct FitArgs {
  std::string log_path;
  std::string paths_flag;  // at most one INITIAL:FINAL pair
  std::string activity;
  std::string ts_text;
  std::string out_dir = ".";
  std::optional<long long> epoch;
};

int cmd_fit(const FitArgs& args) {
  if (args.paths_flag.empty() && args.activity.empty())
    throw Error(ErrorCode::UsageError, "fit needs --paths or --activity");
  const std::optional<Duration> ts_override =
      args.ts_text.empty() ? std::nullopt
                           : std::optional<Duration>(parse_ts_flag(args.ts_text));

  ParseResult pr = parse_log_file(args.log_path);
  const EventLog& log = pr.log;
  const SamplingPeriod sp = resolve_ts(log, ts_override);

  PathExtraction extraction;
  const MainPath* path = nullptr;
  if (!args.paths_flag.empty()) {
    const auto [initial, finals] = parse_paths_flag(args.paths_flag);
    if (finals.size() != 1)
      throw Error(ErrorCode::UsageError,
                  "fit takes exactly one INITIAL:FINAL pair");
    extraction = extract_main_paths(log, initial, finals);
    if (extraction.paths.empty())
      throw Error(ErrorCode::InsufficientData,
                  "no case reaches the requested final activity");
    path = &extraction.paths.front();
  }

  SignalSelector sel;
  if (!args.activity.empty()) sel.activity = args.activity;
  sel.path = path;
  SamplingConfig cfg;
  cfg.sample_period = sp.value;

  const ProductionSignal y =
      to_log_scale(sample_production(log, sel, cfg, Channel::Output));
  const ProductionSignal l =
      to_log_scale(sample_production(log, sel, cfg, Channel::Labour));
  const ProductionSignal k =
      to_log_scale(sample_production(log, sel, cfg, Channel::Capital));
  const CobbDouglasFit fit = fit_cobb_douglas(y, l, k);

  json j;
  j["log"] = args.log_path;
  if (!args.activity.empty()) j["activity"] = args.activity;
  if (path) j["path"] = path->name;
  j["sampling"] = {{"raw_seconds", sp.raw_seconds},
                   {"period_ms", sp.value.count()},
                   {"rounding", sp.rounding}};
  j["ln_A"] = fit.ln_A;
  j["alpha"] = fit.alpha;
  j["residual_rms"] = fit.residual_rms;
  j["n_points"] = fit.n_points;
  j["clamped"] = fit.clamped;
  stamp(j, args.epoch);
  write_file(fs::path(args.out_dir) / "fit.json", j.dump(2) + "\n");
  return 0;
}

// ---- subcommand: stability -------------------------------------------------

struct StabilityArgs {
  double tau = 20.0;
  double r0 = 0.99;
  double kappa = 0.0;
  double fm = 0.0;
  std::string ts_text;
  std::string out_dir = ".";
  std::optional<long long> epoch;
};

json complex_array(const std::vector<std::complex<double>>& v) {
  json arr = json::array();
  for (const auto& c : v) {
    arr.push_back(
        {{"re", c.real()}, {"im", c.imag()}, {"magnitude", std::abs(c)}});
  }
  return arr;
}

int cmd_stability(const StabilityArgs& args) {
  const MetricConfig metric{args.r0, args.tau};
  const TransferFunction h = closed_loop_tf(metric);
  const StabilityReport rep = poles_zeros(h);
  const Duration ts =
      args.ts_text.empty() ? Duration{0} : parse_ts_flag(args.ts_text);

  json j;
  j["metric"] = {{"r_o", metric.r_o}, {"tau", metric.tau}};
  j["transfer_function"] = {{"num", h.num}, {"den", h.den}};
  j["stable"] = rep.stable;
  j["max_pole_magnitude"] = rep.max_pole_magnitude;
  j["poles"] = complex_array(rep.poles);
  j["zeros"] = complex_array(rep.zeros);
  if (rep.resonance) {
    // The resonance row reports the first sampling image, so the rate
    // conversion runs from paper_hz, not from the baseband cycle count.
    json r;
    r["rad_per_sample"] = rep.resonance->rad_per_sample;
    r["cycles_per_sample"] = rep.resonance->cycles_per_sample;
    r["paper_hz"] = rep.resonance->paper_hz;
    if (ts.count() > 0)
      r["requests_per_hour"] =
          unit_convert(rep.resonance->paper_hz, FreqUnit::HzPaper,
                       FreqUnit::RequestsPerHour, ts);
    j["resonance"] = r;
  }
  if (args.fm > 0.0) {
    const double omega_c = make_omega_c(args.kappa, args.fm);
    double line = std::fmod(2.0 * omega_c, 2.0 * M_PI);
    if (line < 0.0) line += 2.0 * M_PI;
    if (line > M_PI) line = 2.0 * M_PI - line;
    j["modulated_line_rad"] = line;
    if (rep.resonance) {
      const double band =
          std::max(0.05, 0.05 * rep.resonance->rad_per_sample);
      j["resonance_proximity"] =
          std::abs(line - rep.resonance->rad_per_sample) <= band;
    }
  }
  stamp(j, args.epoch);

  std::string csv = "re,im,kind,magnitude\n";
  for (const auto& p : rep.poles)
    csv += fmt_num(p.real()) + "," + fmt_num(p.imag()) + ",pole," +
           fmt_num(std::abs(p)) + "\n";
  for (const auto& z : rep.zeros)
    csv += fmt_num(z.real()) + "," + fmt_num(z.imag()) + ",zero," +
           fmt_num(std::abs(z)) + "\n";

  const fs::path out_dir(args.out_dir);
  write_file(out_dir / "stability.json", j.dump(2) + "\n");
  write_file(out_dir / "polezero.csv", csv);
  return 0;
}

// ---- subcommands: simulate / whatif ----------------------------------------

struct SimArgs {
  std::string network_path;
  std::string inputs_dir;
  std::string log_path;
  std::string ts_text;
  std::optional<std::size_t> horizon;
  std::string format = "json";
  std::string out_dir = ".";
  std::optional<long long> epoch;
  // whatif only
  std::string task;
  std::string kind_text = "Automated";
  std::optional<double> kappa;
  std::optional<double> fm;
  std::optional<double> tau;
  std::optional<double> r0;
};

ReportFormat parse_format(const std::string& text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "markdown") return ReportFormat::Markdown;
  throw Error(ErrorCode::UsageError,
              "--format must be json, csv or markdown");
}

TaskKind parse_kind_flag(const std::string& text) {
  if (text == "Initial") return TaskKind::Initial;
  if (text == "NonAutomated") return TaskKind::NonAutomated;
  if (text == "Automated") return TaskKind::Automated;
  throw Error(ErrorCode::UsageError,
              "--kind must be Initial, NonAutomated or Automated");
}

// Inputs file schema: header "bin_index,L,K", rows in bin order.
TaskInputs read_inputs_csv(const fs::path& path, Duration ts) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::InputError,
                "missing task input file: " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::InputError, "empty input file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "bin_index,L,K")
    throw Error(ErrorCode::InputError,
                "input file " + path.string() +
                    " must start with header bin_index,L,K");
  TaskInputs ti;
  ti.labour.sample_period = ts;
  ti.capital.sample_period = ts;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string bin, lv, kv;
    if (!std::getline(ss, bin, ',') || !std::getline(ss, lv, ',') ||
        !std::getline(ss, kv))
      throw Error(ErrorCode::InputError,
                  "malformed row in " + path.string() + ": " + line);
    try {
      if (std::stoull(bin) != expected)
        throw Error(ErrorCode::InputError,
                    "rows of " + path.string() +
                        " must be contiguous from bin 0");
      ti.labour.values.push_back(std::stod(lv));
      ti.capital.values.push_back(std::stod(kv));
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(ErrorCode::InputError,
                  "non-numeric row in " + path.string() + ": " + line);
    }
    ++expected;
  }
  ti.labour.label = "L:" + path.stem().string();
  ti.capital.label = "K:" + path.stem().string();
  return ti;
}

std::map<std::string, TaskInputs> assemble_inputs(const BPNetwork& net,
                                                  const SimArgs& args) {
  std::map<std::string, TaskInputs> inputs;
  if (!args.inputs_dir.empty()) {
    const Duration ts =
        args.ts_text.empty() ? Duration{0} : parse_ts_flag(args.ts_text);
    for (const auto& [name, task] : net.tasks)
      inputs[name] =
          read_inputs_csv(fs::path(args.inputs_dir) / (name + ".csv"), ts);
    return inputs;
  }
  if (args.log_path.empty())
    throw Error(ErrorCode::UsageError,
                "simulate needs --inputs-dir or --log");

  ParseResult pr = parse_log_file(args.log_path);
  const EventLog& log = pr.log;
  const std::optional<Duration> ts_override =
      args.ts_text.empty() ? std::nullopt
                           : std::optional<Duration>(parse_ts_flag(args.ts_text));
  const SamplingPeriod sp = resolve_ts(log, ts_override);
  for (const auto& [name, task] : net.tasks) {
    if (!log.activities.count(name))
      throw Error(ErrorCode::UnknownActivity,
                  "task '" + name + "' does not appear in the log");
    SignalSelector sel;
    sel.activity = name;
    SamplingConfig cfg;
    cfg.sample_period = sp.value;
    TaskInputs ti;
    ti.labour = sample_production(log, sel, cfg, Channel::Labour);
    ti.capital = sample_production(log, sel, cfg, Channel::Capital);
    inputs[name] = std::move(ti);
  }
  return inputs;
}

std::string report_extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::Json: return "json";
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Markdown: return "md";
  }
  return "txt";
}

void dump_signals(const SimulationRun& run, const fs::path& out_dir) {
  for (const auto& [name, sig] : run.outputs) {
    std::string csv = "bin_index,value\n";
    for (std::size_t i = 0; i < sig.values.size(); ++i)
      csv += std::to_string(i) + "," + fmt_num(sig.values[i]) + "\n";
    write_file(out_dir / "signals" / (sanitize(name) + ".csv"), csv);
  }
}

int cmd_simulate(const SimArgs& args) {
  const BPNetwork net = load_network(read_file(args.network_path));
  const auto inputs = assemble_inputs(net, args);
  const SimulationRun run = simulate(net, inputs, args.horizon);

  ReportOptions opts;
  opts.format = parse_format(args.format);
  opts.epoch = args.epoch;
  const fs::path out_dir(args.out_dir);
  write_file(out_dir / ("report." + report_extension(opts.format)),
             report(run, opts));
  dump_signals(run, out_dir);
  return 0;
}

int cmd_whatif(const SimArgs& args) {
  if (args.task.empty())
    throw Error(ErrorCode::UsageError, "whatif needs --task");
  const BPNetwork net = load_network(read_file(args.network_path));
  const auto inputs = assemble_inputs(net, args);

  WhatIfEdit edit;
  edit.task = args.task;
  edit.new_kind = parse_kind_flag(args.kind_text);
  edit.kappa = args.kappa;
  edit.f_m = args.fm;
  if (args.tau || args.r0) {
    MetricConfig m;
    if (args.r0) m.r_o = *args.r0;
    if (args.tau) m.tau = *args.tau;
    edit.metric = m;
  }
  const WhatIfResult result = what_if(net, inputs, edit, args.horizon);

  ReportOptions sub;
  sub.format = ReportFormat::Json;
  sub.epoch = args.epoch;
  json baseline = json::parse(report(result.baseline, sub));
  json edited = json::parse(report(result.edited, sub));
  baseline.erase("generated_at");
  baseline.erase("epoch");
  edited.erase("generated_at");
  edited.erase("epoch");

  json j;
  j["edit"] = {{"task", edit.task}, {"kind", args.kind_text}};
  if (edit.kappa) j["edit"]["kappa"] = *edit.kappa;
  if (edit.f_m) j["edit"]["f_m"] = *edit.f_m;
  if (edit.metric)
    j["edit"]["metric"] = {{"r_o", edit.metric->r_o},
                           {"tau", edit.metric->tau}};
  j["baseline"] = baseline;
  j["edited"] = edited;
  j["kappa"] = comparison_json(result.kappa_rows);
  j["edited_network"] = json::parse(network_to_json(result.edited_network));
  stamp(j, args.epoch);

  const fs::path out_dir(args.out_dir);
  write_file(out_dir / "whatif.json", j.dump(2) + "\n");
  write_file(out_dir / "kappa.csv", comparison_csv(result.kappa_rows));
  return 0;
}

// ---- subcommand: synth -----------------------------------------------------

struct SynthArgs {
  std::string spec_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cases;
  std::string out_dir = ".";
};

GeneratorSpec default_generator_spec() {
  GeneratorSpec gs;
  gs.seed = 1;
  gs.case_count = 100;
  gs.start_time = *parse_iso8601("2024-01-01T09:00:00.000Z");
  gs.arrival.kind = "poisson";
  gs.arrival.rate_per_hour = 2.0;
  PathSpec p;
  p.name = "main";
  p.weight = 1.0;
  p.activities = {
      {"receive", {"exponential", 30, 20, 10, 60, 3.0, 0.5}},
      {"review", {"lognormal", 30, 30, 10, 60, 3.2, 0.4}},
      {"decide", {"fixed", 15, 30, 10, 60, 3.0, 0.5}},
  };
  gs.paths.push_back(std::move(p));
  gs.resources_per_activity = 2;
  gs.lifecycle = true;
  return gs;
}

int cmd_synth(const SynthArgs& args) {
  GeneratorSpec gs = args.spec_path.empty()
                         ? default_generator_spec()
                         : generator_spec_from_json(read_file(args.spec_path));
  if (args.seed) gs.seed = *args.seed;
  if (args.cases) gs.case_count = *args.cases;

  const GeneratedLog gl = generate_log(gs);
  const fs::path out_dir(args.out_dir);
  write_file(out_dir / "log.csv", gl.csv);
  write_file(out_dir / "truth.json", gl.truth_json);
  return 0;
}

// ---- driver ----------------------------------------------------------------

void print_error(const Error& e) {
  json j;
  j["error"]["code"] = to_string(e.code());
  j["error"]["message"] = e.what();
  if (!e.details().empty()) {
    json d = json::object();
    for (const auto& [k, v] : e.details()) d[k] = v;
    j["error"]["details"] = d;
  }
  std::fputs((j.dump() + "\n").c_str(), stderr);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Frequency-domain business process productivity toolkit"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  long long an_epoch = 0;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Spectral summary of a log's main paths");
  analyze->add_option("--log", an.log_path, "Event log CSV")->required();
  analyze->add_option("--paths", an.paths_flag,
                      "INITIAL:FINAL pairs, comma separated")->required();
  analyze->add_option("--log-after", an.log_after, "Post-change log CSV");
  analyze->add_option("--paths-after", an.paths_after,
                      "Pairs for the post-change log (default: --paths)");
  analyze->add_option("--pairing", an.pairing_flag,
                      "BEFORE=AFTER path-name pairs, comma separated");
  analyze->add_option("--ts", an.ts_text, "Sampling period override, e.g. 5m");
  analyze->add_option("--exclude", an.exclude_text,
                      "Activities to drop for the filtered variant");
  analyze->add_option("--window", an.window_text, "hann or rect");
  analyze->add_option("--out", an.out_dir, "Output directory");
  CLI::Option* an_epoch_opt =
      analyze->add_option("--epoch", an_epoch, "Fixed report timestamp");

  FitArgs ft;
  long long ft_epoch = 0;
  CLI::App* fit = app.add_subcommand(
      "fit", "Fit production parameters for one path or activity");
  fit->add_option("--log", ft.log_path, "Event log CSV")->required();
  fit->add_option("--paths", ft.paths_flag, "One INITIAL:FINAL pair");
  fit->add_option("--activity", ft.activity, "Single activity selector");
  fit->add_option("--ts", ft.ts_text, "Sampling period override");
  fit->add_option("--out", ft.out_dir, "Output directory");
  CLI::Option* ft_epoch_opt =
      fit->add_option("--epoch", ft_epoch, "Fixed report timestamp");

  StabilityArgs st;
  long long st_epoch = 0;
  CLI::App* stability = app.add_subcommand(
      "stability", "Closed-loop metric poles, zeros and resonance");
  stability->add_option("--tau", st.tau, "Metric time constant in samples");
  stability->add_option("--r0", st.r0, "Steady-state accuracy");
  stability->add_option("--kappa", st.kappa, "Frequency shift for line check");
  stability->add_option("--fm", st.fm, "Base modulation frequency");
  stability->add_option("--ts", st.ts_text,
                        "Sampling period for physical units");
  stability->add_option("--out", st.out_dir, "Output directory");
  CLI::Option* st_epoch_opt =
      stability->add_option("--epoch", st_epoch, "Fixed report timestamp");

  SimArgs sim;
  long long sim_epoch = 0;
  std::size_t sim_horizon = 0;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Run a task network over input signals");
  simulate_cmd->add_option("--network", sim.network_path, "Network JSON")
      ->required();
  simulate_cmd->add_option("--inputs-dir", sim.inputs_dir,
                           "Directory of per-task bin_index,L,K files");
  simulate_cmd->add_option("--log", sim.log_path,
                           "Event log supplying L and K channels");
  simulate_cmd->add_option("--ts", sim.ts_text, "Sampling period override");
  CLI::Option* sim_horizon_opt =
      simulate_cmd->add_option("--horizon", sim_horizon, "Bins to simulate");
  simulate_cmd->add_option("--format", sim.format, "json, csv or markdown");
  simulate_cmd->add_option("--out", sim.out_dir, "Output directory");
  CLI::Option* sim_epoch_opt =
      simulate_cmd->add_option("--epoch", sim_epoch, "Fixed report timestamp");

  SimArgs wi;
  long long wi_epoch = 0;
  std::size_t wi_horizon = 0;
  double wi_kappa = 0.0, wi_fm = 0.0, wi_tau = 0.0, wi_r0 = 0.0;
  CLI::App* whatif =
      app.add_subcommand("whatif", "Baseline vs edited network comparison");
  whatif->add_option("--network", wi.network_path, "Network JSON")->required();
  whatif->add_option("--inputs-dir", wi.inputs_dir,
                     "Directory of per-task bin_index,L,K files");
  whatif->add_option("--log", wi.log_path,
                     "Event log supplying L and K channels");
  whatif->add_option("--ts", wi.ts_text, "Sampling period override");
  CLI::Option* wi_horizon_opt =
      whatif->add_option("--horizon", wi_horizon, "Bins to simulate");
  whatif->add_option("--task", wi.task, "Task to edit")->required();
  whatif->add_option("--kind", wi.kind_text,
                     "Initial, NonAutomated or Automated");
  CLI::Option* wi_kappa_opt =
      whatif->add_option("--kappa", wi_kappa, "Frequency shift");
  CLI::Option* wi_fm_opt = whatif->add_option(
      "--fm", wi_fm, "Base modulation frequency (default: baseline centroid)");
  CLI::Option* wi_tau_opt =
      whatif->add_option("--tau", wi_tau, "Metric time constant");
  CLI::Option* wi_r0_opt =
      whatif->add_option("--r0", wi_r0, "Steady-state accuracy");
  whatif->add_option("--format", wi.format, "json, csv or markdown");
  whatif->add_option("--out", wi.out_dir, "Output directory");
  CLI::Option* wi_epoch_opt =
      whatif->add_option("--epoch", wi_epoch, "Fixed report timestamp");

  SynthArgs sy;
  std::uint64_t sy_seed = 0;
  std::size_t sy_cases = 0;
  CLI::App* synth =
      app.add_subcommand("synth", "Generate a deterministic synthetic log");
  synth->add_option("--spec", sy.spec_path, "Generator spec JSON");
  CLI::Option* sy_seed_opt = synth->add_option("--seed", sy_seed, "RNG seed");
  CLI::Option* sy_cases_opt =
      synth->add_option("--cases", sy_cases, "Case count");
  synth->add_option("--out", sy.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    Error err(ErrorCode::UsageError, e.what());
    print_error(err);
    return 2;
  }

  try {
    if (*analyze) {
      if (*an_epoch_opt) an.epoch = an_epoch;
      return cmd_analyze(an);
    }
    if (*fit) {
      if (*ft_epoch_opt) ft.epoch = ft_epoch;
      return cmd_fit(ft);
    }
    if (*stability) {
      if (*st_epoch_opt) st.epoch = st_epoch;
      return cmd_stability(st);
    }
    if (*simulate_cmd) {
      if (*sim_epoch_opt) sim.epoch = sim_epoch;
      if (*sim_horizon_opt) sim.horizon = sim_horizon;
      return cmd_simulate(sim);
    }
    if (*whatif) {
      if (*wi_epoch_opt) wi.epoch = wi_epoch;
      if (*wi_horizon_opt) wi.horizon = wi_horizon;
      if (*wi_kappa_opt) wi.kappa = wi_kappa;
      if (*wi_fm_opt) wi.fm = wi_fm;
      if (*wi_tau_opt) wi.tau = wi_tau;
      if (*wi_r0_opt) wi.r0 = wi_r0;
      return cmd_whatif(wi);
    }
    if (*synth) {
      if (*sy_seed_opt) sy.seed = sy_seed;
      if (*sy_cases_opt) sy.cases = sy_cases;
      return cmd_synth(sy);
    }
  } catch (const Error& e) {
    print_error(e);
    return e.code() == ErrorCode::UsageError ? 2 : 1;
  } catch (const std::exception& e) {
    Error err(ErrorCode::DomainError, e.what());
    print_error(err);
    return 1;
  }
  return 2;
}

}  // namespace prodfreq::cli
