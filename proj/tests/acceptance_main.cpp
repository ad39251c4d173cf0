// Acceptance gate: one criterion per section, one PASS/FAIL/SKIP line each.
// Tolerances are pinned here on purpose; loosening them is a contract change.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "prodfreq/cli.hpp"
#include "prodfreq/control.hpp"
#include "prodfreq/econ.hpp"
#include "prodfreq/eventlog.hpp"
#include "prodfreq/ltitasks.hpp"
#include "prodfreq/signal.hpp"
#include "prodfreq/simkit.hpp"
#include "prodfreq/spectral.hpp"
#include "prodfreq/synth.hpp"

namespace fs = std::filesystem;
using namespace prodfreq;
using oracles::kPi;

namespace {

struct Outcome {
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double runtime_budget_ok(double elapsed, double budget, Outcome& o) {
  if (elapsed > budget) {
    o.pass = false;
    o.detail += " [over runtime budget " + fmt(budget) + " s]";
  }
  return elapsed;
}

// ---- 1. closed-loop identity -----------------------------------------------
// 1/(1 + G) rebuilt by polynomial algebra from the metric transfer function
// must match the closed form derived independently from e^{1/tau}, and the
// library's closed_loop_tf must match both. Normalized coefficients, 1e-12.

Outcome c1_closed_loop_identity() {
  Outcome o;
  std::mt19937_64 rng(20120417);
  std::uniform_real_distribution<double> draw_tau(1.0, 200.0);
  std::uniform_real_distribution<double> draw_r(1e-6, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double tau = trial == 0 ? 20.0 : draw_tau(rng);
    const double r_o = trial == 0 ? 1.0 : draw_r(rng);
    const MetricConfig m{r_o, tau};
    const double e = std::exp(1.0 / tau);

    // Closed form, normalized to a leading 1.
    const std::vector<double> num_ref = {1.0, -(e + 1.0) / e, 1.0 / e};
    const std::vector<double> den_ref = {1.0, ((e - 1.0) * r_o - (e + 1.0)) / e,
                                         1.0 / e};

    // Route A: feedback algebra on G = accuracy_tf.
    const TransferFunction g = accuracy_tf(m);
    std::vector<double> den_a = g.den;  // den_G + z-aligned num_G
    const std::size_t pad = g.den.size() - g.num.size();
    for (std::size_t i = 0; i < g.num.size(); ++i) den_a[pad + i] += g.num[i];
    const std::vector<double>& num_a = g.den;
    for (std::size_t i = 0; i < 3; ++i) {
      worst = std::max(worst, std::abs(num_a[i] / num_a[0] - num_ref[i]));
      worst = std::max(worst, std::abs(den_a[i] / num_a[0] - den_ref[i]));
    }

    // Route B: the library's closed-loop constructor.
    const TransferFunction h = closed_loop_tf(m);
    for (std::size_t i = 0; i < 3; ++i) {
      worst = std::max(worst, std::abs(h.num[i] / h.num[0] - num_ref[i]));
      worst = std::max(worst, std::abs(h.den[i] / h.num[0] - den_ref[i]));
    }
  }
  o.pass = worst < 1e-12;
  o.detail = "50 random metrics, max normalized coefficient deviation " +
             fmt(worst);
  return o;
}

// ---- 2. stability at the reference operating point -------------------------

Outcome c2_stability() {
  Outcome o;
  const TransferFunction h = closed_loop_tf({0.99, 20.0});
  const auto [m1, m2] = oracles::quadratic_root_magnitudes(
      h.den[1] / h.den[0], h.den[2] / h.den[0]);
  const double oracle_max = std::max(m1, m2);

  const StabilityReport rep = poles_zeros(h);
  const bool point_ok = std::abs(oracle_max - 0.9753) <= 1e-3 &&
                        std::abs(rep.max_pole_magnitude - oracle_max) <= 1e-9 &&
                        rep.stable;

  bool sweep_ok = true;
  double prev = -1.0;
  for (const double r_o : {0.5, 0.9, 0.99}) {
    const double mag =
        poles_zeros(closed_loop_tf({r_o, 20.0})).max_pole_magnitude;
    if (mag + 1e-12 < prev) sweep_ok = false;
    prev = mag;
  }

  o.pass = point_ok && sweep_ok;
  o.detail = "max |pole| " + fmt(rep.max_pole_magnitude) + " (oracle " +
             fmt(oracle_max) + "), R_o sweep " +
             (sweep_ok ? "nondecreasing" : "NOT nondecreasing");
  return o;
}

// ---- 3. resonance ------------------------------------------------------------

Outcome c3_resonance() {
  Outcome o;
  const TransferFunction h = closed_loop_tf({0.99, 20.0});
  const std::optional<double> wr = resonance_frequency(h);
  if (!wr) {
    o.detail = "no resonance found";
    return o;
  }
  const double paper_hz = 1.0 + *wr / (2.0 * kPi);
  const double rph = unit_convert(paper_hz, FreqUnit::HzPaper,
                                  FreqUnit::RequestsPerHour,
                                  std::chrono::minutes(5));
  o.pass = std::abs(paper_hz - 1.03) <= 0.05 && rph >= 11.5 && rph <= 13.0;
  o.detail = "omega_r " + fmt(*wr) + " rad -> " + fmt(paper_hz) +
             " sampling-referred Hz, " + fmt(rph) + " requests/hr at Ts=5min";
  return o;
}

// ---- 4. AM frequency shift ---------------------------------------------------

Outcome c4_am_shift() {
  Outcome o;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> draw_kappa(0.05, 0.9);
  std::uniform_real_distribution<double> draw_fm(0.01, 0.11);
  const std::size_t n = 256;

  auto const_signal = [&](double v) {
    ProductionSignal s;
    s.values.assign(n, v);
    s.gates.assign(n, 1);
    s.scale = Scale::Log;
    return s;
  };

  int worst_bin_err = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const double kappa_v = draw_kappa(rng);
    const double fm = draw_fm(rng);

    TaskModel model;
    model.name = "t";
    model.kind = TaskKind::Automated;
    model.fit.ln_A = 0.25;
    model.fit.alpha = 0.4;
    model.gate_constant = 0.25;
    model.automation = AutomationParams{kappa_v, fm, std::nullopt};

    const ProductionSignal out = run_automated_task(
        const_signal(0.7), const_signal(0.4), const_signal(0.6), model);
    const SpectrumSummary sp = spectrum(out, Window::Rect);
    const std::vector<double> brute = oracles::brute_one_sided(out.values);

    auto argmax_nondc = [](const std::vector<double>& mags) {
      std::size_t best = 1;
      for (std::size_t i = 2; i < mags.size(); ++i)
        if (mags[i] > mags[best]) best = i;
      return best;
    };
    const std::size_t lib_bin = argmax_nondc(sp.magnitudes);
    const std::size_t oracle_bin = argmax_nondc(brute);
    const double expected_cycles = oracles::fold_cycles(2.0 * (1.0 + kappa_v) * fm);
    const long expected_bin = std::lround(expected_cycles * n);
    const int bin_err =
        static_cast<int>(std::abs(static_cast<long>(lib_bin) - expected_bin));
    worst_bin_err = std::max(worst_bin_err, bin_err);

    if (lib_bin != oracle_bin || bin_err > 1 ||
        std::abs(sp.f_0 - static_cast<double>(lib_bin) / n) > 1e-12) {
      o.detail = "trial " + std::to_string(trial) + ": line at bin " +
                 std::to_string(lib_bin) + ", expected " +
                 std::to_string(expected_bin) + ", oracle " +
                 std::to_string(oracle_bin);
      return o;
    }
  }
  o.pass = true;
  o.detail = "20 random (kappa, f_m) draws, dominant line within " +
             std::to_string(worst_bin_err) + " bin of 2*omega_c, oracle agrees";
  return o;
}

// ---- 5. production-function recovery ----------------------------------------

Outcome c5_fit_recovery() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> draw_x(0.5, 3.0);

  auto make_signal = [](std::vector<double> v) {
    ProductionSignal s;
    s.gates.assign(v.size(), 1);
    s.values = std::move(v);
    s.scale = Scale::Log;
    return s;
  };

  double worst_clean = 0.0;
  const std::pair<double, double> truths[] = {
      {0.5, 0.3}, {-1.0, 0.75}, {2.0, 0.0}, {0.2, 1.0}};
  for (const auto& [ln_A, alpha] : truths) {
    std::vector<double> l(60), k(60), y(60);
    for (std::size_t i = 0; i < l.size(); ++i) {
      l[i] = draw_x(rng);
      k[i] = draw_x(rng);
      y[i] = ln_A + (1.0 - alpha) * l[i] + alpha * k[i];
    }
    const CobbDouglasFit f =
        fit_cobb_douglas(make_signal(y), make_signal(l), make_signal(k));
    worst_clean = std::max({worst_clean, std::abs(f.ln_A - ln_A),
                            std::abs(f.alpha - alpha)});
  }

  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> l(400), k(400), y(400);
  for (std::size_t i = 0; i < l.size(); ++i) {
    l[i] = draw_x(rng);
    k[i] = draw_x(rng);
    y[i] = 0.5 + 0.7 * l[i] + 0.3 * k[i] + noise(rng);
  }
  const CobbDouglasFit f =
      fit_cobb_douglas(make_signal(y), make_signal(l), make_signal(k));
  const oracles::GridFit g = oracles::grid_fit(y, l, k);
  const double truth_err =
      std::max(std::abs(f.ln_A - 0.5), std::abs(f.alpha - 0.3));
  const double oracle_err =
      std::max(std::abs(f.ln_A - g.ln_A), std::abs(f.alpha - g.alpha));

  o.pass = worst_clean <= 1e-6 && truth_err <= 0.02 && oracle_err <= 5e-3;
  o.detail = "noiseless max error " + fmt(worst_clean) +
             ", sigma=0.01 error vs truth " + fmt(truth_err) +
             ", vs grid oracle " + fmt(oracle_err);
  return o;
}

// ---- 6. LTI property suite ---------------------------------------------------

const char* kThreePathNetwork = R"({
  "entry": "A",
  "tasks": {
    "A": {"kind": "Initial", "ln_A": 0.3, "alpha": 0.4},
    "B": {"kind": "NonAutomated", "ln_A": 0.2, "alpha": 0.5},
    "C": {"kind": "NonAutomated", "ln_A": 0.1, "alpha": 0.6},
    "D": {"kind": "NonAutomated", "ln_A": 0.0, "alpha": 0.3}
  },
  "edges": [["A", "B"], ["A", "C"], ["A", "D"]],
  "paths": {"pb": ["A", "B"], "pc": ["A", "C"], "pd": ["A", "D"]}
})";

Outcome c6_lti_properties() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> draw_v(-2.0, 2.0);
  std::uniform_real_distribution<double> draw_c(-3.0, 3.0);

  // Single-step linearity with the technology term silenced.
  TaskModel lin;
  lin.kind = TaskKind::NonAutomated;
  lin.fit.ln_A = 0.0;
  lin.fit.alpha = 0.35;
  lin.gate_constant = 0.0;
  double worst_step = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const GatedValue l1{draw_v(rng), true}, k1{draw_v(rng), true},
        y1{draw_v(rng), true};
    const GatedValue l2{draw_v(rng), true}, k2{draw_v(rng), true},
        y2{draw_v(rng), true};
    const double sum = non_automated_task_step(
        {l1.value + l2.value, true}, {k1.value + k2.value, true},
        {y1.value + y2.value, true}, lin);
    const double parts = non_automated_task_step(l1, k1, y1, lin) +
                         non_automated_task_step(l2, k2, y2, lin);
    worst_step = std::max(worst_step, std::abs(sum - parts));

    const double c = draw_c(rng);
    const double scaled = non_automated_task_step(
        {c * l1.value, true}, {c * k1.value, true}, {c * y1.value, true}, lin);
    worst_step = std::max(
        worst_step,
        std::abs(scaled - c * non_automated_task_step(l1, k1, y1, lin)));
  }

  // Network invariants on a 3-path fan-out.
  const BPNetwork net = load_network(kThreePathNetwork);
  const std::size_t h = 64;
  const std::size_t quiet = 5;  // leading bins with all inputs off
  auto channel = [&](double base, double wobble, double phase) {
    ProductionSignal s;
    s.sample_period = Duration{60'000};
    s.values.resize(h);
    s.gates.assign(h, 1);
    for (std::size_t i = 0; i < h; ++i) {
      if (i < quiet) {
        s.values[i] = 0.0;
        s.gates[i] = 0;
      } else {
        s.values[i] =
            base + wobble * std::sin(0.37 * static_cast<double>(i) + phase);
      }
    }
    return s;
  };
  std::map<std::string, TaskInputs> inputs;
  int which = 0;
  for (const char* name : {"A", "B", "C", "D"}) {
    inputs[name] = TaskInputs{channel(2.0, 0.6, 0.3 * which),
                              channel(1.5, 0.4, 0.7 * which)};
    ++which;
  }
  const SimulationRun full = simulate(net, inputs, h);

  // Path-superposition: each branch alone reproduces its slice of the full run.
  double worst_branch = 0.0;
  for (const char* branch : {"B", "C", "D"}) {
    BPNetwork sub = net;
    std::erase_if(sub.edges,
                  [&](const NetworkEdge& e) { return e.to != std::string(branch); });
    std::erase_if(sub.paths, [&](const auto& p) {
      return p.second.back() != std::string(branch);
    });
    for (auto it = sub.tasks.begin(); it != sub.tasks.end();) {
      if (it->first != "A" && it->first != branch)
        it = sub.tasks.erase(it);
      else
        ++it;
    }
    std::map<std::string, TaskInputs> sub_inputs{{"A", inputs["A"]},
                                                 {branch, inputs[branch]}};
    const SimulationRun solo = simulate(sub, sub_inputs, h);
    for (std::size_t i = 0; i < h; ++i)
      worst_branch = std::max(
          worst_branch, std::abs(solo.outputs.at(branch).values[i] -
                                 full.outputs.at(branch).values[i]));
  }

  // Zero initial conditions: nothing moves before the inputs switch on.
  bool zero_ic = true;
  for (const auto& [name, sig] : full.outputs)
    for (std::size_t i = 0; i < quiet; ++i)
      if (sig.values[i] != 0.0 || sig.gates[i] != 0) zero_ic = false;

  // Horizon-prefix causality: a shorter run is an exact prefix.
  const SimulationRun half = simulate(net, inputs, h / 2);
  double worst_prefix = 0.0;
  for (const auto& [name, sig] : half.outputs)
    for (std::size_t i = 0; i < h / 2; ++i)
      worst_prefix = std::max(
          worst_prefix,
          std::abs(sig.values[i] - full.outputs.at(name).values[i]));

  o.pass = worst_step < 1e-12 && worst_branch < 1e-12 && zero_ic &&
           worst_prefix < 1e-12;
  o.detail = "step linearity " + fmt(worst_step) + ", branch isolation " +
             fmt(worst_branch) + ", prefix " + fmt(worst_prefix) +
             (zero_ic ? ", quiet prefix silent" : ", ZERO-IC VIOLATED");
  return o;
}

// ---- 7. sampling period ------------------------------------------------------

Outcome c7_sampling() {
  Outcome o;

  auto parse_csv = [](const std::string& csv) {
    std::istringstream in(csv);
    return parse_log(in).log;
  };
  const std::string header = "case_id,activity,timestamp,resource,lifecycle\n";

  // One case, two labour-hours: Ts = 2/(2*1) = 1 h, exact after flooring.
  const EventLog one = parse_csv(
      header +
      "c1,work,2024-01-01T09:00:00Z,r1,start\n"
      "c1,work,2024-01-01T11:00:00Z,r1,complete\n");
  const SamplingPeriod sp1 = compute_sampling_period(one);
  const bool hand1 = sp1.value == std::chrono::hours(1) &&
                     sp1.raw_seconds == 3600.0 && sp1.rounding == "floor_minute";

  // Non-round raw value floors to the minute: 101 min span -> 50.5 -> 50 min.
  const EventLog odd = parse_csv(
      header +
      "c1,work,2024-01-01T09:00:00Z,r1,start\n"
      "c1,work,2024-01-01T10:41:00Z,r1,complete\n");
  const SamplingPeriod sp2 = compute_sampling_period(odd);
  const bool hand2 = sp2.value == std::chrono::minutes(50);

  // Generated log shaped to 100 cases / 1000 labour-hours -> Ts = 5 h.
  GeneratorSpec gs;
  gs.seed = 11;
  gs.case_count = 100;
  gs.start_time = parse_iso8601("2024-01-01T08:00:00Z").value();
  gs.arrival = {"fixed", 0.0, 30.0};
  gs.paths = {{"main", 1.0, {{"work", {"fixed", 600.0}}}}};
  const GeneratedLog gen = generate_log(gs);
  const SamplingPeriod sp3 = compute_sampling_period(gen.log);
  const bool shaped = std::abs(total_labour_hours(gen.log) - 1000.0) < 1e-9 &&
                      sp3.value == std::chrono::hours(5);

  o.pass = hand1 && hand2 && shaped;
  o.detail = "hand cases " + std::string(hand1 && hand2 ? "exact" : "WRONG") +
             ", generated 100 cases/1000 h -> " +
             fmt(static_cast<double>(sp3.value.count()) / 3.6e6) + " h";
  return o;
}

// ---- 8. external process-log reproduction (optional) ------------------------

std::optional<std::string> locate(const char* env_name, const char* fallback) {
  if (const char* env = std::getenv(env_name); env && *env) return env;
  if (fs::exists(fallback)) return std::string(fallback);
  return std::nullopt;
}

Outcome c8_external_logs() {
  Outcome o;
  const auto path12 = locate("PRODFREQ_BPI2012_CSV", "data/bpi2012.csv");
  const auto path17 = locate("PRODFREQ_BPI2017_CSV", "data/bpi2017.csv");
  if (!path12 || !path17) {
    o.skipped = true;
    o.detail =
        "external logs not supplied (set PRODFREQ_BPI2012_CSV / "
        "PRODFREQ_BPI2017_CSV or place data/bpi2012.csv, data/bpi2017.csv)";
    return o;
  }

  const EventLog log12 = parse_log_file(*path12).log;
  const EventLog log17 = parse_log_file(*path17).log;

  const SamplingPeriod ts12 = compute_sampling_period(log12);
  const SamplingPeriod ts17 = compute_sampling_period(log17);
  const bool ts_ok = ts12.value == std::chrono::minutes(5) &&
                     ts17.value == std::chrono::minutes(5);

  const PathExtraction px12 = extract_main_paths(
      log12, "A_SUBMITTED", {"A_CANCELLED", "A_REGISTERED", "A_DECLINED"});
  const PathExtraction px17 = extract_main_paths(
      log17, "A_Create Application", {"A_Denied", "A_Pending", "A_Cancelled"});
  const bool paths_ok = px12.paths.size() == 3 && px17.paths.size() == 3;

  // Per-path shift of the task automated between the two log vintages.
  struct PairSpec {
    const char* label;
    const char* final12;
    const char* final17;
    double expected;  // reference improvement rate
  };
  const PairSpec pairs[] = {{"A", "A_CANCELLED", "A_Denied", -0.1152},
                            {"B", "A_REGISTERED", "A_Pending", 1.3917},
                            {"C", "A_DECLINED", "A_Cancelled", 1.1584}};
  auto find_path = [](const PathExtraction& px, const std::string& final_name)
      -> const MainPath* {
    for (const MainPath& p : px.paths)
      if (p.final_activity == final_name) return &p;
    return nullptr;
  };
  auto task_fm = [](const EventLog& log, const MainPath* path,
                    const std::string& activity, Duration ts) {
    SignalSelector sel;
    sel.activity = activity;
    sel.path = path;
    SamplingConfig cfg;
    cfg.sample_period = ts;
    return spectrum(sample_production(log, sel, cfg, Channel::Output)).f_m;
  };

  bool values_ok = ts_ok && paths_ok;
  std::vector<double> measured;
  std::string detail;
  for (const PairSpec& pr : pairs) {
    const MainPath* p12 = find_path(px12, pr.final12);
    const MainPath* p17 = find_path(px17, pr.final17);
    if (!p12 || !p17) {
      values_ok = false;
      continue;
    }
    const double f12 = task_fm(log12, p12, "A_PREACCEPTED", ts12.value);
    const double f17 = task_fm(log17, p17, "A_Concept", ts17.value);
    const double k = kappa(f12, f17);
    measured.push_back(k);
    detail += std::string(pr.label) + " " + fmt(k) + " (ref " +
              fmt(pr.expected) + ") ";
    if (std::abs(k - pr.expected) > 0.10) values_ok = false;
    if ((k < 0.0) != (pr.expected < 0.0)) values_ok = false;
  }
  // Ordering across paths must match the reference: B > C > A.
  if (measured.size() == 3 &&
      !(measured[1] > measured[2] && measured[2] > measured[0]))
    values_ok = false;

  o.pass = values_ok;
  o.detail = std::string(ts_ok ? "Ts=5min both" : "Ts MISMATCH") + ", " +
             std::to_string(px12.paths.size()) + "+" +
             std::to_string(px17.paths.size()) + " paths, kappa_m " + detail;
  return o;
}

// ---- 9. determinism ----------------------------------------------------------

int run_cli_args(const std::vector<std::string>& args) {
  std::vector<std::string> full{"prodfreq"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& s : full) argv.push_back(s.c_str());
  return cli::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c9_determinism() {
  Outcome o;
  const fs::path base =
      fs::temp_directory_path() / "prodfreq_acceptance_determinism";
  fs::remove_all(base);
  const fs::path shared = base / "shared";
  fs::create_directories(shared / "in");

  {
    std::ofstream net(shared / "net.json");
    net << kThreePathNetwork;
    for (const char* name : {"A", "B", "C", "D"}) {
      std::ofstream in(shared / "in" / (std::string(name) + ".csv"));
      in << "bin_index,L,K\n";
      for (int i = 0; i < 48; ++i) {
        char row[96];
        std::snprintf(row, sizeof row, "%d,%.6f,%.6f\n", i,
                      2.0 + 0.8 * std::sin(0.4 * i), 1.5 + 0.2 * std::cos(0.3 * i));
        in << row;
      }
    }
  }

  // analyze and fit record the consumed log path in their reports, so they
  // must read the same file in both rounds for the artifacts to be
  // byte-identical. Generate that log once up front; the per-round synth runs
  // below still exercise the generator's own determinism.
  int failures = 0;
  const std::string shared_log = (shared / "synth" / "log.csv").string();
  fs::create_directories(shared / "synth");
  if (run_cli_args({"synth", "--seed", "3", "--cases", "60", "--out",
                    (shared / "synth").string()}) != 0)
    ++failures;

  for (const char* round : {"r1", "r2"}) {
    const fs::path out = base / round;
    const std::string synth_dir = (out / "synth").string();
    const std::vector<std::vector<std::string>> invocations = {
        {"synth", "--seed", "3", "--cases", "60", "--out", synth_dir},
        {"analyze", "--log", shared_log, "--paths",
         "receive:decide", "--epoch", "0", "--out", (out / "analyze").string()},
        {"fit", "--log", shared_log, "--activity", "receive",
         "--epoch", "0", "--out", (out / "fit").string()},
        {"stability", "--tau", "20", "--r0", "0.99", "--fm", "0.02", "--ts",
         "5m", "--epoch", "0", "--out", (out / "stability").string()},
        {"simulate", "--network", (shared / "net.json").string(),
         "--inputs-dir", (shared / "in").string(), "--epoch", "0", "--out",
         (out / "simulate").string()},
        {"whatif", "--network", (shared / "net.json").string(), "--inputs-dir",
         (shared / "in").string(), "--task", "B", "--kind", "Automated",
         "--fm", "0.05", "--kappa", "0.2", "--epoch", "0", "--out",
         (out / "whatif").string()},
    };
    for (const auto& args : invocations) {
      fs::create_directories(fs::path(args.back()));
      if (run_cli_args(args) != 0) ++failures;
    }
  }

  std::size_t files = 0;
  std::size_t diffs = 0;
  for (const auto& entry : fs::recursive_directory_iterator(base / "r1")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const fs::path rel = fs::relative(entry.path(), base / "r1");
    const fs::path twin = base / "r2" / rel;
    if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) ++diffs;
  }
  fs::remove_all(base);

  o.pass = failures == 0 && diffs == 0 && files >= 10;
  o.detail = std::to_string(files) + " artifacts over 6 subcommands, " +
             std::to_string(diffs) + " byte differences, " +
             std::to_string(failures) + " nonzero exits";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    Outcome (*fn)();
    double budget_s;  // 0 = unbounded
  };
  const Criterion criteria[] = {
      {1, "closed-loop identity", c1_closed_loop_identity, 1.0},
      {2, "stability operating point", c2_stability, 1.0},
      {3, "resonance limit", c3_resonance, 1.0},
      {4, "AM frequency shift", c4_am_shift, 5.0},
      {5, "production-function recovery", c5_fit_recovery, 5.0},
      {6, "LTI property suite", c6_lti_properties, 5.0},
      {7, "sampling period", c7_sampling, 0.0},
      {8, "external log reproduction", c8_external_logs, 0.0},
      {9, "determinism", c9_determinism, 0.0},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("unexpected exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (c.budget_s > 0.0 && !o.skipped)
      runtime_budget_ok(elapsed, c.budget_s, o);
    const char* verdict = o.skipped ? "SKIP" : (o.pass ? "PASS" : "FAIL");
    if (!o.skipped && !o.pass) ++failed;
    std::printf("%s  %d  %-32s %s (%.3f s)\n", verdict, c.id, c.label,
                o.detail.c_str(), elapsed);
  }

  if (failed > 0) {
    std::printf("ACCEPTANCE: %d criterion(s) failed\n", failed);
    return 1;
  }
  std::printf("ACCEPTANCE: all criteria passed\n");
  return 0;
}
