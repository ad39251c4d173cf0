#include "prodfreq/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "prodfreq/errors.hpp"
#include "prodfreq/log.hpp"

namespace prodfreq {

using nlohmann::json;

// ---- network definition ----------------------------------------------------

namespace {

TaskKind parse_kind(const std::string& s) {
  if (s == "Initial") return TaskKind::Initial;
  if (s == "NonAutomated") return TaskKind::NonAutomated;
  if (s == "Automated") return TaskKind::Automated;
  throw Error(ErrorCode::SchemaError, "unknown task kind: " + s);
}

const char* kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::Initial: return "Initial";
    case TaskKind::NonAutomated: return "NonAutomated";
    case TaskKind::Automated: return "Automated";
  }
  return "?";
}

std::vector<std::string> topological_order(const BPNetwork& net) {
  std::map<std::string, std::set<std::string>> succ;
  std::map<std::string, int> indeg;
  for (const auto& [name, task] : net.tasks) indeg[name] = 0;
  for (const auto& e : net.edges) {
    if (succ[e.from].insert(e.to).second) ++indeg[e.to];
  }
  std::set<std::string> ready;
  for (const auto& [name, d] : indeg)
    if (d == 0) ready.insert(name);
  std::vector<std::string> order;
  while (!ready.empty()) {
    const std::string n = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(n);
    for (const auto& s : succ[n])
      if (--indeg[s] == 0) ready.insert(s);
  }
  if (order.size() != net.tasks.size())
    throw Error(ErrorCode::TopologyError, "task graph contains a cycle");
  return order;
}

void validate_network(const BPNetwork& net) {
  if (net.tasks.empty())
    throw Error(ErrorCode::SchemaError, "network has no tasks");
  for (const auto& e : net.edges) {
    if (!net.tasks.count(e.from) || !net.tasks.count(e.to))
      throw Error(ErrorCode::SchemaError,
                  "edge references unknown task: " + e.from + " -> " + e.to);
  }

  std::vector<std::string> initials;
  for (const auto& [name, task] : net.tasks)
    if (task.kind == TaskKind::Initial) initials.push_back(name);
  if (initials.size() != 1)
    throw Error(ErrorCode::SchemaError,
                "network must declare exactly one Initial task, found " +
                    std::to_string(initials.size()));
  if (net.entry != initials.front())
    throw Error(ErrorCode::SchemaError,
                "entry task must be the Initial task");

  std::map<std::string, int> indeg;
  for (const auto& [name, task] : net.tasks) indeg[name] = 0;
  for (const auto& e : net.edges) ++indeg[e.to];
  for (const auto& [name, task] : net.tasks) {
    if (task.kind != TaskKind::Initial && indeg[name] == 0)
      throw Error(ErrorCode::TopologyError,
                  "task '" + name + "' has no upstream input");
    if (task.kind == TaskKind::Automated && !task.automation)
      throw Error(ErrorCode::SchemaError,
                  "automated task '" + name + "' lacks automation parameters");
  }

  topological_order(net);  // raises on cycles

  std::set<std::pair<std::string, std::string>> edge_set;
  for (const auto& e : net.edges) edge_set.insert({e.from, e.to});
  for (const auto& [pname, tasks] : net.paths) {
    if (tasks.empty())
      throw Error(ErrorCode::SchemaError, "path '" + pname + "' is empty");
    if (tasks.front() != net.entry)
      throw Error(ErrorCode::SchemaError,
                  "path '" + pname + "' does not start at the entry task");
    for (const auto& t : tasks)
      if (!net.tasks.count(t))
        throw Error(ErrorCode::SchemaError,
                    "path '" + pname + "' references unknown task: " + t);
    for (std::size_t i = 0; i + 1 < tasks.size(); ++i)
      if (!edge_set.count({tasks[i], tasks[i + 1]}))
        throw Error(ErrorCode::SchemaError,
                    "path '" + pname + "' uses a missing edge: " + tasks[i] +
                        " -> " + tasks[i + 1]);
  }
}

}  // namespace

BPNetwork load_network(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError,
                std::string("network is not valid JSON: ") + e.what());
  }

  BPNetwork net;
  try {
    if (!j.contains("tasks") || !j["tasks"].is_object())
      throw Error(ErrorCode::SchemaError, "network needs a tasks object");
    for (const auto& [name, tj] : j["tasks"].items()) {
      TaskModel t;
      t.name = name;
      t.kind = parse_kind(tj.value("kind", std::string("NonAutomated")));
      t.fit.ln_A = tj.value("ln_A", 0.0);
      t.fit.alpha = tj.value("alpha", 0.0);
      if (t.fit.alpha < 0.0 || t.fit.alpha > 1.0)
        throw Error(ErrorCode::SchemaError,
                    "task '" + name + "' has alpha outside [0, 1]");
      t.gate_constant = tj.value("C", t.fit.ln_A);
      if (tj.contains("automation")) {
        const json& aj = tj["automation"];
        AutomationParams ap;
        ap.kappa = aj.value("kappa", 0.0);
        ap.f_m = aj.value("f_m", 0.0);
        if (aj.contains("metric")) {
          MetricConfig m;
          m.r_o = aj["metric"].value("r_o", 0.99);
          m.tau = aj["metric"].value("tau", 20.0);
          ap.metric = m;
        }
        t.automation = ap;
      }
      net.tasks[name] = std::move(t);
    }
    if (j.contains("edges")) {
      for (const json& ej : j["edges"]) {
        NetworkEdge e;
        if (ej.is_array()) {
          e.from = ej.at(0).get<std::string>();
          e.to = ej.at(1).get<std::string>();
        } else {
          e.from = ej.at("from").get<std::string>();
          e.to = ej.at("to").get<std::string>();
          e.delay = ej.value("delay", std::size_t{0});
        }
        net.edges.push_back(std::move(e));
      }
    }
    if (j.contains("entry")) {
      net.entry = j["entry"].get<std::string>();
    } else {
      for (const auto& [name, task] : net.tasks)
        if (task.kind == TaskKind::Initial) net.entry = name;
    }
    if (j.contains("paths")) {
      std::vector<std::string> names;
      for (const auto& [pname, pj] : j["paths"].items()) names.push_back(pname);
      std::sort(names.begin(), names.end());
      for (const auto& pname : names) {
        std::vector<std::string> tasks;
        for (const json& t : j["paths"][pname])
          tasks.push_back(t.get<std::string>());
        net.paths.emplace_back(pname, std::move(tasks));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError,
                std::string("network field error: ") + e.what());
  }

  validate_network(net);
  return net;
}

std::string network_to_json(const BPNetwork& net) {
  json j;
  j["entry"] = net.entry;
  json tasks = json::object();
  for (const auto& [name, t] : net.tasks) {
    json tj;
    tj["kind"] = kind_name(t.kind);
    tj["ln_A"] = t.fit.ln_A;
    tj["alpha"] = t.fit.alpha;
    tj["C"] = t.gate_constant;
    if (t.automation) {
      json aj;
      aj["kappa"] = t.automation->kappa;
      aj["f_m"] = t.automation->f_m;
      if (t.automation->metric) {
        aj["metric"] = {{"r_o", t.automation->metric->r_o},
                        {"tau", t.automation->metric->tau}};
      }
      tj["automation"] = aj;
    }
    tasks[name] = tj;
  }
  j["tasks"] = tasks;
  json edges = json::array();
  for (const auto& e : net.edges) {
    if (e.delay == 0)
      edges.push_back(json::array({e.from, e.to}));
    else
      edges.push_back({{"from", e.from}, {"to", e.to}, {"delay", e.delay}});
  }
  j["edges"] = edges;
  json paths = json::object();
  for (const auto& [pname, tasks_list] : net.paths) paths[pname] = tasks_list;
  j["paths"] = paths;
  return j.dump(2) + "\n";
}

// ---- simulation ------------------------------------------------------------

namespace {

ProductionSignal delay_signal(const ProductionSignal& s, std::size_t d) {
  if (d == 0) return s;
  ProductionSignal out = s;
  out.values.assign(s.size(), 0.0);
  out.gates.assign(s.size(), 0);
  for (std::size_t i = d; i < s.size(); ++i) {
    out.values[i] = s.values[i - d];
    out.gates[i] = s.gates.empty() ? 1 : s.gates[i - d];
  }
  return out;
}

// Equal-weight geometric merge of predecessor outputs; the merged gate is on
// only where every predecessor is on.
ProductionSignal merge_inputs(const std::vector<ProductionSignal>& preds) {
  if (preds.size() == 1) return preds.front();
  ProductionSignal out = preds.front();
  const double w = 1.0 / static_cast<double>(preds.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    bool on = true;
    double acc = 0.0;
    for (const auto& p : preds) {
      const bool pon = p.gates.empty() ? true : p.gates[i] != 0;
      on = on && pon;
      acc += w * p.values[i];
    }
    out.values[i] = on ? acc : 0.0;
    out.gates[i] = on ? 1 : 0;
  }
  out.label = "merged";
  return out;
}

double fold_to_halfband(double omega) {
  double m = std::fmod(omega, 2.0 * M_PI);
  if (m < 0.0) m += 2.0 * M_PI;
  return m > M_PI ? 2.0 * M_PI - m : m;
}

ProductionSignal truncate_signal(const ProductionSignal& s, std::size_t n) {
  ProductionSignal out = s;
  out.values.resize(n);
  if (!out.gates.empty()) out.gates.resize(n);
  return out;
}

}  // namespace

SimulationRun simulate(const BPNetwork& network,
                       const std::map<std::string, TaskInputs>& inputs,
                       std::optional<std::size_t> horizon) {
  validate_network(network);

  // Establish the horizon and check input consistency.
  std::size_t h = horizon.value_or(0);
  bool h_known = horizon.has_value();
  Duration ts{0};
  bool ts_known = false;
  for (const auto& [name, task] : network.tasks) {
    const auto it = inputs.find(name);
    if (it == inputs.end())
      throw Error(ErrorCode::InputError,
                  "no input signals for task '" + name + "'");
    const auto& in = it->second;
    if (in.labour.size() != in.capital.size())
      throw Error(ErrorCode::InputError,
                  "labour/capital lengths differ for task '" + name + "'");
    if (!h_known) {
      h = in.labour.size();
      h_known = true;
    } else if (in.labour.size() < h) {
      throw Error(ErrorCode::InputError,
                  "input for task '" + name + "' is shorter than the horizon");
    }
    if (!ts_known) {
      ts = in.labour.sample_period;
      ts_known = true;
    } else if (in.labour.sample_period != ts) {
      throw Error(ErrorCode::UnitError,
                  "mismatched sample periods across task inputs");
    }
  }

  SimulationRun run;
  run.horizon = h;
  run.task_order = topological_order(network);

  std::map<std::string, std::vector<const NetworkEdge*>> in_edges;
  for (const auto& e : network.edges) in_edges[e.to].push_back(&e);

  for (const auto& name : run.task_order) {
    const TaskModel& model = network.tasks.at(name);
    const TaskInputs& raw = inputs.at(name);
    ProductionSignal l = to_log_scale(truncate_signal(raw.labour, h));
    ProductionSignal k = to_log_scale(truncate_signal(raw.capital, h));

    ProductionSignal out;
    if (model.kind == TaskKind::Initial) {
      out = run_initial_task(l, k, model);
    } else {
      std::vector<ProductionSignal> preds;
      for (const NetworkEdge* e : in_edges[name])
        preds.push_back(delay_signal(run.outputs.at(e->from), e->delay));
      const ProductionSignal y_i = merge_inputs(preds);
      out = model.kind == TaskKind::NonAutomated
                ? run_non_automated_task(l, k, y_i, model)
                : run_automated_task(l, k, y_i, model);
      double open = 0.0;
      for (std::size_t i = 0; i < h; ++i) {
        const bool gate = (l.gates[i] != 0) && (k.gates[i] != 0) &&
                          (y_i.gates.empty() || y_i.gates[i] != 0);
        open += gate ? 1.0 : 0.0;
      }
      if (h > 0)
        run.gate_open_fraction[name] = open / static_cast<double>(h);
    }
    if (model.kind == TaskKind::Initial && h > 0) {
      double open = 0.0;
      for (std::size_t i = 0; i < h; ++i)
        open += (l.gates[i] != 0 && k.gates[i] != 0) ? 1.0 : 0.0;
      run.gate_open_fraction[name] = open / static_cast<double>(h);
    }
    out.label = name;
    run.outputs[name] = std::move(out);
  }

  // Spectral summaries; horizons too short for a spectrum are left out.
  if (h >= 4) {
    for (const auto& [name, sig] : run.outputs)
      run.task_spectra[name] = spectrum(sig);
    for (const auto& [pname, tasks] : network.paths)
      run.path_spectra[pname] = run.task_spectra.at(tasks.back());
  }

  // Stability annotations for metric-equipped automated tasks.
  for (const auto& name : run.task_order) {
    const TaskModel& model = network.tasks.at(name);
    if (model.kind != TaskKind::Automated || !model.automation ||
        !model.automation->metric)
      continue;
    const StabilityReport rep =
        poles_zeros(closed_loop_tf(*model.automation->metric));
    TaskStability st;
    st.task = name;
    st.stable = rep.stable;
    st.max_pole_magnitude = rep.max_pole_magnitude;
    if (rep.resonance) st.resonance_rad = rep.resonance->rad_per_sample;
    const double omega_c =
        2.0 * M_PI * (1.0 + model.automation->kappa) * model.automation->f_m;
    st.folded_line_rad = fold_to_halfband(2.0 * omega_c);
    if (st.resonance_rad) {
      const double band = std::max(0.05, 0.05 * *st.resonance_rad);
      st.resonance_proximity =
          std::abs(st.folded_line_rad - *st.resonance_rad) <= band;
      if (st.resonance_proximity)
        log_warn("task '" + name +
                 "' modulated line sits near the metric resonance");
    }
    run.stability.push_back(std::move(st));
  }
  return run;
}

// ---- what-if ---------------------------------------------------------------

WhatIfResult what_if(const BPNetwork& network,
                     const std::map<std::string, TaskInputs>& inputs,
                     const WhatIfEdit& edit,
                     std::optional<std::size_t> horizon) {
  const auto task_it = network.tasks.find(edit.task);
  if (task_it == network.tasks.end())
    throw Error(ErrorCode::UnknownSelector,
                "what-if edit names unknown task: " + edit.task);
  if (edit.new_kind == TaskKind::Initial &&
      task_it->second.kind != TaskKind::Initial)
    throw Error(ErrorCode::SchemaError,
                "cannot convert a downstream task to Initial");

  WhatIfResult result;
  result.baseline = simulate(network, inputs, horizon);

  BPNetwork edited = network;
  TaskModel& t = edited.tasks.at(edit.task);
  t.kind = edit.new_kind;
  if (edit.new_kind == TaskKind::Automated) {
    AutomationParams ap;
    if (t.automation) ap = *t.automation;
    if (edit.kappa) ap.kappa = *edit.kappa;
    if (edit.f_m) {
      ap.f_m = *edit.f_m;
    } else if (ap.f_m <= 0.0) {
      // Default to the baseline spectral centroid of this task's output.
      const auto sp = result.baseline.task_spectra.find(edit.task);
      if (sp == result.baseline.task_spectra.end() || sp->second.f_m <= 0.0)
        throw Error(ErrorCode::ParameterError,
                    "cannot infer a modulation frequency for '" + edit.task +
                        "'; supply f_m explicitly");
      ap.f_m = sp->second.f_m;
    }
    if (edit.metric) ap.metric = *edit.metric;
    t.automation = ap;
  } else {
    t.automation.reset();
  }

  result.edited_network = edited;
  result.edited = simulate(edited, inputs, horizon);

  std::map<std::string, std::string> pairing;
  for (const auto& [pname, tasks] : network.paths) {
    const auto b = result.baseline.path_spectra.find(pname);
    if (b == result.baseline.path_spectra.end() || b->second.f_m <= 0.0) {
      log_warn("path '" + pname + "' has a degenerate baseline spectrum; "
               "no shift reported");
      continue;
    }
    pairing[pname] = pname;
  }
  if (!pairing.empty())
    result.kappa_rows = compare_logs(result.baseline.path_spectra,
                                     result.edited.path_spectra, pairing);
  return result;
}

// ---- reporting -------------------------------------------------------------

namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string report(const SimulationRun& run, const ReportOptions& options) {
  // Collect rows once; every format renders the same content.
  struct Row {
    std::string kind, name;
    double f_m = 0.0, f_0 = 0.0;
    bool have_spectrum = false;
    double gate_open = 0.0;
    bool have_gate = false;
  };
  std::vector<Row> rows;
  for (const auto& name : run.task_order) {
    Row r;
    r.kind = "task";
    r.name = name;
    const auto sp = run.task_spectra.find(name);
    if (sp != run.task_spectra.end()) {
      r.f_m = sp->second.f_m;
      r.f_0 = sp->second.f_0;
      r.have_spectrum = true;
    }
    const auto g = run.gate_open_fraction.find(name);
    if (g != run.gate_open_fraction.end()) {
      r.gate_open = g->second;
      r.have_gate = true;
    }
    // An empty run yields headers-only tables.
    if (r.have_spectrum || r.have_gate) rows.push_back(std::move(r));
  }
  for (const auto& [pname, sp] : run.path_spectra) {
    Row r;
    r.kind = "path";
    r.name = pname;
    r.f_m = sp.f_m;
    r.f_0 = sp.f_0;
    r.have_spectrum = true;
    rows.push_back(std::move(r));
  }

  if (options.format == ReportFormat::Json) {
    json j;
    j["horizon"] = run.horizon;
    j["task_order"] = run.task_order;
    json tasks = json::object();
    json paths = json::object();
    for (const Row& r : rows) {
      json e;
      if (r.have_spectrum) {
        e["f_m"] = r.f_m;
        e["f_0"] = r.f_0;
      }
      if (r.have_gate) e["gate_open_fraction"] = r.gate_open;
      (r.kind == "task" ? tasks : paths)[r.name] = e;
    }
    j["tasks"] = tasks;
    j["paths"] = paths;
    json st = json::array();
    for (const auto& s : run.stability) {
      json e;
      e["task"] = s.task;
      e["stable"] = s.stable;
      e["max_pole_magnitude"] = s.max_pole_magnitude;
      if (s.resonance_rad) e["resonance_rad_per_sample"] = *s.resonance_rad;
      e["modulated_line_rad_per_sample"] = s.folded_line_rad;
      e["resonance_proximity"] = s.resonance_proximity;
      st.push_back(e);
    }
    j["stability"] = st;
    if (options.epoch)
      j["epoch"] = *options.epoch;
    else
      j["generated_at"] = static_cast<long long>(std::time(nullptr));
    return j.dump(2) + "\n";
  }

  if (options.format == ReportFormat::Csv) {
    std::string out = "kind,name,f_m,f_0,gate_open_fraction\n";
    for (const Row& r : rows) {
      out += r.kind + "," + r.name + ",";
      out += r.have_spectrum ? fmt_num(r.f_m) : "";
      out += ",";
      out += r.have_spectrum ? fmt_num(r.f_0) : "";
      out += ",";
      out += r.have_gate ? fmt_num(r.gate_open) : "";
      out += "\n";
    }
    return out;
  }

  // Markdown
  std::ostringstream md;
  md << "# Simulation report\n\n";
  md << "Horizon: " << run.horizon << " samples\n\n";
  md << "| kind | name | f_m | f_0 | gate open |\n";
  md << "|------|------|-----|-----|-----------|\n";
  for (const Row& r : rows) {
    md << "| " << r.kind << " | " << r.name << " | "
       << (r.have_spectrum ? fmt_num(r.f_m) : "-") << " | "
       << (r.have_spectrum ? fmt_num(r.f_0) : "-") << " | "
       << (r.have_gate ? fmt_num(r.gate_open) : "-") << " |\n";
  }
  if (!run.stability.empty()) {
    md << "\n| task | stable | max pole | resonance (rad) | line (rad) | near "
          "resonance |\n";
    md << "|------|--------|----------|-----------------|------------|------"
          "-----------|\n";
    for (const auto& s : run.stability) {
      md << "| " << s.task << " | " << (s.stable ? "yes" : "no") << " | "
         << fmt_num(s.max_pole_magnitude) << " | "
         << (s.resonance_rad ? fmt_num(*s.resonance_rad) : "-") << " | "
         << fmt_num(s.folded_line_rad) << " | "
         << (s.resonance_proximity ? "yes" : "no") << " |\n";
    }
  }
  return md.str();
}

}  // namespace prodfreq
