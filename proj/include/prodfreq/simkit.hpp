#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prodfreq/control.hpp"
#include "prodfreq/ltitasks.hpp"
#include "prodfreq/spectral.hpp"

namespace prodfreq {

// ---- network definition -----------------------------------------------------

struct NetworkEdge {
  std::string from;
  std::string to;
  std::size_t delay = 0;  // transport delay in samples; default none
};

struct BPNetwork {
  std::map<std::string, TaskModel> tasks;
  std::vector<NetworkEdge> edges;
  // Named main paths, each an ordered task list starting at the entry.
  std::vector<std::pair<std::string, std::vector<std::string>>> paths;
  std::string entry;
};

// JSON schema in docs/formats.md. Validation: DAG (cycle -> TopologyError),
// exactly one Initial task and it is the entry, Automated tasks carry
// automation parameters, path tasks exist (SchemaError otherwise).
BPNetwork load_network(const std::string& json_text);
std::string network_to_json(const BPNetwork& network);

// ---- simulation -------------------------------------------------------------

// Per-task exogenous channels, linear scale; converted to gated log signals
// internally.
struct TaskInputs {
  ProductionSignal labour;
  ProductionSignal capital;
};

struct TaskStability {
  std::string task;
  bool stable = false;
  double max_pole_magnitude = 0.0;
  std::optional<double> resonance_rad;
  // Modulated line 2*omega_c folded into [0, pi], for proximity checks.
  double folded_line_rad = 0.0;
  bool resonance_proximity = false;
};

struct SimulationRun {
  std::size_t horizon = 0;
  // Topological evaluation order actually used (deterministic).
  std::vector<std::string> task_order;
  std::map<std::string, ProductionSignal> outputs;  // log scale, gated
  std::map<std::string, SpectrumSummary> task_spectra;
  std::map<std::string, SpectrumSummary> path_spectra;  // terminal task output
  std::vector<TaskStability> stability;
  std::map<std::string, double> gate_open_fraction;
};

// Topological order; fan-in merges predecessors by equal-weight geometric
// composition; fan-out duplicates. Horizon defaults to the common input
// length; inputs shorter than the horizon -> InputError; mismatched sample
// periods -> UnitError.
SimulationRun simulate(const BPNetwork& network,
                       const std::map<std::string, TaskInputs>& inputs,
                       std::optional<std::size_t> horizon = std::nullopt);

// ---- what-if ----------------------------------------------------------------

struct WhatIfEdit {
  std::string task;
  TaskKind new_kind = TaskKind::Automated;
  std::optional<double> kappa;
  std::optional<double> f_m;  // default: baseline centroid of the task output
  std::optional<MetricConfig> metric;
};

struct WhatIfResult {
  SimulationRun baseline;
  SimulationRun edited;
  BPNetwork edited_network;
  std::vector<ComparisonRow> kappa_rows;  // per path, baseline vs edited
};

WhatIfResult what_if(const BPNetwork& network,
                     const std::map<std::string, TaskInputs>& inputs,
                     const WhatIfEdit& edit,
                     std::optional<std::size_t> horizon = std::nullopt);

// ---- reporting --------------------------------------------------------------

enum class ReportFormat { Json, Csv, Markdown };

struct ReportOptions {
  ReportFormat format = ReportFormat::Json;
  // Fixed timestamp in Unix seconds. When set it replaces the wall-clock
  // generated_at stamp so repeated runs are byte-identical.
  std::optional<long long> epoch;
};

std::string report(const SimulationRun& run, const ReportOptions& options);

}  // namespace prodfreq
