#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "prodfreq/econ.hpp"
#include "prodfreq/signal.hpp"

namespace prodfreq {

enum class TaskKind { Initial, NonAutomated, Automated };

// Steady-state accuracy R_o in (0, 1] (0 allowed as the degenerate no-metric
// limit) and learning time constant tau in samples.
struct MetricConfig {
  double r_o = 0.99;
  double tau = 20.0;
};

struct AutomationParams {
  double kappa = 0.0;  // relative frequency shift, > -1
  double f_m = 0.0;    // modulation base frequency, cycles/sample
  std::optional<MetricConfig> metric;
};

struct TaskModel {
  std::string name;
  TaskKind kind = TaskKind::NonAutomated;
  CobbDouglasFit fit;          // ln_A, alpha
  double gate_constant = 0.0;  // C; conventionally the fitted ln_A
  std::optional<AutomationParams> automation;
};

// A log-scale bin value together with its productive/idle flag. `value` is
// meaningful only when `on` is true.
struct GatedValue {
  double value = 0.0;
  bool on = false;
};

// ---- single-bin task equations ---------------------------------------------

// Technology level a[n]: C when the task's input gates are satisfied
// (Initial: L and K on; NonAutomated/Automated: L, K and upstream on),
// 0 otherwise.
double technology_gate(const GatedValue& l, const GatedValue& k,
                       const std::optional<GatedValue>& y_i, double c_gate,
                       TaskKind kind);

// Initial task: a + (1-alpha)l + alpha*k when both inputs on, else 0.
double initial_task_step(const GatedValue& l, const GatedValue& k,
                         const TaskModel& model);

// Non-automated task: 0.5*(a + (1-alpha)l + alpha*k + y_i) when all three
// inputs on, else y_i unchanged.
double non_automated_task_step(const GatedValue& l, const GatedValue& k,
                               const GatedValue& y_i, const TaskModel& model);

// ---- amplitude modulation ---------------------------------------------------

// Raised-cosine carrier 0.5*(1 + cos(2*omega_c*n)); n = 0 is the first bin.
double carrier(std::int64_t n, double omega_c);

// omega_c = 2*pi*(1+kappa)*f_m. Errors when (1+kappa)*f_m <= 0; warns via the
// diagnostic log when the modulated line 2*omega_c exceeds pi (it aliases).
double make_omega_c(double kappa, double f_m);

// Automated task without the metric loop: the non-automated value times the
// carrier when gates are open, else y_i unchanged.
double automated_task_step(const GatedValue& l, const GatedValue& k,
                           const GatedValue& y_i, std::int64_t n,
                           const TaskModel& model);

// ---- whole-signal evaluation ------------------------------------------------
// Inputs are log-scale signals with gates. Output gates: open bins are on;
// passthrough bins inherit the upstream gate (Initial: off).

ProductionSignal run_initial_task(const ProductionSignal& l,
                                  const ProductionSignal& k,
                                  const TaskModel& model);

ProductionSignal run_non_automated_task(const ProductionSignal& l,
                                        const ProductionSignal& k,
                                        const ProductionSignal& y_i,
                                        const TaskModel& model);

// Applies the carrier and, when the model carries a metric, the closed-loop
// accuracy filter between the averaging sum and the carrier product.
ProductionSignal run_automated_task(const ProductionSignal& l,
                                    const ProductionSignal& k,
                                    const ProductionSignal& y_i,
                                    const TaskModel& model);

}  // namespace prodfreq
