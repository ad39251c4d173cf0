#include "prodfreq/ltitasks.hpp"

#include <cmath>
#include <string>

#include "prodfreq/control.hpp"
#include "prodfreq/errors.hpp"
#include "prodfreq/kernels.hpp"
#include "prodfreq/log.hpp"

namespace prodfreq {

double technology_gate(const GatedValue& l, const GatedValue& k,
                       const std::optional<GatedValue>& y_i, double c_gate,
                       TaskKind kind) {
  const bool inputs_on = l.on && k.on;
  if (kind == TaskKind::Initial) return inputs_on ? c_gate : 0.0;
  const bool upstream_on = y_i.has_value() && y_i->on;
  return inputs_on && upstream_on ? c_gate : 0.0;
}

double initial_task_step(const GatedValue& l, const GatedValue& k,
                         const TaskModel& model) {
  if (!(l.on && k.on)) return 0.0;
  const double alpha = model.fit.alpha;
  return model.gate_constant + (1.0 - alpha) * l.value + alpha * k.value;
}

double non_automated_task_step(const GatedValue& l, const GatedValue& k,
                               const GatedValue& y_i, const TaskModel& model) {
  if (!(l.on && k.on && y_i.on)) return y_i.value;
  const double alpha = model.fit.alpha;
  return 0.5 * (model.gate_constant + (1.0 - alpha) * l.value +
                alpha * k.value + y_i.value);
}

double carrier(std::int64_t n, double omega_c) {
  return 0.5 * (1.0 + std::cos(2.0 * omega_c * static_cast<double>(n)));
}

double make_omega_c(double kappa, double f_m) {
  const double shifted = (1.0 + kappa) * f_m;
  if (!(shifted > 0.0))
    throw Error(ErrorCode::ParameterError,
                "(1 + kappa) * f_m must be positive, got " +
                    std::to_string(shifted));
  const double omega_c = 2.0 * M_PI * shifted;
  if (2.0 * omega_c > M_PI)
    log_warn("modulated line 2*omega_c = " + std::to_string(2.0 * omega_c) +
             " rad/sample exceeds pi and will alias");
  return omega_c;
}

double automated_task_step(const GatedValue& l, const GatedValue& k,
                           const GatedValue& y_i, std::int64_t n,
                           const TaskModel& model) {
  if (!(l.on && k.on && y_i.on)) return y_i.value;
  if (!model.automation)
    throw Error(ErrorCode::ParameterError,
                "automated task lacks automation parameters");
  const double base = non_automated_task_step(l, k, y_i, model);
  const double omega_c =
      make_omega_c(model.automation->kappa, model.automation->f_m);
  return base * carrier(n, omega_c);
}

// ---- whole-signal evaluation ------------------------------------------------

namespace {

void require_log_scale(const ProductionSignal& s, const char* what) {
  if (s.scale != Scale::Log)
    throw Error(ErrorCode::DomainError,
                std::string(what) + " must be on the log scale");
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw Error(ErrorCode::DomainError,
                std::string("input length mismatch on ") + what);
}

std::uint8_t gate_at(const ProductionSignal& s, std::size_t i) {
  return s.gates.empty() ? 1 : s.gates[i];
}

std::vector<std::uint8_t> open_mask(const ProductionSignal& l,
                                    const ProductionSignal& k,
                                    const ProductionSignal* y_i) {
  std::vector<std::uint8_t> open(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    std::uint8_t o = gate_at(l, i) && gate_at(k, i);
    if (y_i) o = o && gate_at(*y_i, i);
    open[i] = o;
  }
  return open;
}

}  // namespace

ProductionSignal run_initial_task(const ProductionSignal& l,
                                  const ProductionSignal& k,
                                  const TaskModel& model) {
  require_log_scale(l, "labour");
  require_log_scale(k, "capital");
  require_same_length(l.size(), k.size(), "initial task");
  const auto open = open_mask(l, k, nullptr);
  ProductionSignal out;
  out.values.resize(l.size());
  out.gates = open;
  out.sample_period = l.sample_period;
  out.scale = Scale::Log;
  out.label = model.name;
  kernels::active().initial_step(l.values.data(), k.values.data(), open.data(),
                                 model.gate_constant, model.fit.alpha,
                                 out.values.data(), l.size());
  return out;
}

ProductionSignal run_non_automated_task(const ProductionSignal& l,
                                        const ProductionSignal& k,
                                        const ProductionSignal& y_i,
                                        const TaskModel& model) {
  require_log_scale(l, "labour");
  require_log_scale(k, "capital");
  require_log_scale(y_i, "upstream input");
  require_same_length(l.size(), k.size(), "non-automated task");
  require_same_length(l.size(), y_i.size(), "non-automated task");
  const auto open = open_mask(l, k, &y_i);
  ProductionSignal out;
  out.values.resize(l.size());
  out.gates.resize(l.size());
  out.sample_period = l.sample_period;
  out.scale = Scale::Log;
  out.label = model.name;
  kernels::active().nonauto_step(l.values.data(), k.values.data(),
                                 y_i.values.data(), open.data(),
                                 model.gate_constant, model.fit.alpha,
                                 out.values.data(), l.size());
  for (std::size_t i = 0; i < l.size(); ++i)
    out.gates[i] = open[i] ? 1 : gate_at(y_i, i);
  return out;
}

ProductionSignal run_automated_task(const ProductionSignal& l,
                                    const ProductionSignal& k,
                                    const ProductionSignal& y_i,
                                    const TaskModel& model) {
  if (!model.automation)
    throw Error(ErrorCode::ParameterError,
                "automated task lacks automation parameters");
  require_log_scale(l, "labour");
  require_log_scale(k, "capital");
  require_log_scale(y_i, "upstream input");
  require_same_length(l.size(), k.size(), "automated task");
  require_same_length(l.size(), y_i.size(), "automated task");
  const std::size_t n = l.size();
  const auto open = open_mask(l, k, &y_i);

  // Averaging sum; closed bins feed 0 into the filter/modulation chain (the
  // y_i passthrough is selected after modulation, not here).
  std::vector<double> base(n);
  kernels::active().nonauto_step(l.values.data(), k.values.data(),
                                 y_i.values.data(), open.data(),
                                 model.gate_constant, model.fit.alpha,
                                 base.data(), n);
  for (std::size_t i = 0; i < n; ++i)
    if (!open[i]) base[i] = 0.0;

  // Accuracy feedback applies between the averaging sum and the carrier.
  if (model.automation->metric) {
    const TransferFunction h = closed_loop_tf(*model.automation->metric);
    const std::vector<double> filtered = apply_filter(h, base);
    base = filtered;
  }

  const double omega_c =
      make_omega_c(model.automation->kappa, model.automation->f_m);
  std::vector<double> carr(n);
  for (std::size_t i = 0; i < n; ++i)
    carr[i] = carrier(static_cast<std::int64_t>(i), omega_c);

  ProductionSignal out;
  out.values.resize(n);
  out.gates.resize(n);
  out.sample_period = l.sample_period;
  out.scale = Scale::Log;
  out.label = model.name;
  kernels::active().am_select(base.data(), carr.data(), y_i.values.data(),
                              open.data(), out.values.data(), n);
  for (std::size_t i = 0; i < n; ++i)
    out.gates[i] = open[i] ? 1 : gate_at(y_i, i);
  return out;
}

}  // namespace prodfreq
