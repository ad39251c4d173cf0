#include "prodfreq/signal.hpp"

#include <cmath>

#include "prodfreq/errors.hpp"

namespace prodfreq {

void validate_signal(const ProductionSignal& sig) {
  if (!sig.gates.empty() && sig.gates.size() != sig.values.size())
    throw Error(ErrorCode::DomainError,
                "signal gate vector length does not match values");
  for (double v : sig.values)
    if (!std::isfinite(v))
      throw Error(ErrorCode::DomainError, "signal contains non-finite value");
}

ProductionSignal to_log_scale(const ProductionSignal& sig) {
  validate_signal(sig);
  if (sig.scale == Scale::Log) return sig;
  ProductionSignal out;
  out.values.resize(sig.values.size());
  out.gates.resize(sig.values.size());
  out.sample_period = sig.sample_period;
  out.label = sig.label;
  out.scale = Scale::Log;
  for (std::size_t i = 0; i < sig.values.size(); ++i) {
    const double v = sig.values[i];
    if (v < 0.0)
      throw Error(ErrorCode::DomainError,
                  "negative value has no log-scale representation");
    if (v == 0.0) {
      out.values[i] = 0.0;
      out.gates[i] = 0;
    } else {
      out.values[i] = std::log(v);
      out.gates[i] = 1;
    }
  }
  return out;
}

ProductionSignal to_linear_scale(const ProductionSignal& sig) {
  validate_signal(sig);
  if (sig.scale == Scale::Linear) return sig;
  ProductionSignal out;
  out.values.resize(sig.values.size());
  out.gates.resize(sig.values.size());
  out.sample_period = sig.sample_period;
  out.label = sig.label;
  out.scale = Scale::Linear;
  for (std::size_t i = 0; i < sig.values.size(); ++i) {
    const bool on = sig.gates.empty() ? true : sig.gates[i] != 0;
    out.values[i] = on ? std::exp(sig.values[i]) : 0.0;
    out.gates[i] = on ? 1 : 0;
  }
  return out;
}

}  // namespace prodfreq
