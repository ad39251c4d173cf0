#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "prodfreq/time.hpp"

namespace prodfreq {

enum class Scale { Linear, Log };

// Uniformly sampled per-bin channel. `gates[i]` records whether the bin is
// productive: on the linear scale it mirrors values[i] > 0, and it survives
// the log conversion so that a stored 0 can be told apart from ln(1) = 0.
struct ProductionSignal {
  std::vector<double> values;
  std::vector<std::uint8_t> gates;
  Duration sample_period{0};
  std::string label;
  Scale scale = Scale::Linear;

  std::size_t size() const { return values.size(); }
};

// v > 0 -> ln v with gate on; v == 0 -> 0 with gate off; v < 0 -> DomainError.
ProductionSignal to_log_scale(const ProductionSignal& sig);

// Inverse mapping: gate off -> 0, else exp(value).
ProductionSignal to_linear_scale(const ProductionSignal& sig);

// Throws DomainError on non-finite values or mismatched gate length.
void validate_signal(const ProductionSignal& sig);

}  // namespace prodfreq
