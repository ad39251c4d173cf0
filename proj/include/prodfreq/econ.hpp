#pragma once

#include <span>
#include <vector>

#include "prodfreq/signal.hpp"

namespace prodfreq {

// Production-function parameters on the log scale:
//   y = ln_A + (1-alpha)*l + alpha*k
struct CobbDouglasFit {
  double ln_A = 0.0;
  double alpha = 0.0;
  double residual_rms = 0.0;
  int n_points = 0;
  bool clamped = false;  // alpha was pulled back into [0, 1]
};

// OLS on the reduced form (y - l) = ln_A + alpha*(k - l), gated bins excluded.
// Fewer than 2 usable bins -> InsufficientData; k - l constant across usable
// bins -> UnidentifiableAlpha (message carries the identifiable intercept).
CobbDouglasFit fit_cobb_douglas(const ProductionSignal& y,
                                const ProductionSignal& l,
                                const ProductionSignal& k);

struct CompositionWeights {
  double q = 1.0;                 // scale factor, ln q enters the log sum
  std::vector<double> lambdas;    // must sum to 1 within 1e-12
};

// Log-scale geometric composition: ln q + sum_j lambda_j * x_j.
double compose_geometric(std::span<const double> log_inputs,
                         const CompositionWeights& weights);

// Two-input convenience with equal weights and q = 1.
double compose_geometric(double y_a, double y_i);

// (tp + tn) / (tp + tn + fp + fn); all-zero confusion -> UndefinedMetric.
double accuracy_from_confusion(long long tp, long long tn, long long fp,
                               long long fn);

}  // namespace prodfreq
