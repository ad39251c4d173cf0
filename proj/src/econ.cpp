#include "prodfreq/econ.hpp"

#include <cmath>
#include <string>

#include "prodfreq/errors.hpp"
#include "prodfreq/kernels.hpp"

namespace prodfreq {

CobbDouglasFit fit_cobb_douglas(const ProductionSignal& y,
                                const ProductionSignal& l,
                                const ProductionSignal& k) {
  if (y.scale != Scale::Log || l.scale != Scale::Log || k.scale != Scale::Log)
    throw Error(ErrorCode::DomainError, "fit expects log-scale signals");
  const std::size_t n = y.size();
  if (l.size() != n || k.size() != n)
    throw Error(ErrorCode::DomainError, "fit inputs must share one horizon");

  const auto on = [](const ProductionSignal& s, std::size_t i) {
    return s.gates.empty() || s.gates[i] != 0;
  };

  // Reduced form: (y - l) = ln_A + alpha * (k - l); gated bins are excluded.
  std::vector<double> u;  // k - l
  std::vector<double> v;  // y - l
  u.reserve(n);
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!on(y, i) || !on(l, i) || !on(k, i)) continue;
    u.push_back(k.values[i] - l.values[i]);
    v.push_back(y.values[i] - l.values[i]);
  }
  const auto m = u.size();
  if (m < 2)
    throw Error(ErrorCode::InsufficientData,
                "need at least 2 fully gated bins, have " + std::to_string(m));

  const auto& ops = kernels::active();
  const double md = static_cast<double>(m);
  const double su = ops.sum(u.data(), m);
  const double sv = ops.sum(v.data(), m);
  const double suu = ops.dot(u.data(), u.data(), m);
  const double suv = ops.dot(u.data(), v.data(), m);
  const double mean_u = su / md;
  const double mean_v = sv / md;
  const double var_u = suu / md - mean_u * mean_u;

  if (var_u <= 1e-24) {
    throw Error(ErrorCode::UnidentifiableAlpha,
                "k - l is constant across usable bins; alpha is "
                "unidentifiable (intercept at alpha=0 would be " +
                    std::to_string(mean_v) + ")");
  }

  CobbDouglasFit fit;
  double alpha = (suv / md - mean_u * mean_v) / var_u;
  if (alpha < 0.0) {
    alpha = 0.0;
    fit.clamped = true;
  } else if (alpha > 1.0) {
    alpha = 1.0;
    fit.clamped = true;
  }
  fit.alpha = alpha;
  fit.ln_A = mean_v - alpha * mean_u;
  fit.n_points = static_cast<int>(m);

  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = v[i] - (fit.ln_A + alpha * u[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / md);
  return fit;
}

double compose_geometric(std::span<const double> log_inputs,
                         const CompositionWeights& weights) {
  if (weights.lambdas.size() != log_inputs.size())
    throw Error(ErrorCode::WeightError,
                "one weight per input is required");
  if (weights.q <= 0.0)
    throw Error(ErrorCode::WeightError, "scale factor q must be positive");
  double lambda_sum = 0.0;
  for (double w : weights.lambdas) lambda_sum += w;
  if (std::abs(lambda_sum - 1.0) > 1e-12)
    throw Error(ErrorCode::WeightError,
                "weights must sum to 1, got " + std::to_string(lambda_sum));
  double acc = std::log(weights.q);
  for (std::size_t i = 0; i < log_inputs.size(); ++i)
    acc += weights.lambdas[i] * log_inputs[i];
  return acc;
}

double compose_geometric(double y_a, double y_i) {
  const double inputs[2] = {y_a, y_i};
  CompositionWeights w;
  w.lambdas = {0.5, 0.5};
  return compose_geometric(inputs, w);
}

double accuracy_from_confusion(long long tp, long long tn, long long fp,
                               long long fn) {
  if (tp < 0 || tn < 0 || fp < 0 || fn < 0)
    throw Error(ErrorCode::DomainError, "confusion counts must be >= 0");
  const long long total = tp + tn + fp + fn;
  if (total == 0)
    throw Error(ErrorCode::UndefinedMetric,
                "accuracy undefined for an all-zero confusion matrix");
  return static_cast<double>(tp + tn) / static_cast<double>(total);
}

}  // namespace prodfreq
