#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hiermud/mud/config.hpp"

namespace hiermud::mud {

// Adaptive task weights from the task-shared domain-classifier losses:
// w_m = exp(-L_m) / sum_k exp(-L_k). A task whose features the classifier
// separates easily (small loss, large divergence) gets a larger weight.
inline std::vector<double> adaptive_weights(const std::vector<double>& d0_losses) {
  if (d0_losses.empty()) throw std::invalid_argument("adaptive_weights: no losses");
  std::vector<double> w(d0_losses.size());
  double lo = d0_losses[0];
  for (double l : d0_losses) {
    if (!std::isfinite(l)) throw std::invalid_argument("adaptive_weights: non-finite loss");
    lo = std::min(lo, l);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(-(d0_losses[i] - lo));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Per-task weights on the shared-domain adversarial term for each objective
// variant. soft-max uses the adaptive weights; average weighs tasks equally;
// hard-max routes everything through the task with the largest divergence
// (the smallest domain loss).
inline std::vector<double> objective_weights(Objective objective,
                                             const std::vector<double>& d0_losses) {
  const std::size_t m = d0_losses.size();
  switch (objective) {
    case Objective::kSoftMax:
      return adaptive_weights(d0_losses);
    case Objective::kAverage:
    case Objective::kNoAdaptation: {
      std::vector<double> w(m, 1.0 / static_cast<double>(m));
      return w;
    }
    case Objective::kHardMax: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < m; ++i)
        if (d0_losses[i] < d0_losses[best]) best = i;
      std::vector<double> w(m, 0.0);
      w[best] = 1.0;
      return w;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace hiermud::mud
