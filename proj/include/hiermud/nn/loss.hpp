#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hiermud/nn/tensor.hpp"

namespace hiermud::nn {

// Mean cross-entropy over a batch of probability rows: -mean_i log p_i[y_i].
// Inputs are probabilities (post-softmax); each row must sum to 1 within 1e-6.
inline double cross_entropy(const Tensor& probs, const std::vector<int>& labels) {
  if (probs.shape.size() != 2) throw std::invalid_argument("cross_entropy: expects N,C");
  const std::size_t n = probs.dim(0), c = probs.dim(1);
  if (labels.size() != n) throw std::invalid_argument("cross_entropy: label count mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += probs.data[i * c + j];
    if (std::abs(sum - 1.0) > 1e-6)
      throw std::invalid_argument("cross_entropy: probabilities do not sum to 1");
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= c)
      throw std::invalid_argument("cross_entropy: label out of range");
    total += -std::log(std::max(probs.data[i * c + static_cast<std::size_t>(y)], 1e-300));
  }
  return total / static_cast<double>(n);
}

// Gradient of the mean cross-entropy with respect to the probabilities.
inline Tensor cross_entropy_backward(const Tensor& probs, const std::vector<int>& labels) {
  const std::size_t n = probs.dim(0), c = probs.dim(1);
  Tensor grad({n, c});
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t y = static_cast<std::size_t>(labels[i]);
    grad.data[i * c + y] = -inv_n / std::max(probs.data[i * c + y], 1e-300);
  }
  return grad;
}

}  // namespace hiermud::nn
