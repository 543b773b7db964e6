#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hiermud/core/rng.hpp"
#include "hiermud/nn/layers.hpp"
#include "hiermud/nn/loss.hpp"

namespace hiermud::mud {

// Empirical symmetric-divergence proxy between two feature sets of equal
// size: train a fresh logistic probe to separate them, then
//   d = 2 (1 - [err_S + err_T])
// with the per-domain error fractions of the trained probe on the same
// samples. Identical sets give d = 0; perfectly separable sets approach 2.
inline double divergence_proxy(const std::vector<std::vector<double>>& feats_source,
                               const std::vector<std::vector<double>>& feats_target,
                               std::uint64_t seed, int epochs = 400, double lr = 0.5) {
  if (feats_source.size() != feats_target.size() || feats_source.empty())
    throw std::invalid_argument("divergence_proxy: feature sets must be equal-sized, non-empty");
  const std::size_t n = feats_source.size();
  const std::size_t dim = feats_source[0].size();

  // Standardize per dimension over the pooled set so the probe's step size
  // is scale-free.
  std::vector<double> mean(dim, 0.0), var(dim, 0.0);
  auto accumulate = [&](const std::vector<std::vector<double>>& rows) {
    for (const auto& r : rows)
      for (std::size_t j = 0; j < dim; ++j) mean[j] += r[j];
  };
  accumulate(feats_source);
  accumulate(feats_target);
  for (double& v : mean) v /= static_cast<double>(2 * n);
  auto accumulate_var = [&](const std::vector<std::vector<double>>& rows) {
    for (const auto& r : rows)
      for (std::size_t j = 0; j < dim; ++j) var[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
  };
  accumulate_var(feats_source);
  accumulate_var(feats_target);
  std::vector<double> inv_std(dim);
  for (std::size_t j = 0; j < dim; ++j)
    inv_std[j] = var[j] > 0.0 ? 1.0 / std::sqrt(var[j] / static_cast<double>(2 * n)) : 0.0;

  nn::Tensor x({2 * n, dim});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      x.data[i * dim + j] = (feats_source[i][j] - mean[j]) * inv_std[j];
      x.data[(n + i) * dim + j] = (feats_target[i][j] - mean[j]) * inv_std[j];
    }
  std::vector<int> labels(2 * n, 0);
  for (std::size_t i = n; i < 2 * n; ++i) labels[i] = 1;  // probe: source 0, target 1

  nn::Dense probe(dim, 2);
  nn::Softmax softmax;
  {
    core::Rng rng(core::derive_seed(seed, "probe"));
    const double bound = std::sqrt(6.0 / static_cast<double>(dim + 2));
    for (double& v : probe.weight.data) v = rng.uniform(-bound, bound);
  }

  for (int e = 0; e < epochs; ++e) {
    nn::DenseCache dc;
    nn::SoftmaxCache sc;
    nn::Tensor logits = probe.forward(x, dc);
    nn::Tensor probs = softmax.forward(logits, sc);
    nn::Tensor g = nn::cross_entropy_backward(probs, labels);
    probe.weight.zero_grad();
    probe.bias.zero_grad();
    probe.backward(dc, softmax.backward(sc, g));
    for (std::size_t i = 0; i < probe.weight.data.size(); ++i)
      probe.weight.data[i] -= lr * probe.weight.grad[i];
    for (std::size_t i = 0; i < probe.bias.data.size(); ++i)
      probe.bias.data[i] -= lr * probe.bias.grad[i];
  }

  nn::DenseCache dc;
  nn::SoftmaxCache sc;
  const nn::Tensor probs = softmax.forward(probe.forward(x, dc), sc);
  double err_s = 0.0, err_t = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const int pred = probs.data[i * 2 + 1] > probs.data[i * 2 + 0] ? 1 : 0;
    if (i < n && pred == 1) err_s += 1.0;
    if (i >= n && pred == 0) err_t += 1.0;
  }
  err_s /= static_cast<double>(n);
  err_t /= static_cast<double>(n);
  return 2.0 * (1.0 - (err_s + err_t));
}

}  // namespace hiermud::mud
