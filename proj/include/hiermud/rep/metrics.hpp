#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hiermud::rep {

// F1 on the positive (damaged) class: harmonic mean of precision and recall;
// 0 when both are undefined.
inline double f1_binary(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("f1_binary: size mismatch");
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] && labels[i]) ++tp;
    else if (predictions[i] && !labels[i]) ++fp;
    else if (!predictions[i] && labels[i]) ++fn;
  }
  const double denom = 2.0 * tp + fp + fn;
  return denom == 0.0 ? 0.0 : 2.0 * tp / denom;
}

inline double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels) {
  if (predictions.size() != labels.size() || predictions.empty())
    throw std::invalid_argument("accuracy: bad inputs");
  double ok = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) ok += predictions[i] == labels[i];
  return ok / static_cast<double>(predictions.size());
}

// Normal-approximation 95% confidence half-width over repeated seeds:
// 1.96 * s / sqrt(n), with the unbiased sample standard deviation.
inline double ci95_half_width(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double stderr_ = std::sqrt(ss / static_cast<double>(n - 1)) /
                         std::sqrt(static_cast<double>(n));
  return 1.96 * stderr_;
}

inline double mean_of(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean of empty sample");
  double m = 0.0;
  for (double v : values) m += v;
  return m / static_cast<double>(values.size());
}

}  // namespace hiermud::rep
