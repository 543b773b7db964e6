#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hiermud/prep/stft.hpp"
#include "hiermud/sim/types.hpp"

namespace hiermud::prep {

inline constexpr std::size_t kTensorChannels = 4;
inline constexpr std::size_t kTensorWidth = 64;   // time frames after resize
inline constexpr std::size_t kTensorHeight = 64;  // frequency bins after resize

// Network input: 4 x 64 x 64 standardized log-spectrogram stack plus labels.
struct InputTensor {
  std::vector<double> data;  // C*W*H, channel-major
  int location_class = 0;
  int severity_class = 0;
  int domain_tag = 0;

  static std::size_t size() { return kTensorChannels * kTensorWidth * kTensorHeight; }
  double& at(std::size_t c, std::size_t w, std::size_t h) {
    return data[(c * kTensorWidth + w) * kTensorHeight + h];
  }
  double at(std::size_t c, std::size_t w, std::size_t h) const {
    return data[(c * kTensorWidth + w) * kTensorHeight + h];
  }
};

// Bilinear resize of a row-major in_rows x in_cols map to out_rows x out_cols.
inline std::vector<double> bilinear_resize(const std::vector<double>& in, std::size_t in_rows,
                                           std::size_t in_cols, std::size_t out_rows,
                                           std::size_t out_cols) {
  if (in.size() != in_rows * in_cols) throw std::invalid_argument("resize shape mismatch");
  if (in_rows < 1 || in_cols < 1) throw std::invalid_argument("empty resize input");
  std::vector<double> out(out_rows * out_cols);
  const double row_scale =
      out_rows > 1 ? static_cast<double>(in_rows - 1) / static_cast<double>(out_rows - 1) : 0.0;
  const double col_scale =
      out_cols > 1 ? static_cast<double>(in_cols - 1) / static_cast<double>(out_cols - 1) : 0.0;
  for (std::size_t r = 0; r < out_rows; ++r) {
    const double y = static_cast<double>(r) * row_scale;
    const std::size_t y0 = static_cast<std::size_t>(y);
    const std::size_t y1 = std::min(y0 + 1, in_rows - 1);
    const double fy = y - static_cast<double>(y0);
    for (std::size_t c = 0; c < out_cols; ++c) {
      const double x = static_cast<double>(c) * col_scale;
      const std::size_t x0 = static_cast<std::size_t>(x);
      const std::size_t x1 = std::min(x0 + 1, in_cols - 1);
      const double fx = x - static_cast<double>(x0);
      out[r * out_cols + c] = in[y0 * in_cols + x0] * (1.0 - fy) * (1.0 - fx) +
                              in[y1 * in_cols + x0] * fy * (1.0 - fx) +
                              in[y0 * in_cols + x1] * (1.0 - fy) * fx +
                              in[y1 * in_cols + x1] * fy * fx;
    }
  }
  return out;
}

// Record -> 4 x 64 x 64 tensor: per-channel STFT, bilinear resize of each
// log-magnitude map, stack, then standardize to zero mean / unit variance
// over all elements of the tensor (per tensor, so no dataset statistics leak
// across domains).
inline InputTensor tensorize(const sim::SignalRecord& record, const StftConfig& cfg) {
  InputTensor t;
  t.data.resize(InputTensor::size());
  t.location_class = record.damage.location_class;
  t.severity_class = record.damage.severity_class;
  t.domain_tag = record.domain_tag;

  for (std::size_t c = 0; c < kTensorChannels; ++c) {
    const Spectrogram s = stft(record.channels[c], cfg, record.sample_rate_hz);
    if (s.n_frames < kTensorWidth)
      throw std::invalid_argument("record too short: fewer than 64 frames");
    const std::vector<double> resized =
        bilinear_resize(s.values, s.n_frames, s.n_bins, kTensorWidth, kTensorHeight);
    std::copy(resized.begin(), resized.end(),
              t.data.begin() + static_cast<std::ptrdiff_t>(c * kTensorWidth * kTensorHeight));
  }

  double mean = 0.0;
  for (double v : t.data) mean += v;
  mean /= static_cast<double>(t.data.size());
  double var = 0.0;
  for (double v : t.data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(t.data.size());
  const double inv_std = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
  for (double& v : t.data) v = (v - mean) * inv_std;
  return t;
}

}  // namespace hiermud::prep
