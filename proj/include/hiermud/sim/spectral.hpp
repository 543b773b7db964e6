#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hiermud/prep/fft.hpp"

namespace hiermud::sim {

// Spectral peak of a series via a Hann-windowed, zero-padded FFT with
// parabolic interpolation of the log magnitude around the maximum bin.
inline double dominant_frequency_hz(const std::vector<double>& x, double sample_rate_hz,
                                    std::size_t min_fft = 1u << 18) {
  if (x.size() < 8) throw std::invalid_argument("series too short for a spectral peak");
  std::size_t fft_len = 8;
  while (fft_len < x.size() || fft_len < min_fft) fft_len <<= 1;
  const std::vector<double> w = prep::hann_window(x.size());
  std::vector<double> xw(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xw[i] = x[i] * w[i];
  const auto spec = prep::rfft(xw.data(), xw.size(), fft_len);
  std::size_t peak = 1;
  double best = 0.0;
  for (std::size_t k = 1; k + 1 < spec.size(); ++k) {
    const double m = std::abs(spec[k]);
    if (m > best) {
      best = m;
      peak = k;
    }
  }
  const double la = std::log(std::abs(spec[peak - 1]) + 1e-300);
  const double lb = std::log(std::abs(spec[peak]) + 1e-300);
  const double lc = std::log(std::abs(spec[peak + 1]) + 1e-300);
  const double denom = la - 2.0 * lb + lc;
  const double delta = denom == 0.0 ? 0.0 : 0.5 * (la - lc) / denom;
  return (static_cast<double>(peak) + delta) * sample_rate_hz / static_cast<double>(fft_len);
}

// Natural-frequency estimate from a free-decay segment. The spectral peak of
// a decaying oscillation sits at the damped frequency f_d; the decay rate
// sigma recovered from the log envelope gives back the undamped value via
// omega_n^2 = omega_d^2 + sigma^2 (log-decrement identification).
inline double estimate_natural_frequency_hz(const std::vector<double>& decay,
                                            double sample_rate_hz) {
  const double fd = dominant_frequency_hz(decay, sample_rate_hz);
  // Collect local |extrema| of the oscillation and fit log|amplitude| vs time.
  std::vector<double> t, loga;
  for (std::size_t i = 1; i + 1 < decay.size(); ++i) {
    const double m = std::abs(decay[i]);
    if (m > std::abs(decay[i - 1]) && m >= std::abs(decay[i + 1]) && m > 0.0) {
      t.push_back(static_cast<double>(i) / sample_rate_hz);
      loga.push_back(std::log(m));
    }
  }
  if (t.size() < 4) return fd;  // not enough cycles to identify the decay
  // Least-squares line through (t, log a); slope = -sigma.
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sl += loga[i];
    stt += t[i] * t[i];
    stl += t[i] * loga[i];
  }
  const double slope = (n * stl - st * sl) / (n * stt - st * st);
  const double sigma = std::max(0.0, -slope);
  const double kTau = 6.283185307179586476925286766559;
  const double wd = kTau * fd;
  return std::sqrt(wd * wd + sigma * sigma) / kTau;
}

}  // namespace hiermud::sim
