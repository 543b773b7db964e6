#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hiermud/prep/fft.hpp"

namespace hiermud::prep {

struct StftConfig {
  std::size_t window_len = 1024;
  std::size_t hop = 0;          // 0: derived per series so that >= min_frames frames fit
  std::size_t fft_len = 1024;
  std::size_t keep_bins = 128;  // bins 0 .. keep_bins-1
  std::size_t min_frames = 64;
  double epsilon = 1e-10;       // dB floor offset
  double clamp_db = 60.0;       // keep at most this many dB below the map maximum; <=0 disables

  void validate() const {
    if (window_len > fft_len) throw std::invalid_argument("window_len must be <= fft_len");
    if (!is_power_of_two(fft_len)) throw std::invalid_argument("fft_len must be a power of two");
    if (keep_bins > fft_len / 2 + 1) throw std::invalid_argument("keep_bins exceeds spectrum");
    if (window_len < 2) throw std::invalid_argument("window too short");
  }

  std::size_t hop_for(std::size_t n_samples) const {
    if (hop > 0) return hop;
    if (n_samples < window_len + min_frames - 1)
      throw std::invalid_argument("series too short for the requested frame count");
    return std::max<std::size_t>(1, (n_samples - window_len) / (min_frames - 1));
  }
};

// One channel's time-frequency map: frames (rows) by frequency bins
// (columns), log-magnitude scale.
struct Spectrogram {
  std::size_t n_frames = 0;
  std::size_t n_bins = 0;
  std::vector<double> values;          // row-major, n_frames x n_bins
  std::vector<double> frame_times;     // s, window start
  std::vector<double> bin_freqs;       // Hz

  double& at(std::size_t frame, std::size_t bin) { return values[frame * n_bins + bin]; }
  double at(std::size_t frame, std::size_t bin) const { return values[frame * n_bins + bin]; }
};

// Hann-windowed magnitude STFT in dB: 20 log10(|X| + eps). With clamp_db > 0
// every cell is raised to at least (max - clamp_db), which pins the silence
// floor to the map's own dynamic range instead of the epsilon constant.
inline Spectrogram stft(const std::vector<double>& x, const StftConfig& cfg,
                        double sample_rate_hz) {
  cfg.validate();
  if (x.size() < cfg.window_len) throw std::invalid_argument("series shorter than the window");
  const std::size_t hop = cfg.hop_for(x.size());
  const std::size_t n_frames = (x.size() - cfg.window_len) / hop + 1;
  const std::vector<double> window = hann_window(cfg.window_len);

  Spectrogram s;
  s.n_frames = n_frames;
  s.n_bins = cfg.keep_bins;
  s.values.resize(n_frames * cfg.keep_bins);
  s.frame_times.resize(n_frames);
  s.bin_freqs.resize(cfg.keep_bins);
  for (std::size_t b = 0; b < cfg.keep_bins; ++b)
    s.bin_freqs[b] = static_cast<double>(b) * sample_rate_hz / static_cast<double>(cfg.fft_len);

  std::vector<double> frame(cfg.window_len);
  double max_db = -1e300;
  for (std::size_t f = 0; f < n_frames; ++f) {
    s.frame_times[f] = static_cast<double>(f * hop) / sample_rate_hz;
    for (std::size_t i = 0; i < cfg.window_len; ++i) frame[i] = x[f * hop + i] * window[i];
    const auto spec = rfft(frame.data(), frame.size(), cfg.fft_len);
    for (std::size_t b = 0; b < cfg.keep_bins; ++b) {
      const double db = 20.0 * std::log10(std::abs(spec[b]) + cfg.epsilon);
      s.at(f, b) = db;
      if (db > max_db) max_db = db;
    }
  }
  if (cfg.clamp_db > 0.0) {
    const double floor_db = max_db - cfg.clamp_db;
    for (double& v : s.values) v = std::max(v, floor_db);
  }
  return s;
}

// Sum over frames and bins of the squared linear-scale magnitudes (full
// spectrum reconstructed from the one-sided bins). Used by the Parseval
// check: equals fft_len times the windowed-signal energy.
inline double stft_energy_linear(const std::vector<double>& x, const StftConfig& cfg) {
  cfg.validate();
  const std::size_t hop = cfg.hop_for(x.size());
  const std::size_t n_frames = (x.size() - cfg.window_len) / hop + 1;
  const std::vector<double> window = hann_window(cfg.window_len);
  std::vector<double> frame(cfg.window_len);
  double total = 0.0;
  for (std::size_t f = 0; f < n_frames; ++f) {
    for (std::size_t i = 0; i < cfg.window_len; ++i) frame[i] = x[f * hop + i] * window[i];
    const auto spec = rfft(frame.data(), frame.size(), cfg.fft_len);
    for (std::size_t b = 0; b < spec.size(); ++b) {
      const double m2 = std::norm(spec[b]);
      const bool shared = b == 0 || b == cfg.fft_len / 2;
      total += shared ? m2 : 2.0 * m2;
    }
  }
  return total;
}

}  // namespace hiermud::prep
