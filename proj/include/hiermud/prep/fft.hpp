#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace hiermud::prep {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey FFT. n must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("fft length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double kTau = 6.283185307179586476925286766559;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? kTau : -kTau) / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

// Forward FFT of a real series zero-padded to fft_len; returns the first
// fft_len/2 + 1 bins.
inline std::vector<std::complex<double>> rfft(const double* x, std::size_t n, std::size_t fft_len) {
  if (n > fft_len) throw std::invalid_argument("series longer than fft length");
  std::vector<std::complex<double>> a(fft_len, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) a[i] = {x[i], 0.0};
  fft_inplace(a);
  a.resize(fft_len / 2 + 1);
  return a;
}

// Symmetric Hann window (matches the zero-endpoint cosine taper).
inline std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  const double kTau = 6.283185307179586476925286766559;
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(kTau * static_cast<double>(i) / static_cast<double>(n - 1)));
  return w;
}

}  // namespace hiermud::prep
