#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hiermud/sim/beam.hpp"

namespace hiermud::sim {

// Error propagated from a damage-location estimate into the severity
// estimate when the tasks are solved sequentially (q = d / sin^2(n pi l/L)):
//
//   sigma_q^2 = sigma_d^2 / sin^4(n pi l/L)
//             + sigma_l^2 * 4 n^2 pi^2 d^2 cos^2(n pi l/L) / (L^2 sin^6(n pi l/L))
//
// Returns +inf when sin(n pi l/L) == 0 (damage estimated at a node of the mode).
inline double error_propagation_sigma_q(double sigma_d, double sigma_l, double d,
                                        int n, double length, double l_hat) {
  if (n < 1) throw std::invalid_argument("mode index must be >= 1");
  if (!(l_hat > 0.0 && l_hat < length))
    throw std::invalid_argument("estimated location must be inside the span");
  const double a = static_cast<double>(n) * kPi * l_hat / length;
  const double s = std::sin(a);
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  const double c = std::cos(a);
  const double s2 = s * s;
  const double s4 = s2 * s2;
  const double s6 = s4 * s2;
  const double np = static_cast<double>(n) * kPi;
  const double t1 = sigma_d * sigma_d / s4;
  const double t2 = sigma_l * sigma_l * 4.0 * np * np * d * d * c * c / (length * length * s6);
  return std::sqrt(t1 + t2);
}

}  // namespace hiermud::sim
