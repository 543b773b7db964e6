#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "hiermud/sim/types.hpp"

namespace hiermud::sim {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Mode shape of the simply supported beam, phi_n(x) = sin(n pi x / L).
inline double mode_shape(int n, double x, double length) {
  return std::sin(static_cast<double>(n) * kPi * x / length);
}

// Undamaged natural frequency f_n = (n pi / L)^2 sqrt(EI / rhoA) / (2 pi).
inline double analytic_frequency_hz(const BridgeConfig& b, int n) {
  const double k = static_cast<double>(n) * kPi / b.length_m;
  return k * k * std::sqrt(b.flexural_rigidity / b.mass_per_length) / (2.0 * kPi);
}

// Modal stiffness and mass matrices of the (possibly mass-loaded) beam.
// K is diagonal; M is the bare modal mass plus the rank-one attached-mass
// term q * phi(l) phi(l)^T.
struct ModalSystem {
  Eigen::MatrixXd mass;
  Eigen::VectorXd stiffness;           // diagonal of K
  Eigen::VectorXd undamaged_omega;     // rad/s, used for modal damping
};

inline ModalSystem modal_system(const BridgeConfig& b, const DamageState& d) {
  b.validate();
  d.validate(b.length_m);
  const int n = b.n_modes;
  const double modal_mass = b.mass_per_length * b.length_m / 2.0;
  ModalSystem sys;
  sys.mass = Eigen::MatrixXd::Zero(n, n);
  sys.stiffness.resize(n);
  sys.undamaged_omega.resize(n);
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(i + 1) * kPi / b.length_m;
    sys.stiffness[i] = b.flexural_rigidity * std::pow(k, 4) * b.length_m / 2.0;
    sys.mass(i, i) = modal_mass;
    sys.undamaged_omega[i] = std::sqrt(sys.stiffness[i] / modal_mass);
  }
  if (d.severity_q > 0.0) {
    Eigen::VectorXd phi(n);
    for (int i = 0; i < n; ++i) phi[i] = mode_shape(i + 1, d.location_l, b.length_m);
    sys.mass += d.severity_q * phi * phi.transpose();
  }
  return sys;
}

// First n_modes natural frequencies in Hz. With damage the frequencies come
// from the generalized eigenproblem K v = omega^2 M v of the perturbed modal
// mass matrix; without damage this reduces to the analytic formula.
inline std::vector<double> modal_frequencies(const BridgeConfig& b, const DamageState& d) {
  const ModalSystem sys = modal_system(b, d);
  if (d.severity_q == 0.0) {
    std::vector<double> out(static_cast<std::size_t>(b.n_modes));
    for (int i = 0; i < b.n_modes; ++i) out[static_cast<std::size_t>(i)] = analytic_frequency_hz(b, i + 1);
    return out;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      Eigen::MatrixXd(sys.stiffness.asDiagonal()), sys.mass, Eigen::EigenvaluesOnly);
  std::vector<double> out(static_cast<std::size_t>(b.n_modes));
  for (int i = 0; i < b.n_modes; ++i)
    out[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, eig.eigenvalues()[i])) / (2.0 * kPi);
  return out;
}

// Damage information d = q sin^2(n pi l / L): the scalar through which
// severity and location jointly shift mode n.
inline double damage_information(const BridgeConfig& b, const DamageState& d, int mode) {
  const double s = mode_shape(mode, d.location_l, b.length_m);
  return d.severity_q * s * s;
}

}  // namespace hiermud::sim
