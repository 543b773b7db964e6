#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiermud::sim {

// Simply supported Euler-Bernoulli beam retained as n_modes sine modes.
struct BridgeConfig {
  double length_m = 2.4384;            // L
  double mass_per_length = 6.0;        // rho*A, kg/m
  double flexural_rigidity = 3000.0;   // E*I, N*m^2
  double damping_ratio = 0.02;         // per-mode ratio, applied in the undamaged basis
  int n_modes = 8;
  std::string id = "bridge";

  void validate() const {
    if (!(length_m > 0.0)) throw std::invalid_argument("bridge length must be > 0");
    if (!(mass_per_length > 0.0)) throw std::invalid_argument("rhoA must be > 0");
    if (!(flexural_rigidity > 0.0)) throw std::invalid_argument("EI must be > 0");
    if (!(damping_ratio >= 0.0 && damping_ratio < 1.0))
      throw std::invalid_argument("damping ratio must be in [0,1)");
    if (n_modes < 1) throw std::invalid_argument("n_modes must be >= 1");
  }

  double total_mass() const { return mass_per_length * length_m; }
};

// Sprung-mass vehicle; two identical single-DOF oscillators separated by
// axle_spacing emulate the front/rear sensor pairs.
struct VehicleConfig {
  double sprung_mass = 1.5;        // m_v per axle, kg
  double suspension_stiffness = 700.0;  // k_v, N/m
  double suspension_damping = 3.0;      // c_v, N*s/m
  double speed = 0.75;             // m/s
  double axle_spacing = 0.3048;    // m
  std::string id = "vehicle";

  void validate(double bridge_length) const {
    if (!(sprung_mass > 0.0)) throw std::invalid_argument("sprung mass must be > 0");
    if (!(suspension_stiffness > 0.0)) throw std::invalid_argument("k_v must be > 0");
    if (!(suspension_damping >= 0.0)) throw std::invalid_argument("c_v must be >= 0");
    if (!(speed > 0.0)) throw std::invalid_argument("speed must be > 0");
    if (!(axle_spacing >= 0.0 && axle_spacing < bridge_length))
      throw std::invalid_argument("axle spacing must be in [0, L)");
  }

  double bounce_frequency_hz() const {
    return std::sqrt(suspension_stiffness / sprung_mass) / 6.283185307179586476925286766559;
  }
};

// Damage proxy: point mass q attached at location l.
struct DamageState {
  double severity_q = 0.0;   // kg; 0 means undamaged
  double location_l = 0.0;   // m from the left support
  int location_class = 0;    // 0 = undamaged, 1..3 = quarter-span positions
  int severity_class = 0;    // 0 = undamaged, 1..4

  static DamageState undamaged() { return {}; }

  void validate(double bridge_length) const {
    if (!(severity_q >= 0.0)) throw std::invalid_argument("severity q must be >= 0");
    if (severity_q > 0.0 && !(location_l > 0.0 && location_l < bridge_length))
      throw std::invalid_argument("damage location must be inside the span");
    const bool undmg = severity_q == 0.0;
    if (undmg != (location_class == 0) || undmg != (severity_class == 0))
      throw std::invalid_argument("class labels must be 0 exactly for q == 0");
    if (location_class < 0 || location_class > 3)
      throw std::invalid_argument("location class out of range");
    if (severity_class < 0 || severity_class > 4)
      throw std::invalid_argument("severity class out of range");
  }
};

enum class Channel : int {
  kFrontChassis = 0,
  kRearChassis = 1,
  kFrontWheel = 2,
  kRearWheel = 3,
};

// One vehicle passage: four acceleration channels plus labels.
struct SignalRecord {
  std::array<std::vector<double>, 4> channels;  // m/s^2
  double sample_rate_hz = 1600.0;
  DamageState damage;
  std::string bridge_id;
  std::string vehicle_id;
  std::string trial_id;
  int domain_tag = 0;

  std::size_t n_samples() const { return channels[0].size(); }

  void validate(double highest_mode_hz) const {
    const std::size_t n = channels[0].size();
    if (n < 2) throw std::invalid_argument("record needs at least 2 samples");
    for (const auto& c : channels)
      if (c.size() != n) throw std::invalid_argument("channels must have equal length");
    if (!(sample_rate_hz > 2.0 * highest_mode_hz))
      throw std::invalid_argument("sample rate violates Nyquist for retained modes");
  }
};

}  // namespace hiermud::sim
