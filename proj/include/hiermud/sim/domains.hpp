#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hiermud/sim/beam.hpp"
#include "hiermud/sim/types.hpp"

namespace hiermud::sim {

inline constexpr double kFeet = 0.3048;
inline constexpr double kPoundKg = 0.45359237;

// Back-solve EI so the first natural frequency equals f1:
//   f1 = (pi/L)^2 sqrt(EI / rhoA) / (2 pi)  =>  EI = rhoA (2 f1 L^2 / pi)^2.
inline double rigidity_for_f1(double f1_hz, double length, double mass_per_length) {
  const double root = 2.0 * f1_hz * length * length / kPi;
  return mass_per_length * root * root;
}

// Canonical synthetic bridges: 8 ft span, total masses and damping ratios of
// the two lab specimens, EI back-solved from the reported first frequencies.
inline BridgeConfig bridge_b1() {
  BridgeConfig b;
  b.id = "B1";
  b.length_m = 8.0 * kFeet;
  b.mass_per_length = 34.2 * kPoundKg / b.length_m;
  b.flexural_rigidity = rigidity_for_f1(5.9, b.length_m, b.mass_per_length);
  b.damping_ratio = 0.13;
  b.n_modes = 8;
  return b;
}

inline BridgeConfig bridge_b2() {
  BridgeConfig b;
  b.id = "B2";
  b.length_m = 8.0 * kFeet;
  b.mass_per_length = 43.0 * kPoundKg / b.length_m;
  b.flexural_rigidity = rigidity_for_f1(7.7, b.length_m, b.mass_per_length);
  b.damping_ratio = 0.07;
  b.n_modes = 8;
  return b;
}

// Vehicles with the lab weight ratios 10.6 : 11.6 : 12.6 (per axle mass is
// half of the vehicle weight). Suspension tuned to a 4.5 Hz bounce frequency
// so the sprung mass couples strongly with both bridges' first modes.
inline VehicleConfig vehicle_v(int index) {
  static const double weights_lb[3] = {10.6, 11.6, 12.6};
  if (index < 1 || index > 3) throw std::invalid_argument("vehicle index must be 1..3");
  VehicleConfig v;
  v.id = "V" + std::to_string(index);
  v.sprung_mass = weights_lb[index - 1] * kPoundKg / 2.0;
  const double omega = 2.0 * kPi * 4.5;
  v.suspension_stiffness = v.sprung_mass * omega * omega;
  v.suspension_damping = 2.0 * 0.05 * std::sqrt(v.suspension_stiffness * v.sprung_mass);
  v.speed = 0.75;
  v.axle_spacing = (8.0 * kFeet) / 8.0;
  return v;
}

inline BridgeConfig bridge_by_id(const std::string& id) {
  if (id == "B1") return bridge_b1();
  if (id == "B2") return bridge_b2();
  throw std::invalid_argument("unknown bridge id: " + id);
}

inline VehicleConfig vehicle_by_id(const std::string& id) {
  if (id == "V1") return vehicle_v(1);
  if (id == "V2") return vehicle_v(2);
  if (id == "V3") return vehicle_v(3);
  throw std::invalid_argument("unknown vehicle id: " + id);
}

// Severity masses for classes 1..4. The lab attached 0.5..2.0 lb to a
// 34.2 lb specimen; the mass ratio (0.5k / 34.2) against the host bridge is
// preserved on every synthetic bridge.
inline std::vector<double> severity_masses_kg(const BridgeConfig& bridge) {
  std::vector<double> out;
  for (int k = 1; k <= 4; ++k)
    out.push_back((0.5 * static_cast<double>(k) / 34.2) * bridge.total_mass());
  return out;
}

// Damage locations for classes 1..3: quarter-span points.
inline std::vector<double> quarter_span_locations(const BridgeConfig& bridge) {
  return {bridge.length_m * 0.25, bridge.length_m * 0.50, bridge.length_m * 0.75};
}

inline DamageState damage_for_cell(const BridgeConfig& bridge, int location_class,
                                   int severity_class) {
  DamageState d;
  if (location_class == 0 || severity_class == 0) {
    if (location_class != severity_class)
      throw std::invalid_argument("undamaged cell needs both classes zero");
    return d;
  }
  if (location_class < 1 || location_class > 3)
    throw std::invalid_argument("location class out of range");
  if (severity_class < 1 || severity_class > 4)
    throw std::invalid_argument("severity class out of range");
  d.location_class = location_class;
  d.severity_class = severity_class;
  d.location_l = quarter_span_locations(bridge)[static_cast<std::size_t>(location_class - 1)];
  d.severity_q = severity_masses_kg(bridge)[static_cast<std::size_t>(severity_class - 1)];
  return d;
}

}  // namespace hiermud::sim
