#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "hiermud/core/rng.hpp"
#include "hiermud/sim/beam.hpp"
#include "hiermud/sim/types.hpp"

namespace hiermud::sim {

inline constexpr double kGravity = 9.80665;

struct PassageOptions {
  double sample_rate_hz = 1600.0;
  // Per-trial variability: uniform speed jitter (fraction of nominal speed)
  // and additive white sensor noise (fraction of each channel's clean RMS).
  double speed_jitter = 0.03;
  double noise_ratio = 0.01;
  // Vertical velocity kick applied to a sprung mass at its entry instant,
  // as a fraction of travel speed. Emulates the expansion-joint bump; without
  // it a vehicle rolling onto a stiff beam is never excited at all.
  double entry_kick_ratio = 0.01;
  // Extra integration time after the rear axle exits. The channels are zero
  // there by contract; the probe keeps recording the free decay.
  double tail_s = 0.0;
  // Record the beam acceleration at a fixed location (fraction of the span);
  // negative disables. This is a virtual bridge-deck sensor used by the
  // frequency checks, not part of the 4-channel record.
  double probe_position = -1.0;
};

struct PassageResult {
  SignalRecord record;
  std::vector<double> probe;  // beam acceleration at probe_position, whole run
  double actual_speed = 0.0;
};

// Integrates the coupled vehicle-bridge system with Newmark-beta
// (gamma = 1/2, beta = 1/4) on the beam's modal coordinates plus the two
// sprung masses. Contact is a rigid massless point; the wheel channels are
// the beam acceleration at the moving contact points, the chassis channels
// the sprung-mass accelerations. Channels are zero while an axle is off the
// beam. Deterministic for a fixed seed.
inline PassageResult simulate_passage_full(const BridgeConfig& bridge,
                                           const VehicleConfig& vehicle,
                                           const DamageState& damage,
                                           const PassageOptions& opt,
                                           std::uint64_t seed) {
  bridge.validate();
  vehicle.validate(bridge.length_m);
  damage.validate(bridge.length_m);
  const double f_max = analytic_frequency_hz(bridge, bridge.n_modes);
  if (!(opt.sample_rate_hz > 2.0 * f_max))
    throw std::invalid_argument("sample rate violates Nyquist for the retained modes");

  core::Rng rng(core::derive_seed(seed, "passage"));
  const double speed = vehicle.speed * (1.0 + opt.speed_jitter * rng.uniform(-1.0, 1.0));

  const int n_modes = bridge.n_modes;
  const int ndof = n_modes + 2;
  const double length = bridge.length_m;
  const ModalSystem sys = modal_system(bridge, damage);
  const double modal_mass = bridge.mass_per_length * length / 2.0;

  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(ndof, ndof);
  mass.topLeftCorner(n_modes, n_modes) = sys.mass;
  mass(n_modes, n_modes) = vehicle.sprung_mass;
  mass(n_modes + 1, n_modes + 1) = vehicle.sprung_mass;

  Eigen::MatrixXd damp_base = Eigen::MatrixXd::Zero(ndof, ndof);
  Eigen::MatrixXd stiff_base = Eigen::MatrixXd::Zero(ndof, ndof);
  for (int i = 0; i < n_modes; ++i) {
    damp_base(i, i) = 2.0 * bridge.damping_ratio * sys.undamaged_omega[i] * modal_mass;
    stiff_base(i, i) = sys.stiffness[i];
  }

  const double dt = 1.0 / opt.sample_rate_hz;
  const double entry_delay = vehicle.axle_spacing / speed;
  const double exit_time = (length + vehicle.axle_spacing) / speed;
  const int crossing_steps = static_cast<int>(std::ceil(exit_time * opt.sample_rate_hz));
  const int steps = crossing_steps + static_cast<int>(std::ceil(opt.tail_s * opt.sample_rate_hz));
  if (crossing_steps < 2) throw std::invalid_argument("record would be shorter than 2 samples");

  const double beta = 0.25, gamma = 0.5;
  const double a0 = 1.0 / (beta * dt * dt);
  const double a1 = gamma / (beta * dt);
  const double a2 = 1.0 / (beta * dt);
  const double a3 = 0.5 / beta - 1.0;
  const double a4 = gamma / beta - 1.0;
  const double a5 = dt * (0.5 * gamma / beta - 1.0);

  Eigen::VectorXd z = Eigen::VectorXd::Zero(ndof);
  Eigen::VectorXd zd = Eigen::VectorXd::Zero(ndof);
  Eigen::VectorXd zdd = Eigen::VectorXd::Zero(ndof);
  Eigen::VectorXd phi(n_modes);

  PassageResult out;
  out.actual_speed = speed;
  SignalRecord& rec = out.record;
  rec.sample_rate_hz = opt.sample_rate_hz;
  rec.damage = damage;
  rec.bridge_id = bridge.id;
  rec.vehicle_id = vehicle.id;
  const std::size_t rec_len = static_cast<std::size_t>(crossing_steps) + 1;
  for (auto& c : rec.channels) c.assign(rec_len, 0.0);

  const bool probing = opt.probe_position >= 0.0;
  Eigen::VectorXd phi_probe(n_modes);
  if (probing) {
    for (int i = 0; i < n_modes; ++i)
      phi_probe[i] = mode_shape(i + 1, opt.probe_position * length, length);
    out.probe.assign(static_cast<std::size_t>(steps) + 1, 0.0);
  }

  bool entered[2] = {false, false};
  const double entry_time[2] = {0.0, entry_delay};
  const double kv = vehicle.suspension_stiffness;
  const double cv = vehicle.suspension_damping;

  Eigen::MatrixXd damp(ndof, ndof), stiff(ndof, ndof), keff(ndof, ndof);
  Eigen::VectorXd force(ndof), rhs(ndof), z_new(ndof), zdd_new(ndof);

  for (int step = 1; step <= steps; ++step) {
    const double t = step * dt;
    damp = damp_base;
    stiff = stiff_base;
    force.setZero();
    for (int axle = 0; axle < 2; ++axle) {
      const double x = speed * (t - entry_time[axle]);
      const int vi = n_modes + axle;
      const bool on_beam = x >= 0.0 && x <= length;
      if (on_beam && !entered[axle]) {
        zd[vi] -= opt.entry_kick_ratio * speed;
        entered[axle] = true;
      }
      if (on_beam) {
        for (int i = 0; i < n_modes; ++i) phi[i] = mode_shape(i + 1, x, length);
        stiff.topLeftCorner(n_modes, n_modes) += kv * phi * phi.transpose();
        stiff.col(vi).head(n_modes) -= kv * phi;
        stiff.row(vi).head(n_modes) -= kv * phi.transpose();
        stiff(vi, vi) += kv;
        damp.topLeftCorner(n_modes, n_modes) += cv * phi * phi.transpose();
        damp.col(vi).head(n_modes) -= cv * phi;
        damp.row(vi).head(n_modes) -= cv * phi.transpose();
        damp(vi, vi) += cv;
        force.head(n_modes) -= vehicle.sprung_mass * kGravity * phi;
      } else {
        // Off the beam the oscillator rides on rigid ground.
        stiff(vi, vi) += kv;
        damp(vi, vi) += cv;
      }
    }

    keff = stiff + a0 * mass + a1 * damp;
    rhs = force + mass * (a0 * z + a2 * zd + a3 * zdd) + damp * (a1 * z + a4 * zd + a5 * zdd);
    z_new = keff.ldlt().solve(rhs);
    zdd_new = a0 * (z_new - z) - a2 * zd - a3 * zdd;
    zd += dt * ((1.0 - gamma) * zdd + gamma * zdd_new);
    z = z_new;
    zdd = zdd_new;

    if (step <= crossing_steps) {
      for (int axle = 0; axle < 2; ++axle) {
        const double x = speed * (t - entry_time[axle]);
        if (x >= 0.0 && x <= length) {
          for (int i = 0; i < n_modes; ++i) phi[i] = mode_shape(i + 1, x, length);
          rec.channels[static_cast<std::size_t>(axle)][static_cast<std::size_t>(step)] =
              zdd[n_modes + axle];
          rec.channels[static_cast<std::size_t>(2 + axle)][static_cast<std::size_t>(step)] =
              phi.dot(zdd.head(n_modes));
        }
      }
    }
    if (probing) out.probe[static_cast<std::size_t>(step)] = phi_probe.dot(zdd.head(n_modes));
  }

  if (opt.noise_ratio > 0.0) {
    for (auto& c : rec.channels) {
      double ms = 0.0;
      for (double v : c) ms += v * v;
      const double sigma = opt.noise_ratio * std::sqrt(ms / static_cast<double>(c.size()));
      for (double& v : c) v += sigma * rng.normal();
    }
  }
  rec.validate(f_max);
  return out;
}

inline SignalRecord simulate_passage(const BridgeConfig& bridge, const VehicleConfig& vehicle,
                                     const DamageState& damage, double sample_rate_hz,
                                     std::uint64_t seed) {
  PassageOptions opt;
  opt.sample_rate_hz = sample_rate_hz;
  return simulate_passage_full(bridge, vehicle, damage, opt, seed).record;
}

}  // namespace hiermud::sim
