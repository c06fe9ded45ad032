#pragma once

#include <Eigen/Core>

namespace flatsat {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Flat-space state (x, y, z, vx, vy, vz).
using FlatState = Vector6d;

/// Flat-space input: commanded accelerations (v1, v2, v3) in m/s^2.
using FlatInput = Eigen::Vector3d;

inline constexpr double kDefaultGravity = 9.81;

/// Physical quadcopter input: normalized thrust (m/s^2), roll and pitch (rad).
struct PhysicalInput {
  double thrust = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
};

inline Eigen::Vector3d position(const FlatState& xi) { return xi.head<3>(); }
inline Eigen::Vector3d velocity(const FlatState& xi) { return xi.tail<3>(); }

inline FlatState make_state(const Eigen::Vector3d& pos, const Eigen::Vector3d& vel) {
  FlatState xi;
  xi << pos, vel;
  return xi;
}

/// Translational accelerations h_psi(u) of the quadcopter, including gravity
/// on the z row. Throws DomainError on non-finite arguments.
Eigen::Vector3d accel(const PhysicalInput& u, double psi, double g);

/// Linearizing input map beta_psi: the physical input realizing the flat
/// acceleration v at yaw psi. Requires v3 > -g strictly.
PhysicalInput to_physical(const FlatInput& v, double psi, double g);

/// Triple double integrator: returns (vel, v).
Vector6d flat_dynamics(const FlatState& xi, const FlatInput& v);

/// The block matrices A = [0 I; 0 0] and B = [0; I] of the flat model.
Matrix6d flat_a();
Eigen::Matrix<double, 6, 3> flat_b();

}  // namespace flatsat
