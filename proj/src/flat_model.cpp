#include "flatsat/flat_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flatsat/errors.hpp"

namespace flatsat {

namespace {

// Allowed overshoot of |arcsin argument| beyond 1 that is attributed to rounding.
constexpr double kArcsinSlack = 1e-9;

}  // namespace

Eigen::Vector3d accel(const PhysicalInput& u, double psi, double g) {
  if (!std::isfinite(u.thrust) || !std::isfinite(u.roll) || !std::isfinite(u.pitch) ||
      !std::isfinite(psi) || !std::isfinite(g)) {
    throw DomainError("accel: non-finite argument");
  }
  const double cphi = std::cos(u.roll);
  const double sphi = std::sin(u.roll);
  const double cth = std::cos(u.pitch);
  const double sth = std::sin(u.pitch);
  const double cpsi = std::cos(psi);
  const double spsi = std::sin(psi);
  return {u.thrust * (cphi * sth * cpsi + sphi * spsi),
          u.thrust * (cphi * sth * spsi - sphi * cpsi),
          u.thrust * cphi * cth - g};
}

PhysicalInput to_physical(const FlatInput& v, double psi, double g) {
  if (!v.allFinite() || !std::isfinite(psi) || !std::isfinite(g)) {
    throw DomainError("to_physical: non-finite argument");
  }
  const double lift = v.z() + g;
  if (!(lift > 0.0)) {
    throw DomainError("to_physical: requires v3 > -g (got v3 + g = " + std::to_string(lift) +
                      ")");
  }
  const double cpsi = std::cos(psi);
  const double spsi = std::sin(psi);

  PhysicalInput u;
  u.thrust = std::sqrt(v.x() * v.x() + v.y() * v.y() + lift * lift);
  double s = (v.x() * spsi - v.y() * cpsi) / u.thrust;
  if (std::abs(s) > 1.0 + kArcsinSlack) {
    throw DomainError("to_physical: roll argument outside [-1, 1]");
  }
  s = std::clamp(s, -1.0, 1.0);
  u.roll = std::asin(s);
  // lift > 0, so atan2 coincides with arctan(num / lift).
  u.pitch = std::atan2(v.x() * cpsi + v.y() * spsi, lift);
  return u;
}

Vector6d flat_dynamics(const FlatState& xi, const FlatInput& v) {
  Vector6d d;
  d << xi.tail<3>(), v;
  return d;
}

Matrix6d flat_a() {
  Matrix6d a = Matrix6d::Zero();
  a.topRightCorner<3, 3>().setIdentity();
  return a;
}

Eigen::Matrix<double, 6, 3> flat_b() {
  Eigen::Matrix<double, 6, 3> b = Eigen::Matrix<double, 6, 3>::Zero();
  b.bottomRows<3>().setIdentity();
  return b;
}

}  // namespace flatsat
