#include "flatsat/constraint_sets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flatsat/errors.hpp"

namespace flatsat {

ConstraintParams::ConstraintParams(double g, double t_max, double phi_max, double theta_max)
    : g_(g), t_max_(t_max), phi_max_(phi_max), theta_max_(theta_max) {
  if (!std::isfinite(g) || !(g > 0.0)) {
    throw ConfigError("constraint params: g must be positive and finite");
  }
  if (!std::isfinite(t_max) || !(t_max > g)) {
    throw ConfigError("constraint params: infeasible hover, T_max (" + std::to_string(t_max) +
                      ") must exceed g (" + std::to_string(g) + ")");
  }
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  for (const double angle : {phi_max, theta_max}) {
    if (!std::isfinite(angle) || !(angle > 0.0) || !(angle < kHalfPi)) {
      throw ConfigError("constraint params: angle bounds must lie in (0, pi/2)");
    }
  }
  eps_max_ = std::min(phi_max, theta_max);
  tan_eps_max_ = std::tan(eps_max_);
}

ConstraintParams ConstraintParams::reference() {
  return {kDefaultGravity, 1.45 * kDefaultGravity, kTenDegrees, kTenDegrees};
}

VcClauses vc_clauses(const FlatInput& v, const ConstraintParams& p) {
  const double lift = v.z() + p.g();
  const double lateral2 = v.x() * v.x() + v.y() * v.y();
  const double t2 = p.tan_eps_max() * p.tan_eps_max();
  return {lateral2 + lift * lift - p.t_max() * p.t_max(), lateral2 - t2 * lift * lift, -lift};
}

VcClauses vc_boundary_distances(const FlatInput& v, const ConstraintParams& p) {
  const double lift = v.z() + p.g();
  const double lateral = std::hypot(v.x(), v.y());
  const double radial = std::hypot(lateral, lift);
  return {std::abs(radial - p.t_max()),
          std::abs(lateral * std::cos(p.eps_max()) - lift * std::sin(p.eps_max())),
          std::abs(lift)};
}

bool in_u(const PhysicalInput& u, const ConstraintParams& p, double tol) {
  return u.thrust >= -tol && u.thrust <= p.t_max() + tol && std::abs(u.roll) <= p.phi_max() + tol &&
         std::abs(u.pitch) <= p.theta_max() + tol;
}

bool in_vc(const FlatInput& v, const ConstraintParams& p, double tol) {
  const VcClauses c = vc_clauses(v, p);
  return c.ball <= tol && c.cone <= tol && c.halfspace <= tol;
}

double epsilon_angle(const FlatInput& v, double g) {
  const double lift = v.z() + g;
  if (!(lift > 0.0)) {
    throw DomainError("epsilon_angle: requires v3 > -g");
  }
  return std::atan(std::hypot(v.x(), v.y()) / lift);
}

InscribedBall max_inscribed_ball(const ConstraintParams& p) {
  const double radius = std::min(p.t_max() - p.g(), p.g() * std::sin(p.eps_max()));
  return {radius * radius};
}

}  // namespace flatsat
