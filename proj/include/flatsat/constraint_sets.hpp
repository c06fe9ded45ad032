#pragma once

#include <numbers>

#include "flatsat/flat_model.hpp"

namespace flatsat {

/// Default absolute tolerance on the squared quantities of the V_c clauses.
inline constexpr double kMembershipTol = 1e-9;

/// Tilt bound of the reference setting: 10 degrees.
inline constexpr double kTenDegrees = std::numbers::pi / 18.0;

/// Input bounds defining the physical box U and the flat-space convex set V_c.
///
/// The tilt bound of the cone is eps_max = min(phi_max, theta_max). Construction
/// rejects T_max <= g (hover infeasible) and angles outside (0, pi/2).
class ConstraintParams {
 public:
  ConstraintParams(double g, double t_max, double phi_max, double theta_max);

  /// g = 9.81, T_max = 1.45 g, phi_max = theta_max = 10 deg.
  static ConstraintParams reference();

  double g() const { return g_; }
  double t_max() const { return t_max_; }
  double phi_max() const { return phi_max_; }
  double theta_max() const { return theta_max_; }
  double eps_max() const { return eps_max_; }
  double tan_eps_max() const { return tan_eps_max_; }

 private:
  double g_;
  double t_max_;
  double phi_max_;
  double theta_max_;
  double eps_max_;
  double tan_eps_max_;
};

/// Squared-radius level rho of the ball B(rho) = {v : |v|^2 <= rho}.
struct InscribedBall {
  double rho = 0.0;
};

/// Signed clause values of V_c at v; each is <= 0 inside the set.
///   ball:      |v + g e3|^2 - T_max^2
///   cone:      v1^2 + v2^2 - tan^2(eps_max) (v3 + g)^2
///   halfspace: -(v3 + g)
struct VcClauses {
  double ball = 0.0;
  double cone = 0.0;
  double halfspace = 0.0;
};

VcClauses vc_clauses(const FlatInput& v, const ConstraintParams& p);

/// Euclidean distances from v to the boundary surfaces of the three clauses:
/// the thrust sphere, the lateral surface of the tilt cone and the plane v3 = -g.
VcClauses vc_boundary_distances(const FlatInput& v, const ConstraintParams& p);

bool in_u(const PhysicalInput& u, const ConstraintParams& p, double tol = 0.0);

bool in_vc(const FlatInput& v, const ConstraintParams& p, double tol = kMembershipTol);

/// Tilt angle arctan(sqrt(v1^2 + v2^2) / (v3 + g)) bounding |roll| and |pitch|.
double epsilon_angle(const FlatInput& v, double g);

/// Largest ball around the origin contained in V_c, in closed form:
/// rho* = min(T_max - g, g sin(eps_max))^2. The half-space is at distance g and
/// never binds.
InscribedBall max_inscribed_ball(const ConstraintParams& p);

}  // namespace flatsat
