#include "flatsat/saturation.hpp"

#include <cmath>
#include <limits>

#include "flatsat/errors.hpp"

namespace flatsat {

namespace {

// Residual gap under which two clause distances count as a tie.
constexpr double kTieTol = 1e-12;

// Adds the real roots of a x^2 + b x + c = 0. Uses the cancellation-free form
// q = -(b + sign(b) sqrt(disc)) / 2, roots q / a and c / q.
void push_quadratic_roots(double a, double b, double c, CandidateSet& out) {
  if (a == 0.0) {
    if (b != 0.0) out.push(-c / b);
    return;
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    // Grazing rays produce a discriminant that is zero up to rounding.
    if (disc < -1e-12 * (b * b + std::abs(4.0 * a * c))) return;
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(root, b));
  if (q == 0.0) {
    // b = 0 and disc = 0, so c = 0 as well: double root at zero.
    out.push(0.0);
    return;
  }
  out.push(q / a);
  out.push(c / q);
}

ActiveConstraint classify_exit(const FlatInput& w, const ConstraintParams& p) {
  const VcClauses d = vc_boundary_distances(w, p);
  // The cone's lateral surface degenerates at its apex (0, 0, -g); an exit
  // there is reported as the half-space.
  if (d.halfspace <= 1e-9 * p.g()) return ActiveConstraint::kHalfspace;
  ActiveConstraint best = ActiveConstraint::kBall;
  double best_residual = d.ball;
  if (d.cone < best_residual - kTieTol) {
    best = ActiveConstraint::kCone;
    best_residual = d.cone;
  }
  if (d.halfspace < best_residual - kTieTol) best = ActiveConstraint::kHalfspace;
  return best;
}

}  // namespace

std::string_view to_string(ActiveConstraint c) {
  switch (c) {
    case ActiveConstraint::kNone:
      return "none";
    case ActiveConstraint::kBall:
      return "ball";
    case ActiveConstraint::kCone:
      return "cone";
    case ActiveConstraint::kHalfspace:
      return "halfspace";
  }
  return "none";
}

CandidateSet candidate_set(const FlatInput& v, const ConstraintParams& p) {
  if (v.isZero(0.0)) {
    throw DomainError("candidate_set: ray through v = 0 is undefined");
  }
  const double g = p.g();
  const double t2 = p.tan_eps_max() * p.tan_eps_max();
  const double lateral2 = v.x() * v.x() + v.y() * v.y();
  const double v3 = v.z();

  CandidateSet m;
  if (v3 != 0.0) {
    m.push(-g / v3);
    m.push(p.t_max() / (v3 * std::sqrt(1.0 + t2)));
  }
  // Cone: a1 l^2 + b1 l + c1 = 0. With v3 = 0 this reduces to the tangency
  // l = g tan(eps_max) / sqrt(v1^2 + v2^2) (and its mirror).
  const double a1 = lateral2 - v3 * v3 * t2;
  const double b1 = -2.0 * t2 * v3 * g;
  const double c1 = -t2 * g * g;
  push_quadratic_roots(a1, b1, c1, m);
  // Ball: a2 l^2 + b2 l + c2 = 0; c2 < 0, so there is always one positive root.
  const double a2 = lateral2 + v3 * v3;
  const double b2 = 2.0 * v3 * g;
  const double c2 = g * g - p.t_max() * p.t_max();
  push_quadratic_roots(a2, b2, c2, m);
  return m;
}

SaturationResult saturate(const FlatInput& v, const ConstraintParams& p, double tol) {
  if (v.isZero(0.0) || in_vc(v, p, tol)) {
    return {v, 1.0, false, ActiveConstraint::kNone};
  }
  double best = 0.0;
  for (const double lambda : candidate_set(v, p)) {
    // Candidates from one clause may violate another (e.g. the mirror nappe
    // of the cone), so each one is checked against the full set.
    if (lambda > best && lambda <= 1.0 && in_vc(lambda * v, p, tol)) best = lambda;
  }
  if (best == 0.0) {
    // Not reached for finite v; kept as a guard so the output stays feasible.
    best = saturate_oracle(v, p);
  }
  const FlatInput w = best * v;
  return {w, best, true, classify_exit(w, p)};
}

double saturate_oracle(const FlatInput& v, const ConstraintParams& p, int iters) {
  if (in_vc(v, p, 0.0)) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (in_vc(mid * v, p, 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace flatsat
