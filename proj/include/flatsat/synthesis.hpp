#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "flatsat/constraint_sets.hpp"
#include "flatsat/flat_model.hpp"

namespace flatsat {

/// Lyapunov matrix P = [p1 I3, p2 I3; p2 I3, p3 I3] together with the decay
/// rate alpha it was certified for.
struct GainMatrix {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double alpha = 0.0;

  Eigen::Matrix2d axis() const;
  Matrix6d dense() const;
  bool positive_definite() const { return p1 > 0.0 && p1 * p3 - p2 * p2 > 0.0; }
};

/// Numerical tolerances carried by a certificate.
struct Margins {
  double lmi = 1e-6;       ///< strictness of the stabilizing LMI in synthesis
  double cert = 1e-6;      ///< allowed Lyapunov residual / decay slack
  double identity = 1e-9;  ///< algebraic identities and memberships
  double table = 1e-2;     ///< reproduction of rounded published matrices
};

/// Invariant-ellipsoid certificate: B_P(eps) = {xi : xi' P xi <= eps} is
/// invariant under v = sat(-gamma B' P xi) when |B' P xi|^2 <= rho on it.
struct EllipsoidCert {
  GainMatrix gain;
  double rho = 0.0;
  double eps = 0.0;
  double gamma = 1.0;
  double tau = 0.0;
};

/// Largest eigenvalue of (A - BB'P)'P + P(A - BB'P) + alpha P (dense 6x6).
double lyapunov_residual(const GainMatrix& gain);

struct GainCheck {
  bool positive_definite = false;
  double residual = 0.0;
  bool passes = false;
};

/// Verify-only mode: checks an externally supplied P against the decay condition.
GainCheck check_gain(const GainMatrix& gain, double tol);

/// Solves Q A' + A Q - 2 B B' <= -alpha Q - margin I, Q > 0 and returns P = Q^-1.
///
/// A and B are three identical double integrators, so the LMI splits into
/// three copies of the 2x2 condition
///   [2 q2 + alpha q1,  q3 + alpha q2]
///   [q3 + alpha q2,    alpha q3 - 2 ]  <= -margin I.
/// The (2,2) entry bounds q3 <= (2 - margin) / alpha; at that bound the
/// off-diagonal must vanish (q2 = -q3 / alpha) and q1 is taken tight on the
/// (1,1) entry. This is the feasible Q with the largest q3. The assembled 6x6
/// result is re-verified densely. Throws SynthesisError when infeasible.
GainMatrix solve_stabilizing_p(double alpha, double margin = 1e-6);

struct EpsMax {
  double eps = 0.0;
  double tau = 0.0;
};

/// Largest level eps with |xi|_P^2 <= eps  =>  |B'P xi|^2 <= rho, through the
/// S-procedure: eps* = rho / lambda_max(B'PB), multiplier tau = 1 / lambda_max(B'PB).
EpsMax eps_max(const GainMatrix& gain, double rho);

/// The 7x7 S-procedure matrix [P, 0; 0, -eps] - tau [PBB'P, 0; 0, -rho].
Eigen::Matrix<double, 7, 7> s_procedure_matrix(const GainMatrix& gain, double rho, double eps,
                                               double tau);

/// Inscribed ball, stabilizing P and maximal level chained together.
EllipsoidCert run_procedure_1(const ConstraintParams& p, double alpha, double gamma,
                              double margin = 1e-6);

/// Certificate with a given (e.g. published) P: rho from the inscribed ball
/// and eps from eps_max.
EllipsoidCert certificate_for_gain(const ConstraintParams& p, const GainMatrix& gain,
                                   double gamma);

/// Area of the projection of B_P(eps) onto one (position, velocity) plane.
double projection_area(const EllipsoidCert& cert);

/// n points uniformly distributed on the boundary of B_P(eps).
std::vector<FlatState> sample_ellipsoid_boundary(const EllipsoidCert& cert, int n,
                                                 std::uint64_t seed);

/// n deterministic low-discrepancy (Halton) points on the boundary of B_P(eps).
std::vector<FlatState> halton_boundary_points(const EllipsoidCert& cert, int n);

struct VerificationReport {
  std::uint64_t seed = 0;
  int samples = 0;
  int saturated = 0;
  int nagumo_failures = 0;
  int decay_failures = 0;
  int gain_failures = 0;
  double worst_nagumo = -std::numeric_limits<double>::infinity();  ///< max xi'P(A xi + B v)
  double worst_decay = -std::numeric_limits<double>::infinity();   ///< max Vdot + alpha V
  double worst_gamma_lambda = std::numeric_limits<double>::infinity();  ///< min gamma lambda*
  int worst_index = -1;
  FlatState worst_state = FlatState::Zero();

  int failures() const { return nagumo_failures + decay_failures + gain_failures; }
  bool passed() const { return samples > 0 && failures() == 0; }
};

/// Samples the boundary of B_P(eps) and checks, under v = sat(-gamma B'P xi):
/// the Nagumo condition xi'P(A xi + B v) <= identity tol, the decay
/// Vdot <= -alpha V + cert tol, and gamma lambda* >= 1 for saturated samples.
VerificationReport verify_cert(const EllipsoidCert& cert, const ConstraintParams& p,
                               int n_samples, std::uint64_t seed,
                               const Margins& margins = {});

}  // namespace flatsat
