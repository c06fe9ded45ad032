#pragma once

#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "flatsat/constraint_sets.hpp"
#include "flatsat/flat_model.hpp"
#include "flatsat/saturation.hpp"
#include "flatsat/synthesis.hpp"

namespace flatsat {

enum class ReferenceKind { kOrigin, kSetpoint, kCircular };

/// Horizontal circle sigma_ref(t) = (c + r (cos wt, sin wt), altitude).
struct CircularReference {
  double radius = 0.5;
  Eigen::Vector2d center{0.2, 0.0};
  double altitude = 0.3;
  double omega = 0.3 * std::numbers::pi;
};

struct ReferenceSample {
  FlatState state = FlatState::Zero();
  Eigen::Vector3d accel = Eigen::Vector3d::Zero();
};

struct Reference {
  ReferenceKind kind = ReferenceKind::kOrigin;
  FlatState setpoint = FlatState::Zero();
  CircularReference circle;
  /// Circular references: include the analytic velocity in the reference
  /// state (otherwise the velocity part of the reference is zero).
  bool analytic_velocity = true;

  ReferenceSample sample(double t) const;
};

/// psi(t) = offset + amplitude sin(2 pi frequency t); constant by default.
struct YawProfile {
  double offset = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;

  double operator()(double t) const;
};

struct Scenario {
  Reference reference;
  FlatState initial_state = FlatState::Zero();
  double duration = 20.0;
  double dt = 0.02;
  YawProfile psi;
  ConstraintParams params = ConstraintParams::reference();
  EllipsoidCert cert;
  /// Add the reference acceleration to the feedback before saturation.
  bool feedforward = false;
  /// Monitor |xi - xi_ref|_P^2 <= eps (1 + invariance_tol) and require the
  /// initial state to start inside the ellipsoid.
  bool enforce_invariance = false;
  double invariance_tol = 1e-6;
  double membership_tol = kMembershipTol;

  /// Throws ConfigError when the scenario invariants do not hold.
  void validate() const;
  int steps() const;
};

struct ControlOutput {
  FlatInput raw = FlatInput::Zero();
  SaturationResult sat;
};

/// v = sat(-gamma B'P (xi - xi_ref) [+ feedforward]).
ControlOutput control_law(const FlatState& xi, const FlatState& xi_ref, const EllipsoidCert& cert,
                          const ConstraintParams& p,
                          const Eigen::Vector3d& feedforward = Eigen::Vector3d::Zero());

/// One classical RK4 step of the nonlinear plant with v held over the step:
/// u = beta_psi(v) is computed once, then pos'' = h_psi(u).
FlatState step_rk4(const FlatState& xi, const FlatInput& v, double psi, double g, double dt);

/// RK4 step with a time-varying flat input; u = beta_psi(v(t)) at each stage.
FlatState step_rk4(const FlatState& xi, const std::function<FlatInput(double)>& v, double psi,
                   double g, double t, double dt);

/// Exact zero-order-hold update of the triple double integrator.
FlatState step_exact(const FlatState& xi, const FlatInput& v, double dt);

struct TraceRow {
  double t = 0.0;
  FlatState xi = FlatState::Zero();
  FlatState xi_ref = FlatState::Zero();
  FlatInput v_unsat = FlatInput::Zero();
  FlatInput v = FlatInput::Zero();
  PhysicalInput u;
  double lyapunov = 0.0;  ///< V(xi - xi_ref) = e'Pe
  double lambda = 1.0;
  bool saturated = false;
  ActiveConstraint active = ActiveConstraint::kNone;
  bool in_u = true;
  bool in_vc = true;
  double control_seconds = 0.0;  ///< wall time of control_law (not exported)
};

struct Trace {
  std::vector<TraceRow> rows;
  std::vector<std::string> violations;
  bool aborted = false;
  std::string abort_reason;

  bool clean() const { return !aborted && violations.empty(); }
};

/// Fixed-step closed loop: reference, control_law, beta_psi, monitors, RK4.
/// Rows are recorded at t = k dt for k = 0..steps. A DomainError from
/// beta_psi stops the run and marks the trace aborted.
Trace run(const Scenario& scenario);

struct Metrics {
  double rms_position_error = 0.0;  ///< over rows with t >= steady_start
  double max_position_error = 0.0;  ///< over rows with t >= steady_start
  double final_position_error = 0.0;
  double max_decay_violation = 0.0;  ///< max of central-difference Vdot + alpha V
  double max_decay_ratio = 0.0;      ///< max V(t) / (V(0) e^{-alpha t})
  double max_level_ratio = 0.0;      ///< max V(t) / eps
  double saturation_duty = 0.0;
  double mean_control_seconds = 0.0;
  double p99_control_seconds = 0.0;
  double min_vc_margin = 0.0;  ///< min over rows of -max(V_c clause)
  double min_u_margin = 0.0;   ///< min over rows of the smallest slack in U
  int u_violations = 0;
  int vc_violations = 0;
  int steps = 0;
};

Metrics metrics(const Trace& trace, const Scenario& scenario, double steady_start = 0.0);

}  // namespace flatsat
