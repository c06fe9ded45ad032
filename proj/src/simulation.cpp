#include "flatsat/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "flatsat/errors.hpp"

namespace flatsat {

ReferenceSample Reference::sample(double t) const {
  ReferenceSample s;
  switch (kind) {
    case ReferenceKind::kOrigin:
      break;
    case ReferenceKind::kSetpoint:
      s.state = setpoint;
      break;
    case ReferenceKind::kCircular: {
      const double w = circle.omega;
      const double c = std::cos(w * t);
      const double sn = std::sin(w * t);
      const double r = circle.radius;
      s.state << circle.center.x() + r * c, circle.center.y() + r * sn, circle.altitude, 0.0, 0.0,
          0.0;
      if (analytic_velocity) {
        s.state.tail<3>() << -r * w * sn, r * w * c, 0.0;
      }
      s.accel << -r * w * w * c, -r * w * w * sn, 0.0;
      break;
    }
  }
  return s;
}

double YawProfile::operator()(double t) const {
  if (amplitude == 0.0) return offset;
  return offset + amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
}

void Scenario::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("scenario: dt must be positive");
  if (!(duration >= dt) || !std::isfinite(duration)) {
    throw ConfigError("scenario: duration must be at least dt");
  }
  if (!initial_state.allFinite()) throw ConfigError("scenario: initial state must be finite");
  if (!cert.gain.positive_definite() || !(cert.eps > 0.0) || !(cert.gamma >= 1.0)) {
    throw ConfigError("scenario: certificate requires P > 0, eps > 0, gamma >= 1");
  }
  if (enforce_invariance) {
    const FlatState e = initial_state - reference.sample(0.0).state;
    const double level = e.dot(cert.gain.dense() * e);
    if (level > cert.eps * (1.0 + invariance_tol)) {
      throw ConfigError(fmt::format(
          "scenario: initial state outside B_P(eps) (level {:.6g} > eps {:.6g})", level,
          cert.eps));
    }
  }
}

int Scenario::steps() const { return static_cast<int>(std::llround(duration / dt)); }

ControlOutput control_law(const FlatState& xi, const FlatState& xi_ref, const EllipsoidCert& cert,
                          const ConstraintParams& p, const Eigen::Vector3d& feedforward) {
  const FlatState e = xi - xi_ref;
  const GainMatrix& k = cert.gain;
  // B'P e = p2 e_pos + p3 e_vel for the block-structured P.
  ControlOutput out;
  out.raw = -cert.gamma * (k.p2 * e.head<3>() + k.p3 * e.tail<3>()) + feedforward;
  out.sat = saturate(out.raw, p);
  return out;
}

FlatState step_rk4(const FlatState& xi, const FlatInput& v, double psi, double g, double dt) {
  const PhysicalInput u = to_physical(v, psi, g);
  const Eigen::Vector3d acc = accel(u, psi, g);
  auto rhs = [&acc](const FlatState& x) {
    FlatState d;
    d << x.tail<3>(), acc;
    return d;
  };
  const FlatState k1 = rhs(xi);
  const FlatState k2 = rhs(xi + 0.5 * dt * k1);
  const FlatState k3 = rhs(xi + 0.5 * dt * k2);
  const FlatState k4 = rhs(xi + dt * k3);
  return xi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

FlatState step_rk4(const FlatState& xi, const std::function<FlatInput(double)>& v, double psi,
                   double g, double t, double dt) {
  auto rhs = [&](double s, const FlatState& x) {
    FlatState d;
    d << x.tail<3>(), accel(to_physical(v(s), psi, g), psi, g);
    return d;
  };
  const FlatState k1 = rhs(t, xi);
  const FlatState k2 = rhs(t + 0.5 * dt, xi + 0.5 * dt * k1);
  const FlatState k3 = rhs(t + 0.5 * dt, xi + 0.5 * dt * k2);
  const FlatState k4 = rhs(t + dt, xi + dt * k3);
  return xi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

FlatState step_exact(const FlatState& xi, const FlatInput& v, double dt) {
  FlatState next;
  next << xi.head<3>() + dt * xi.tail<3>() + 0.5 * dt * dt * v, xi.tail<3>() + dt * v;
  return next;
}

Trace run(const Scenario& scenario) {
  scenario.validate();
  const ConstraintParams& p = scenario.params;
  const EllipsoidCert& cert = scenario.cert;
  const Matrix6d pm = cert.gain.dense();
  const int n = scenario.steps();

  Trace trace;
  trace.rows.reserve(static_cast<std::size_t>(n) + 1);
  FlatState xi = scenario.initial_state;

  for (int k = 0; k <= n; ++k) {
    TraceRow row;
    row.t = k * scenario.dt;
    const ReferenceSample ref = scenario.reference.sample(row.t);
    const double psi = scenario.psi(row.t);
    const Eigen::Vector3d ff = scenario.feedforward ? ref.accel : Eigen::Vector3d::Zero();

    const auto start = std::chrono::steady_clock::now();
    const ControlOutput ctrl = control_law(xi, ref.state, cert, p, ff);
    const auto stop = std::chrono::steady_clock::now();

    row.control_seconds = std::chrono::duration<double>(stop - start).count();
    row.xi = xi;
    row.xi_ref = ref.state;
    row.v_unsat = ctrl.raw;
    row.v = ctrl.sat.v_out;
    row.lambda = ctrl.sat.lambda;
    row.saturated = ctrl.sat.saturated;
    row.active = ctrl.sat.active;
    const FlatState e = xi - ref.state;
    row.lyapunov = e.dot(pm * e);

    try {
      row.u = to_physical(row.v, psi, p.g());
    } catch (const DomainError& err) {
      trace.aborted = true;
      trace.abort_reason = fmt::format("t = {:.6g}: {}", row.t, err.what());
      trace.rows.push_back(row);
      break;
    }
    row.in_u = in_u(row.u, p, scenario.membership_tol);
    row.in_vc = in_vc(row.v, p, scenario.membership_tol);
    if (!row.in_vc) trace.violations.push_back(fmt::format("t = {:.6g}: v outside V_c", row.t));
    if (!row.in_u) trace.violations.push_back(fmt::format("t = {:.6g}: u outside U", row.t));
    if (scenario.enforce_invariance &&
        row.lyapunov > cert.eps * (1.0 + scenario.invariance_tol)) {
      trace.violations.push_back(fmt::format("t = {:.6g}: left B_P(eps) (level {:.17g})", row.t,
                                             row.lyapunov));
    }
    trace.rows.push_back(row);

    if (k < n) xi = step_rk4(xi, row.v, psi, p.g(), scenario.dt);
  }
  return trace;
}

Metrics metrics(const Trace& trace, const Scenario& scenario, double steady_start) {
  Metrics m;
  const auto& rows = trace.rows;
  m.steps = static_cast<int>(rows.size());
  if (rows.empty()) return m;

  const ConstraintParams& p = scenario.params;
  const double alpha = scenario.cert.gain.alpha;
  double sum_sq = 0.0;
  int steady = 0;
  int saturated = 0;
  std::vector<double> times;
  times.reserve(rows.size());
  m.min_vc_margin = std::numeric_limits<double>::infinity();
  m.min_u_margin = std::numeric_limits<double>::infinity();
  const double v0 = rows.front().lyapunov;

  for (std::size_t k = 0; k < rows.size(); ++k) {
    const TraceRow& r = rows[k];
    const double err = (r.xi.head<3>() - r.xi_ref.head<3>()).norm();
    if (r.t >= steady_start) {
      sum_sq += err * err;
      m.max_position_error = std::max(m.max_position_error, err);
      ++steady;
    }
    saturated += r.saturated ? 1 : 0;
    m.u_violations += r.in_u ? 0 : 1;
    m.vc_violations += r.in_vc ? 0 : 1;
    times.push_back(r.control_seconds);

    const VcClauses c = vc_clauses(r.v, p);
    m.min_vc_margin = std::min(m.min_vc_margin, -std::max({c.ball, c.cone, c.halfspace}));
    m.min_u_margin =
        std::min(m.min_u_margin, std::min({p.t_max() - r.u.thrust, r.u.thrust,
                                           p.phi_max() - std::abs(r.u.roll),
                                           p.theta_max() - std::abs(r.u.pitch)}));

    m.max_level_ratio = std::max(m.max_level_ratio, r.lyapunov / scenario.cert.eps);
    if (v0 > 0.0) {
      m.max_decay_ratio = std::max(m.max_decay_ratio, r.lyapunov / (v0 * std::exp(-alpha * r.t)));
    }
    if (k > 0 && k + 1 < rows.size()) {
      const double vdot = (rows[k + 1].lyapunov - rows[k - 1].lyapunov) /
                          (rows[k + 1].t - rows[k - 1].t);
      m.max_decay_violation = std::max(m.max_decay_violation, vdot + alpha * r.lyapunov);
    }
  }
  m.rms_position_error = steady > 0 ? std::sqrt(sum_sq / steady) : 0.0;
  m.final_position_error = (rows.back().xi.head<3>() - rows.back().xi_ref.head<3>()).norm();
  m.saturation_duty = static_cast<double>(saturated) / static_cast<double>(rows.size());

  double total = 0.0;
  for (const double t : times) total += t;
  m.mean_control_seconds = total / static_cast<double>(times.size());
  std::sort(times.begin(), times.end());
  const auto idx = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(times.size()))) - 1;
  m.p99_control_seconds = times[std::min(idx, times.size() - 1)];
  return m;
}

}  // namespace flatsat
