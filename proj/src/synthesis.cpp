#include "flatsat/synthesis.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "flatsat/errors.hpp"
#include "flatsat/saturation.hpp"

namespace flatsat {

namespace {

double max_eigenvalue(const Matrix6d& m) {
  Eigen::SelfAdjointEigenSolver<Matrix6d> solver(0.5 * (m + m.transpose()),
                                                 Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

Matrix6d inverse_sqrt(const Matrix6d& p) {
  Eigen::SelfAdjointEigenSolver<Matrix6d> solver(p);
  return solver.operatorInverseSqrt();
}

// Radical inverse of i in the given prime base.
double radical_inverse(int i, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (i > 0) {
    result += f * (i % base);
    i /= base;
    f /= base;
  }
  return result;
}

}  // namespace

Eigen::Matrix2d GainMatrix::axis() const {
  Eigen::Matrix2d m;
  m << p1, p2, p2, p3;
  return m;
}

Matrix6d GainMatrix::dense() const {
  Matrix6d m;
  const Eigen::Matrix3d eye = Eigen::Matrix3d::Identity();
  m << p1 * eye, p2 * eye, p2 * eye, p3 * eye;
  return m;
}

double lyapunov_residual(const GainMatrix& gain) {
  const Matrix6d p = gain.dense();
  const Eigen::Matrix<double, 6, 3> b = flat_b();
  const Matrix6d closed = flat_a() - b * b.transpose() * p;
  return max_eigenvalue(closed.transpose() * p + p * closed + gain.alpha * p);
}

GainCheck check_gain(const GainMatrix& gain, double tol) {
  GainCheck check;
  check.positive_definite = gain.positive_definite();
  check.residual = lyapunov_residual(gain);
  check.passes = check.positive_definite && check.residual <= tol;
  return check;
}

GainMatrix solve_stabilizing_p(double alpha, double margin) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw SynthesisError("solve_stabilizing_p: alpha must be positive");
  }
  if (!(margin >= 0.0)) {
    throw SynthesisError("solve_stabilizing_p: margin must be non-negative");
  }
  const double q3 = (2.0 - margin) / alpha;
  const double q2 = -q3 / alpha;
  const double q1 = (-margin - 2.0 * q2) / alpha;
  if (!(q3 > 0.0) || !(q1 * q3 - q2 * q2 > 0.0)) {
    throw SynthesisError("solve_stabilizing_p: infeasible for alpha = " + std::to_string(alpha) +
                         ", margin = " + std::to_string(margin));
  }

  Eigen::Matrix2d q;
  q << q1, q2, q2, q3;
  Eigen::Matrix2d a;
  a << 0.0, 1.0, 0.0, 0.0;
  const Eigen::Vector2d b(0.0, 1.0);
  const Eigen::Matrix2d lmi = q * a.transpose() + a * q - 2.0 * b * b.transpose() + alpha * q +
                              margin * Eigen::Matrix2d::Identity();
  const double lmi_max = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(lmi).eigenvalues().maxCoeff();
  if (lmi_max > 1e-12 * (1.0 + q.norm())) {
    throw SynthesisError("solve_stabilizing_p: axis LMI not satisfied");
  }

  const Eigen::Matrix2d p_axis = q.inverse();
  GainMatrix gain{p_axis(0, 0), 0.5 * (p_axis(0, 1) + p_axis(1, 0)), p_axis(1, 1), alpha};
  const GainCheck check = check_gain(gain, Margins{}.cert);
  if (!check.passes) {
    throw SynthesisError("solve_stabilizing_p: dense decay check failed (residual " +
                         std::to_string(check.residual) + ")");
  }
  return gain;
}

EpsMax eps_max(const GainMatrix& gain, double rho) {
  const Eigen::Matrix<double, 6, 3> b = flat_b();
  const Eigen::Matrix3d btpb = b.transpose() * gain.dense() * b;
  const double top = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(btpb, Eigen::EigenvaluesOnly)
                         .eigenvalues()
                         .maxCoeff();
  return {rho / top, 1.0 / top};
}

Eigen::Matrix<double, 7, 7> s_procedure_matrix(const GainMatrix& gain, double rho, double eps,
                                               double tau) {
  const Matrix6d p = gain.dense();
  const Eigen::Matrix<double, 6, 3> b = flat_b();
  Eigen::Matrix<double, 7, 7> m = Eigen::Matrix<double, 7, 7>::Zero();
  m.topLeftCorner<6, 6>() = p - tau * p * b * b.transpose() * p;
  m(6, 6) = -eps + tau * rho;
  return m;
}

EllipsoidCert certificate_for_gain(const ConstraintParams& p, const GainMatrix& gain,
                                   double gamma) {
  if (!(gamma >= 1.0)) {
    throw SynthesisError("certificate: gamma must be >= 1");
  }
  if (!gain.positive_definite()) {
    throw SynthesisError("certificate: P is not positive definite");
  }
  EllipsoidCert cert;
  cert.gain = gain;
  cert.rho = max_inscribed_ball(p).rho;
  const EpsMax level = eps_max(gain, cert.rho);
  cert.eps = level.eps;
  cert.tau = level.tau;
  cert.gamma = gamma;
  return cert;
}

EllipsoidCert run_procedure_1(const ConstraintParams& p, double alpha, double gamma,
                              double margin) {
  return certificate_for_gain(p, solve_stabilizing_p(alpha, margin), gamma);
}

double projection_area(const EllipsoidCert& cert) {
  const GainMatrix& k = cert.gain;
  return std::numbers::pi * cert.eps / std::sqrt(k.p1 * k.p3 - k.p2 * k.p2);
}

std::vector<FlatState> sample_ellipsoid_boundary(const EllipsoidCert& cert, int n,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Matrix6d map = std::sqrt(cert.eps) * inverse_sqrt(cert.gain.dense());
  std::vector<FlatState> points;
  points.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    FlatState z;
    for (int k = 0; k < 6; ++k) z(k) = normal(rng);
    points.push_back(map * z.normalized());
  }
  return points;
}

std::vector<FlatState> halton_boundary_points(const EllipsoidCert& cert, int n) {
  static constexpr int kBases[6] = {2, 3, 5, 7, 11, 13};
  const Matrix6d map = std::sqrt(cert.eps) * inverse_sqrt(cert.gain.dense());
  std::vector<FlatState> points;
  points.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 1; i <= n; ++i) {
    // Box-Muller on consecutive Halton coordinates gives Gaussian directions.
    FlatState z;
    for (int k = 0; k < 6; k += 2) {
      const double u1 = radical_inverse(i, kBases[k]);
      const double u2 = radical_inverse(i, kBases[k + 1]);
      const double r = std::sqrt(-2.0 * std::log(u1));
      z(k) = r * std::cos(2.0 * std::numbers::pi * u2);
      z(k + 1) = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    points.push_back(map * z.normalized());
  }
  return points;
}

VerificationReport verify_cert(const EllipsoidCert& cert, const ConstraintParams& p,
                               int n_samples, std::uint64_t seed, const Margins& margins) {
  VerificationReport report;
  report.seed = seed;
  const Matrix6d pm = cert.gain.dense();
  const Matrix6d a = flat_a();
  const Eigen::Matrix<double, 6, 3> b = flat_b();
  const auto points = sample_ellipsoid_boundary(cert, n_samples, seed);
  double worst_score = -std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < points.size(); ++i) {
    const FlatState& xi = points[i];
    const FlatInput raw = -cert.gamma * b.transpose() * pm * xi;
    const SaturationResult sat = saturate(raw, p, margins.identity);
    const FlatState drift = a * xi + b * sat.v_out;
    const double nagumo = xi.dot(pm * drift);
    const double value = xi.dot(pm * xi);
    const double decay = 2.0 * nagumo + cert.gain.alpha * value;
    const double gamma_lambda = cert.gamma * sat.lambda;

    ++report.samples;
    if (sat.saturated) ++report.saturated;
    const bool nagumo_bad = nagumo > margins.identity;
    const bool decay_bad = decay > margins.cert;
    const bool gain_bad = sat.saturated && gamma_lambda < 1.0 - margins.identity;
    report.nagumo_failures += nagumo_bad ? 1 : 0;
    report.decay_failures += decay_bad ? 1 : 0;
    report.gain_failures += gain_bad ? 1 : 0;
    report.worst_nagumo = std::max(report.worst_nagumo, nagumo);
    report.worst_decay = std::max(report.worst_decay, decay);
    if (sat.saturated) report.worst_gamma_lambda = std::min(report.worst_gamma_lambda, gamma_lambda);

    // The located worst sample is the one with the largest decay slack.
    if (decay > worst_score) {
      worst_score = decay;
      report.worst_index = static_cast<int>(i);
      report.worst_state = xi;
    }
  }
  return report;
}

}  // namespace flatsat
