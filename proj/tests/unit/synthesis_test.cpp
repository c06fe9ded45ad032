#include "flatsat/synthesis.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "flatsat/errors.hpp"
#include "flatsat/saturation.hpp"

namespace flatsat {
namespace {

const ConstraintParams kParams = ConstraintParams::reference();

// Published gains (rounded to four decimals).
const GainMatrix kTableP{0.2109, 0.2813, 0.75, 0.75};
const GainMatrix kTrackingP{0.9766, 0.7813, 1.25, 1.25};

// Hand solution of the axis LMI at equality (zero margin): alpha q3 = 2,
// q3 + alpha q2 = 0, 2 q2 + alpha q1 = 0, whose inverse is
// P = [alpha^3 / 2, alpha^2 / 2; alpha^2 / 2, alpha].
GainMatrix boundary_gain(double alpha) {
  return {alpha * alpha * alpha / 2.0, alpha * alpha / 2.0, alpha, alpha};
}

double min_eigenvalue(const Eigen::Matrix<double, 7, 7>& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 7, 7>>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

TEST(SolveStabilizingP, ReproducesPublishedGains) {
  for (const GainMatrix& ref : {kTableP, kTrackingP}) {
    const GainMatrix p = solve_stabilizing_p(ref.alpha);
    EXPECT_NEAR(p.p1, ref.p1, 1e-2);
    EXPECT_NEAR(p.p2, ref.p2, 1e-2);
    EXPECT_NEAR(p.p3, ref.p3, 1e-2);
  }
}

TEST(SolveStabilizingP, ApproachesHandSolutionAsMarginVanishes) {
  for (const double alpha : {0.25, 0.75, 1.25, 3.0}) {
    const GainMatrix p = solve_stabilizing_p(alpha, 1e-10);
    const GainMatrix ref = boundary_gain(alpha);
    EXPECT_NEAR(p.p1, ref.p1, 1e-8 * (1.0 + ref.p1));
    EXPECT_NEAR(p.p2, ref.p2, 1e-8 * (1.0 + ref.p2));
    EXPECT_NEAR(p.p3, ref.p3, 1e-8 * (1.0 + ref.p3));
  }
}

TEST(SolveStabilizingP, DecayResidualWithinCertificateTolerance) {
  for (const double alpha : {0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 2.0, 5.0}) {
    const GainMatrix p = solve_stabilizing_p(alpha);
    EXPECT_TRUE(p.positive_definite());
    EXPECT_LE(lyapunov_residual(p), 1e-6) << "alpha " << alpha;
  }
}

TEST(SolveStabilizingP, DenseLmiMatchesAxisCondition) {
  const double alpha = 0.75;
  const double margin = 1e-6;
  const GainMatrix p = solve_stabilizing_p(alpha, margin);
  const Matrix6d q = p.dense().inverse();
  const Matrix6d a = flat_a();
  const Eigen::Matrix<double, 6, 3> b = flat_b();
  const Matrix6d lmi = q * a.transpose() + a * q - 2.0 * b * b.transpose() + alpha * q;
  const double top =
      Eigen::SelfAdjointEigenSolver<Matrix6d>(lmi, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  EXPECT_LE(top, -margin + 1e-9);
}

TEST(SolveStabilizingP, InfeasibleInputs) {
  EXPECT_THROW(solve_stabilizing_p(0.0), SynthesisError);
  EXPECT_THROW(solve_stabilizing_p(-1.0), SynthesisError);
  // Feasible only for margin < 2 / (1 + alpha^2).
  EXPECT_THROW(solve_stabilizing_p(1.0, 1.0), SynthesisError);
  EXPECT_THROW(solve_stabilizing_p(0.75, 2.5), SynthesisError);
  EXPECT_NO_THROW(solve_stabilizing_p(1.0, 0.99));
}

TEST(CheckGain, AcceptsPublishedGainsAtTableTolerance) {
  for (const GainMatrix& ref : {kTableP, kTrackingP}) {
    const GainCheck check = check_gain(ref, 1e-2);
    EXPECT_TRUE(check.positive_definite);
    EXPECT_TRUE(check.passes) << "residual " << check.residual;
  }
  EXPECT_FALSE(check_gain({1.0, 2.0, 1.0, 0.5}, 1e-2).passes);
}

TEST(EpsMax, ReferenceValue) {
  const EpsMax e = eps_max(kTableP, 2.9019);
  EXPECT_NEAR(e.eps, 3.8692, 1e-3);
  EXPECT_DOUBLE_EQ(e.tau, 1.0 / 0.75);
}

TEST(EpsMax, IdentityBlock) {
  const EpsMax e = eps_max({2.0, 0.0, 1.0, 1.0}, 1.0);
  EXPECT_DOUBLE_EQ(e.eps, 1.0);
  EXPECT_DOUBLE_EQ(e.tau, 1.0);
}

TEST(EpsMax, SProcedureFeasibleAtOptimumAndTight) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const GainMatrix gain = solve_stabilizing_p(u(rng));
    const double rho = u(rng);
    const EpsMax e = eps_max(gain, rho);
    EXPECT_NEAR(e.eps * gain.p3, rho, 1e-9 * rho);
    EXPECT_GE(min_eigenvalue(s_procedure_matrix(gain, rho, e.eps, e.tau)), -1e-9);

    // Slightly larger level: no multiplier on a fine grid works.
    const double eps_big = e.eps * (1.0 + 1e-3);
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 4000; ++k) {
      const double tau = 4.0 * e.tau * k / 4000.0;
      best = std::max(best, min_eigenvalue(s_procedure_matrix(gain, rho, eps_big, tau)));
    }
    EXPECT_LT(best, -1e-12);
  }
}

TEST(EpsMax, ImplicationHoldsInsideAndFailsJustOutside) {
  const EllipsoidCert cert = run_procedure_1(kParams, 0.75, 1.0);
  const Matrix6d p = cert.gain.dense();
  const Eigen::Matrix<double, 3, 6> btp = flat_b().transpose() * p;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto boundary = sample_ellipsoid_boundary(cert, 100000, 43);
  for (const FlatState& xi : boundary) {
    const FlatState inside = xi * std::pow(u(rng), 1.0 / 6.0);
    ASSERT_LE((btp * inside).squaredNorm(), cert.rho + 1e-9);
  }
  bool violated = false;
  for (const FlatState& xi : boundary) {
    violated = violated || (btp * (xi * std::sqrt(1.01))).squaredNorm() > cert.rho + 1e-9;
  }
  EXPECT_TRUE(violated);
}

TEST(RunProcedure1, ReferenceCertificate) {
  const EllipsoidCert cert = run_procedure_1(kParams, 0.75, 1.0);
  EXPECT_NEAR(cert.rho, 2.9019, 1e-3);
  EXPECT_NEAR(cert.eps, 3.8692, 1e-3);
  EXPECT_EQ(cert.gamma, 1.0);
}

TEST(RunProcedure1, GammaDoesNotEnterSynthesis) {
  const EllipsoidCert a = run_procedure_1(kParams, 0.75, 1.0);
  const EllipsoidCert b = run_procedure_1(kParams, 0.75, 15.0);
  EXPECT_EQ(a.eps, b.eps);
  EXPECT_EQ(a.gain.p1, b.gain.p1);
  EXPECT_EQ(b.gamma, 15.0);
  EXPECT_THROW(run_procedure_1(kParams, 0.75, 0.5), SynthesisError);
}

TEST(RunProcedure1, EllipsoidShrinksAsDecayRateGrows) {
  double prev_eps = std::numeric_limits<double>::infinity();
  double prev_area = std::numeric_limits<double>::infinity();
  for (const double alpha : {0.25, 0.5, 0.75, 1.0}) {
    const EllipsoidCert cert = run_procedure_1(kParams, alpha, 1.0);
    EXPECT_LT(cert.eps, prev_eps);
    EXPECT_LT(projection_area(cert), prev_area);
    prev_eps = cert.eps;
    prev_area = projection_area(cert);
  }
}

TEST(Sampling, BoundaryPointsLieOnLevelSet) {
  const EllipsoidCert cert = run_procedure_1(kParams, 0.75, 1.0);
  const Matrix6d p = cert.gain.dense();
  for (const FlatState& xi : sample_ellipsoid_boundary(cert, 500, 7)) {
    EXPECT_NEAR(xi.dot(p * xi), cert.eps, 1e-12 * cert.eps);
  }
  const auto halton = halton_boundary_points(cert, 20);
  ASSERT_EQ(halton.size(), 20u);
  for (const FlatState& xi : halton) EXPECT_NEAR(xi.dot(p * xi), cert.eps, 1e-12 * cert.eps);
  EXPECT_EQ(halton, halton_boundary_points(cert, 20));
}

TEST(VerifyCert, UnitGainNeverSaturatesOnBoundary) {
  const EllipsoidCert cert = run_procedure_1(kParams, 0.75, 1.0);
  const VerificationReport r = verify_cert(cert, kParams, 10000, 5);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.saturated, 0);
  EXPECT_EQ(r.samples, 10000);
  EXPECT_EQ(r.seed, 5u);
}

// The four-digit table entries leave a positive decay residual of order 1e-3,
// so only the table tolerance applies to the decay identity.
TEST(VerifyCert, PublishedGainHoldsWithinTableTolerance) {
  const EllipsoidCert cert = certificate_for_gain(kParams, kTableP, 1.0);
  const VerificationReport strict = verify_cert(cert, kParams, 10000, 5);
  EXPECT_EQ(strict.nagumo_failures, 0);
  EXPECT_EQ(strict.gain_failures, 0);
  EXPECT_EQ(strict.saturated, 0);
  EXPECT_GT(strict.decay_failures, 0);
  EXPECT_LT(strict.worst_decay, 1e-2);

  Margins table;
  table.cert = table.table;
  EXPECT_TRUE(verify_cert(cert, kParams, 10000, 5, table).passed());
}

TEST(VerifyCert, HighGainSaturatesButStaysInvariant) {
  const EllipsoidCert cert = run_procedure_1(kParams, 0.75, 15.0);
  const VerificationReport r = verify_cert(cert, kParams, 10000, 6);
  EXPECT_EQ(r.nagumo_failures, 0);
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.saturated, 0);
  EXPECT_GE(r.worst_gamma_lambda, 1.0 - 1e-9);
}

TEST(VerifyCert, InflatedLevelIsRejected) {
  EllipsoidCert cert = run_procedure_1(kParams, 0.75, 1.0);
  cert.eps *= 1.5;
  const VerificationReport r = verify_cert(cert, kParams, 10000, 7);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.failures(), 0);
  EXPECT_GE(r.worst_index, 0);
}

TEST(VerifyCert, DeterministicForSeed) {
  const EllipsoidCert cert = run_procedure_1(kParams, 0.75, 5.0);
  const VerificationReport a = verify_cert(cert, kParams, 2000, 99);
  const VerificationReport b = verify_cert(cert, kParams, 2000, 99);
  EXPECT_EQ(a.worst_decay, b.worst_decay);
  EXPECT_EQ(a.saturated, b.saturated);
  EXPECT_EQ(a.worst_state, b.worst_state);
}

}  // namespace
}  // namespace flatsat
