#include "flatsat/constraint_sets.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "flatsat/errors.hpp"
#include "test_support.hpp"

namespace flatsat {
namespace {

using testing::inscribed_rho_by_search;
using testing::Membership;

TEST(ConstraintParams, RejectsInfeasibleHover) {
  EXPECT_THROW(ConstraintParams(9.81, 9.81, 0.1, 0.1), ConfigError);
  EXPECT_THROW(ConstraintParams(9.81, 5.0, 0.1, 0.1), ConfigError);
  EXPECT_THROW(ConstraintParams(9.81, 20.0, 0.0, 0.1), ConfigError);
  EXPECT_THROW(ConstraintParams(9.81, 20.0, 0.1, std::numbers::pi / 2.0), ConfigError);
}

TEST(ConstraintParams, EpsMaxIsSmallerAngle) {
  const ConstraintParams p(9.81, 14.0, 0.2, 0.15);
  EXPECT_EQ(p.eps_max(), 0.15);
  EXPECT_DOUBLE_EQ(p.tan_eps_max(), std::tan(0.15));
}

TEST(InU, ReferenceExamples) {
  const ConstraintParams p = ConstraintParams::reference();
  const double g = p.g();
  EXPECT_TRUE(in_u({g, 0.0, 0.0}, p));
  EXPECT_FALSE(in_u({1.46 * g, 0.0, 0.0}, p));
  EXPECT_TRUE(in_u({1.45 * g, 0.1745, -0.1745}, p));
  EXPECT_FALSE(in_u({g, 0.18, 0.0}, p));
  EXPECT_FALSE(in_u({-0.1, 0.0, 0.0}, p));
}

TEST(InVc, ReferenceExamples) {
  const ConstraintParams p = ConstraintParams::reference();
  const double g = p.g();
  EXPECT_TRUE(in_vc(FlatInput::Zero(), p));
  EXPECT_TRUE(in_vc(FlatInput(0.0, 0.0, p.t_max() - g), p));
  EXPECT_FALSE(in_vc(FlatInput(0.0, 0.0, p.t_max() - g + 1e-6), p));
  EXPECT_FALSE(in_vc(FlatInput(g * p.tan_eps_max() + 1e-3, 0.0, 0.0), p));
  EXPECT_TRUE(in_vc(FlatInput(g * p.tan_eps_max() - 1e-3, 0.0, 0.0), p));
  EXPECT_FALSE(in_vc(FlatInput(0.0, 0.0, -g - 1e-3), p));
}

TEST(EpsilonAngle, Examples) {
  EXPECT_EQ(epsilon_angle(FlatInput(0.0, 0.0, 3.0), 9.81), 0.0);
  EXPECT_EQ(epsilon_angle(FlatInput(0.0, 0.0, -9.0), 9.81), 0.0);
  EXPECT_DOUBLE_EQ(epsilon_angle(FlatInput(9.81, 0.0, 0.0), 9.81), std::numbers::pi / 4.0);
  EXPECT_THROW(epsilon_angle(FlatInput(1.0, 0.0, -9.81), 9.81), DomainError);
}

TEST(EpsilonAngle, ConeClauseEquivalence) {
  const ConstraintParams p = ConstraintParams::reference();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lat(-5.0, 5.0);
  std::uniform_real_distribution<double> up(-p.g() + 0.01, 10.0);
  for (int i = 0; i < 20000; ++i) {
    const FlatInput v(lat(rng), lat(rng), up(rng));
    const double angle = epsilon_angle(v, p.g());
    if (std::abs(angle - p.eps_max()) < 1e-9) continue;
    EXPECT_EQ(vc_clauses(v, p).cone <= 0.0, angle <= p.eps_max()) << v.transpose();
  }
}

TEST(MaxInscribedBall, ReferenceValue) {
  const InscribedBall ball = max_inscribed_ball(ConstraintParams::reference());
  EXPECT_NEAR(ball.rho, 2.9019, 1e-3);
}

TEST(MaxInscribedBall, SphereClauseActiveForWideCone) {
  const double g = 9.81;
  const ConstraintParams p(g, 2.0 * g, std::numbers::pi / 2.0 - 1e-6, std::numbers::pi / 2.0 - 1e-6);
  EXPECT_NEAR(max_inscribed_ball(p).rho, g * g, 1e-9 * g * g);
}

TEST(MaxInscribedBall, AgreesWithRadialSearch) {
  for (const ConstraintParams& p :
       {ConstraintParams::reference(), ConstraintParams(9.81, 1.1 * 9.81, 0.5, 0.6),
        ConstraintParams(9.81, 2.0 * 9.81, 0.3, 0.3)}) {
    const double searched = inscribed_rho_by_search([&](const FlatInput& v) { return in_vc(v, p, 0.0); });
    EXPECT_NEAR(max_inscribed_ball(p).rho, searched, 1e-6);
  }
}

TEST(MaxInscribedBall, MonteCarloContainment) {
  const ConstraintParams p = ConstraintParams::reference();
  const double rho = max_inscribed_ball(p).rho;
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100000; ++i) {
    const FlatInput v = testing::random_unit(rng) * std::sqrt(rho) * std::cbrt(u(rng));
    ASSERT_TRUE(in_vc(v, p)) << v.transpose();
  }
  // Radius 1.05 sqrt(rho): directions facing the cone leave V_c.
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const double az = 2.0 * std::numbers::pi * u(rng);
    const double el = std::numbers::pi / 2.0 + p.eps_max() + 0.2 * (u(rng) - 0.5);
    const Eigen::Vector3d d(std::sin(el) * std::cos(az), std::sin(el) * std::sin(az), std::cos(el));
    violations += in_vc(d * 1.05 * std::sqrt(rho), p, 0.0) ? 0 : 1;
  }
  EXPECT_GT(violations, 0);
}

TEST(MaxInscribedBall, IsMaximal) {
  const ConstraintParams p = ConstraintParams::reference();
  const double radius = std::sqrt(max_inscribed_ball(p).rho * (1.0 + 1e-3));
  bool witness = false;
  for (int i = 0; i <= 2000 && !witness; ++i) {
    const double el = std::numbers::pi * i / 2000.0;
    const Eigen::Vector3d d(std::sin(el), 0.0, std::cos(el));
    witness = !in_vc(radius * d, p, 0.0);
  }
  EXPECT_TRUE(witness);
}

TEST(MaxInscribedBall, PrintedConeTypoDoesNotReproduceReferenceValue) {
  // Cone clause as printed with (v3^2 + g) instead of (v3 + g).
  const ConstraintParams p = ConstraintParams::reference();
  const Membership typo = [&](const FlatInput& v) { return testing::in_vc_printed_cone_typo(v, p); };
  const double typo_rho = inscribed_rho_by_search(typo);
  EXPECT_GT(std::abs(typo_rho - 2.9019), 1e-3) << "typo rho = " << typo_rho;
  const double correct =
      inscribed_rho_by_search([&](const FlatInput& v) { return in_vc(v, p, 0.0); });
  EXPECT_NEAR(correct, 2.9019, 1e-3);
}

TEST(Vc, SubsetOfPhysicalConstraints) {
  const ConstraintParams p = ConstraintParams::reference();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> yaw(-std::numbers::pi, std::numbers::pi);
  std::array<double, 10> psis{};
  for (double& psi : psis) psi = yaw(rng);
  for (int i = 0; i < 100000; ++i) {
    const FlatInput v = testing::random_in_vc(rng, p);
    if (!(v.z() > -p.g())) continue;
    for (const double psi : psis) {
      ASSERT_TRUE(in_u(to_physical(v, psi, p.g()), p, 1e-12)) << v.transpose() << " psi " << psi;
    }
  }
}

TEST(Vc, ConvexityWitness) {
  const ConstraintParams p = ConstraintParams::reference();
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const FlatInput a = testing::random_in_vc(rng, p);
    const FlatInput b = testing::random_in_vc(rng, p);
    const double l = u(rng);
    ASSERT_TRUE(in_vc(l * a + (1.0 - l) * b, p, 1e-9));
  }
}

TEST(V, ExactSetIsNotConvex) {
  // v_a = h(T_max, phi_max, theta_max) and v_b = h(T_max, phi_max, -theta_max)
  // both map back into U, but their midpoint needs a roll beyond phi_max.
  const ConstraintParams p = ConstraintParams::reference();
  for (const double psi : {0.0, 0.4, -1.3}) {
    const FlatInput va = accel({p.t_max(), p.phi_max(), p.theta_max()}, psi, p.g());
    const FlatInput vb = accel({p.t_max(), p.phi_max(), -p.theta_max()}, psi, p.g());
    EXPECT_TRUE(in_u(to_physical(va, psi, p.g()), p, 1e-12));
    EXPECT_TRUE(in_u(to_physical(vb, psi, p.g()), p, 1e-12));
    const PhysicalInput mid = to_physical(0.5 * (va + vb), psi, p.g());
    EXPECT_FALSE(in_u(mid, p, 1e-12));
    EXPECT_GT(std::abs(mid.roll), p.phi_max());
  }
}

}  // namespace
}  // namespace flatsat
