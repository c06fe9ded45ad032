#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "flatsat/constraint_sets.hpp"

namespace flatsat {

enum class ActiveConstraint { kNone, kBall, kCone, kHalfspace };

std::string_view to_string(ActiveConstraint c);

struct SaturationResult {
  FlatInput v_out = FlatInput::Zero();
  double lambda = 1.0;
  bool saturated = false;
  ActiveConstraint active = ActiveConstraint::kNone;
};

/// Real members of the KKT candidate set M(v): the scalings at which the ray
/// lambda * v meets the boundary of one of the V_c clauses. Fixed capacity,
/// no allocation.
class CandidateSet {
 public:
  static constexpr std::size_t kCapacity = 6;

  void push(double value) {
    if (size_ < kCapacity) values_[size_++] = value;
  }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  double operator[](std::size_t i) const { return values_[i]; }
  const double* begin() const { return values_.data(); }
  const double* end() const { return values_.data() + size_; }

 private:
  std::array<double, kCapacity> values_{};
  std::size_t size_ = 0;
};

/// Enumerates M(v) in the order: half-space root -g/v3, the ball/cone
/// intersection candidate T_max / (v3 sqrt(1 + tan^2 eps_max)), the two cone
/// roots, the two ball roots. Complex roots and undefined entries (v3 = 0 for
/// the first two) are dropped; a degenerate cone quadratic (a1 = 0) contributes
/// its single linear root. Throws DomainError for v = 0.
CandidateSet candidate_set(const FlatInput& v, const ConstraintParams& p);

/// Ray saturation onto V_c: v itself when v is in V_c, otherwise lambda* v with
/// lambda* = max { lambda in M(v), 0 < lambda <= 1, lambda v in V_c }.
SaturationResult saturate(const FlatInput& v, const ConstraintParams& p,
                          double tol = kMembershipTol);

/// Bisection reference for lambda*: returns the largest lambda in [0, 1] with
/// lambda v in V_c (zero tolerance), to 2^-iters. Returns 1 when v is in V_c.
double saturate_oracle(const FlatInput& v, const ConstraintParams& p, int iters = 60);

}  // namespace flatsat
