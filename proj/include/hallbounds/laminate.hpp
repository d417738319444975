#pragma once

#include "hallbounds/types.hpp"

#include <array>

namespace hallbounds {

// Two-scale laminate. At the coarse scale, slabs of phase1 with normal
// outer_direction occupy volume fraction outer_fraction; the complement is a
// fine-scale rank-one laminate of phase2/phase3 with normal inner_direction,
// phase2 taking inner_fraction of the fine mixture.
struct LaminateSpec {
  Vector3 outer_direction = Vector3::UnitZ();
  double outer_fraction = 0.5;
  Vector3 inner_direction = Vector3::UnitX();
  double inner_fraction = 0.5;
  Matrix3 phase1 = Matrix3::Identity();
  Matrix3 phase2 = Matrix3::Identity();
  Matrix3 phase3 = Matrix3::Identity();

  // InputError on zero directions, fractions outside (0,1), or phases whose
  // symmetric part is not positive definite. Directions are normalized here.
  void validate_and_normalize();

  std::array<double, 3> fractions() const {
    const double f1 = outer_fraction;
    return {f1, (1.0 - f1) * inner_fraction, (1.0 - f1) * (1.0 - inner_fraction)};
  }
};

// Piecewise-constant field gradients per phase and the two interface jump
// amplitudes (jump across the outer interfaces is eta1 x outer normal, etc.).
struct LaminateFields {
  Matrix3 E1 = Matrix3::Identity();
  Matrix3 E2 = Matrix3::Identity();
  Matrix3 E3 = Matrix3::Identity();
  Vector3 eta1 = Vector3::Zero();
  Vector3 eta2 = Vector3::Zero();
};

struct RankTwoResult {
  Matrix3 sigma_star = Matrix3::Zero();
  LaminateFields fields;
  // Condition estimate (SVD) of the reduced 2x2 jump system.
  double condition = 0.0;
};

// Exact effective conductivity of the two-scale laminate, by eliminating the
// interface jump amplitudes from the flux continuity conditions. Throws
// SingularSystemError if the jump system is numerically singular.
RankTwoResult rank_two_effective(const LaminateSpec& spec);

// Effective conductivity of a simple laminate of sA (fraction f) and sB with
// interface normal xi. Computed as the degenerate two-scale case; agrees with
// the classical closed formula.
Matrix3 rank_one_effective(const Matrix3& sA, const Matrix3& sB, double f, const Vector3& xi);

// Volume average of E_i^T sigma_i E_i over the three phases - the effective
// tensor associated with given phase fields.
Matrix3 effective_from_fields(const std::array<double, 3>& fractions,
                              const std::array<Matrix3, 3>& phases,
                              const LaminateFields& fields);

// Residual norms of the exact-solution conditions: volume average of the
// gradients = identity, tangential continuity across both interface families,
// and flux continuity across both (diagnostics; all ~1e-15 for a valid solve).
struct JumpResiduals {
  double average = 0.0;
  double tangential_outer = 0.0;
  double tangential_inner = 0.0;
  double flux_outer = 0.0;
  double flux_inner = 0.0;
  double max() const;
};
JumpResiduals jump_residuals(const LaminateSpec& spec, const LaminateFields& fields);

// Family of laminates whose effective antisymmetric coefficient escapes the
// naive phase-wise interval as theta -> 0.
//   PlusJ:     inner phases I and 2I + J                       (limit c* -> -kappa/17)
//   HallBlock: inner phases I and [[2,-1,0],[1,2,0],[0,0,1/2]]  (limit c* -> +kappa/13)
// Outer phase: diag(kappa theta^-2, kappa theta^-2, 1), fraction 1 - theta,
// normal (0, theta, 1)/|.|; inner normal (0, 1, 1)/sqrt(2), fractions 1/2.
enum class CounterexampleVariant { PlusJ, HallBlock };

LaminateSpec counterexample_spec(double theta, double kappa, CounterexampleVariant v);

struct SweepPoint {
  double theta = 0.0;
  double c_star = 0.0;       // effective antisymmetric coefficient
  double d12_E2 = 0.0;       // delta12 of the fine-phase gradients
  double d12_E3 = 0.0;
  double partial_iso_residual = 0.0;  // off-pattern antisymmetric entries of sigma*
  double condition = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double limit_c = 0.0;             // two-point extrapolation from the last pair
  double convergence_order = 0.0;   // LS slope of log|c - limit_c| vs log theta
};

// thetas must be positive and strictly decreasing, at least two of them.
SweepResult counterexample_sweep(double kappa, CounterexampleVariant v,
                                 const std::vector<double>& thetas);

// Largest |entry| of the antisymmetric part outside the TI pattern
// (rows/columns mixing in-plane and axial directions).
double partial_iso_residual(const Matrix3& sigma_star);

}  // namespace hallbounds
