#pragma once

#include "hallbounds/types.hpp"

namespace hallbounds {

// Arithmetic/harmonic-mean interval for the axial coefficient:
//   <1/b>^-1 <= b* <= <b>.
std::pair<double, double> b_interval(const PhaseDistribution& d);

// In-plane circle bound data, with per-phase z = a + i c:
//   a_L = <1/a>^-1,  c_L = <c/a> * a_L,  d_L = <a + c^2/a> - c_L^2 / a_L.
// The effective pair (a*, c*) must satisfy
//   (c* - c_L)^2 <= (a* - a_L)(d_L - a*),
// a disk in the (a*, c*) plane. d_L >= a_L always (asserted in circle_params).
struct CircleParams {
  double a_L = 0.0;
  double c_L = 0.0;
  double d_L = 0.0;
};

CircleParams circle_params(const PhaseDistribution& d);

// Signed residual (c*-c_L)^2 - (a*-a_L)(d_L-a*); <= tol means inside.
// Satisfied implies a_L <= a* <= d_L, so no separate a* interval is needed.
BoundsVerdict circle_check(double astar, double cstar, const CircleParams& p,
                           double tol = kDefaultTol);

// The crude antisymmetric bound 2|c*| <= <a + c^2/a> together with its fully
// decoupled cap max(a) + max|c|^2 / min(a). mean_bound <= coarse_cap; both are
// dominated by the circle bound, hence "superfluous".
struct SuperfluousBound {
  double mean_bound = 0.0;
  double coarse_cap = 0.0;
};
SuperfluousBound superfluous_cstar_bound(const PhaseDistribution& d);

// Bound on the effective antisymmetric coefficient assuming in-plane partial
// isotropy of the candidate: |c*| <= (c_upper/a_lower) sqrt(s*_11 s*_22).
// For a transversely isotropic candidate this reduces to (a*/a_lower) c_upper.
// Throws InputError when the symmetric part of sigma_star is not PD.
double partial_iso_cstar_bound(const Matrix3& sigma_star, double a_lower, double c_upper);

// Shift-optimized two-sided bound |2c* - c_plus - c_minus| <=
// (a*/a_lower)(c_plus - c_minus), returned as the admissible interval
// (center, halfwidth) = ((c_plus+c_minus)/2, (a*/(2 a_lower))(c_plus-c_minus)).
// Requires a_lower > 0 and c_plus >= c_minus.
std::pair<double, double> optimal_shift_bound(double astar, double a_lower,
                                              double c_plus, double c_minus);

}  // namespace hallbounds
