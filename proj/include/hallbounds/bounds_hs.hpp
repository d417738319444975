#pragma once

#include "hallbounds/types.hpp"

namespace hallbounds {

// g(r) = integral_0^1 u^2 / (u^2 + (1-u^2)/r) du, strictly increasing
// from 0 to 1 on (0, inf), g(1) = 1/3. Closed antiderivative split at r = 1
// (atan branch for r > 1, atanh branch for r < 1) with an alternating series
// on |r-1| <= 1e-3 where the closed forms cancel. Throws InputError for r <= 0.
double g_fun(double r);

// Coefficients of the two tangency families for a two-phase pair. alpha_pm
// fills only the alpha fields (+ degenerate_flag); hs_coefficients fills all.
// When a1 = a2 the quadratic degenerates: the single finite root (c1+c2)/2 is
// stored in both alpha slots and degenerate_flag is set.
struct HSCoefficients {
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  double t1_plus = 0.0;
  double t1_minus = 0.0;
  double s1_plus = 0.0;
  double s1_minus = 0.0;
  bool degenerate = false;
  // Vertical-line abscissa replacing the lost family when degenerate (= a1).
  double line_a = 0.0;
};

// Roots alpha of a1 a2 (c1 - c2 + ...) ... the quadratic whose two solutions
// make both phase points lie on a circle through the origin:
//   (a1 - a2) alpha^2 - 2 (a1 c2 - a2 c1) alpha - [a1(a2^2+c2^2) - a2(a1^2+c1^2)] = 0,
// evaluated in the cancellation-free form (q = B +/- sqrt(d)) so both roots
// stay accurate when |B| is large.
HSCoefficients alpha_pm(double a1, double c1, double a2, double c2);

// t1 = a1/(a1^2 + (c1-alpha)^2); s1 = 2 t1/(1 + g(b1 t1)) - t1.
std::pair<double, double> t1_s1(double a1, double c1, double b1, double alpha);

// alpha_pm + t1_s1 for both signs. Callers must already have applied the
// b1 >= b2 phase ordering; phase 1 here is the one with the larger b.
HSCoefficients hs_coefficients(const TIConductivity& p1, const TIConductivity& p2);

struct YTensorTI {
  double a_Y = 0.0;
  double c_Y = 0.0;
  double b_Y = 0.0;
};

// Matrix fractional-linear transform of the effective tensor:
//   -f2 s1 - f1 s2 + f1 f2 (s1-s2) (f1 s1 + f2 s2 - sstar)^-1 (s1-s2).
// Throws PoleError when the middle factor is singular (sstar at the
// arithmetic mean) and for s1 = s2 (transform undefined).
Matrix3 y_tensor_matrix(const Matrix3& s1, const Matrix3& s2, double f1, const Matrix3& sstar);

// Same transform on transversely isotropic data: the in-plane pair via the
// complex scalar z = a + i c, the axial coefficient via the real formula.
YTensorTI y_tensor_ti(const TIConductivity& p1, const TIConductivity& p2, double f1,
                      const TIConductivity& pstar);

// Disk membership for both tangency families:
//   residual_pm = a_Y^2 + (c_Y + alpha_pm)^2 - a_Y / s1_pm,
// i.e. (a_Y, c_Y) in the disk of center (1/(2 s1), -alpha), radius 1/(2 s1).
// In the degenerate case the second verdict is the half-plane limit
// a_Y >= line_a, reported as residual line_a - a_Y.
std::pair<BoundsVerdict, BoundsVerdict> hs_disk_check(const YTensorTI& y, const HSCoefficients& h,
                                                      double tol = kDefaultTol);

// a^2 + (c - alpha)^2 - a/t1: zero when the phase point (a, c) lies on the
// tangency circle, which holds by construction for both phases.
double phase_circle_residual(double a, double c, double alpha, double t1);

// Axial bound: b_Y >= 0 and 1/b_Y + 1/b1 >= 1/(b1 (1 - g(b1 t1))), the latter
// rearranged to b_Y <= b1 (1-g)/g so b_Y = 0 is the satisfied limit.
// residual = max(-b_Y, b_Y - b1 (1-g)/g).
BoundsVerdict b_hs_check(double b_Y, double b1, double t1, double tol = kDefaultTol);

// Circle data for plotting, in the (a, -c_Y) plane: every circle is tangent
// to the vertical axis at (0, alpha).
struct DiskGeometry {
  double center_a = 0.0;
  double center_c = 0.0;
  double radius = 0.0;
  double tangent_c = 0.0;  // tangent point is (0, tangent_c)
};

struct HSGeometry {
  DiskGeometry hs_plus, hs_minus;        // solid circles, radius 1/(2 s1)
  DiskGeometry phase_plus, phase_minus;  // dashed circles, radius 1/(2 t1)
  bool degenerate = false;               // minus family replaced by a line
  double line_a = 0.0;                   // vertical line a = line_a when degenerate
};

HSGeometry hs_geometry(const HSCoefficients& h);

// 6x6 block form of the Y-tensor for the matrix inequality. Mirrored Hall
// sign relative to build_block_L (the transform flips the antisymmetric
// part). |b_Y| <= zero_tol applies the harmonic-mean limit: entry (3,3)
// becomes +infinity, which the PSD check handles as the satisfied boundary.
// Throws InputError when a_Y == 0.
Matrix6 yt_block(const YTensorTI& y, double zero_tol = 1e-12);

}  // namespace hallbounds
