#pragma once

#include "hallbounds/types.hpp"

namespace hallbounds {

// Five-parameter comparison tensor
//   L0 = [ C1  C2 ; C2^T  C3 ],  C1 = diag(t1,t1,t4),
//   C2 = [[0,t2,0],[-t2,0,0],[0,0,0]],  C3 = diag(t3,t3,t5).
// PSD iff t1,t3,t4,t5 >= 0 and t1 t3 >= t2^2 (validated with a 1e-12
// relative slack for round-off in t3 = t2^2/t1 inputs).
struct L0Params {
  double t1 = 1.0;
  double t2 = 0.0;
  double t3 = 1.0;
  double t4 = 1.0;
  double t5 = 1.0;

  void validate() const;
  double d1() const { return t3 - t2 * t2 / t1; }
  double d2() const { return t5; }
};

Matrix6 build_l0_matrix(const L0Params& l0);

// Fourier-space projection onto admissible field pairs:
// block-diag(I - xi xi^T, xi xi^T). Idempotent, trace 3.
// Throws InputError unless |xi| = 1 within 1e-12.
Matrix6 gamma1_of_xi(const Vector3& xi);

// Closed-form kernel of the comparison-medium resolvent: the symmetric
// matrix B-from-A map determined by gamma1 B = B and gamma1 (A - L0 B) = 0.
// Requires t1, t4 > 0 and D = diag(d1, d1, d2) positive definite.
Matrix6 gamma_of_xi(const L0Params& l0, const Vector3& xi);

// Residuals of the two defining relations for B = gamma_of_xi(l0,xi) * A:
// (||gamma1 B - B||_inf, ||gamma1 (A - L0 B)||_inf).
std::pair<double, double> gamma_defining_residuals(const L0Params& l0, const Vector3& xi,
                                                   const Vector6& A);

// Closed-form average of gamma_of_xi over the unit sphere. Entry pattern:
//   diag(r1 + be^2 p1, r1 + be^2 p1, r2, p1, p1, p2), be = t2/t1,
//   (1,5) = -be p1, (2,4) = +be p1 (symmetric),
// with p1 = (1 - g(d2/d1))/(2 d1), p2 = g(d2/d1)/d2,
//      q1 = (t1/2)(1 - g(t1/t4)), q2 = t4 g(t1/t4),
//      r1 = (1 + g(t1/t4))/(2 t1), r2 = (1 - g(t1/t4))/t4.
struct GammaAverage {
  L0Params l0;
  double p1 = 0.0, p2 = 0.0, q1 = 0.0, q2 = 0.0, r1 = 0.0, r2 = 0.0;
  Matrix6 matrix() const;
  // |2 q1/t1 + q2/t4 - 1|; zero analytically.
  double trace_identity_residual() const;
};

// Requires d1 > 0 (p1 diverges as d1 -> 0; see gamma_avg_closed_inverse).
GammaAverage gamma_avg_closed(const L0Params& l0);

// Product quadrature of gamma_of_xi over S^2: Gauss-Legendre in cos(theta)
// times uniform trapezoid in phi (exact for the periodic direction).
// phi_offset rotates the phi grid; the average must not depend on it.
// Throws InputError for orders < 2.
Matrix6 gamma_avg_numeric(const L0Params& l0, int n_theta, int n_phi, double phi_offset = 0.0);

// Order-doubling driver: doubles (n_theta, n_phi) from 8x16 until the
// entrywise Cauchy difference is below cauchy_tol or max_order is reached.
// Reports the final theta-order via order_used when non-null.
Matrix6 gamma_avg_adaptive(const L0Params& l0, double cauchy_tol = 1e-11, int max_order = 256,
                           int* order_used = nullptr);

// Closed-form limit of the inverse average as d1 -> 0 (t3 pinned to t2^2/t1):
//   (1,1)=(2,2)=1/r1, (3,3)=1/r2, (4,4)=(5,5)=t2^2/(t1^2 r1), (6,6)=t5,
//   (1,5)=t2/(t1 r1), (2,4)=-t2/(t1 r1)  [and symmetric mirrors].
// Only t1, t2, t4, t5 of l0 are read. Requires t1, t4, t5 > 0.
Matrix6 gamma_avg_closed_inverse(const L0Params& l0);

// The matrix form of the two-phase bound: yt + L0 - gamma_avg_closed_inverse
// must be PSD. Accepts a +infinity (3,3) entry of yt (the harmonic-mean
// limit): that row/column must then be zero elsewhere and the check decouples.
// Throws InputError for (finitely) asymmetric input.
BoundsVerdict hs_inequality_check(const Matrix6& yt, const L0Params& l0, double tol = kDefaultTol);

// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on the
// Legendre recurrence); exposed for the quadrature property tests.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace hallbounds
