#pragma once

#include "hallbounds/types.hpp"

namespace hallbounds {

// In-plane rotation generator: J e1 = e2, J e2 = -e1, J e3 = 0.
Matrix3 rot_generator();

Matrix3 ti_to_matrix(const TIConductivity& p);

// (symmetric part, antisymmetric part).
std::pair<Matrix3, Matrix3> sym_antisym_split(const Matrix3& m);

// Recover TI coefficients from a matrix of the TI pattern; throws InputError
// if the matrix does not match the pattern within an absolute tolerance.
TIConductivity matrix_to_ti(const Matrix3& m, double tol = 1e-9);

// Block form of a non-symmetric conductivity s = S + A (S = sym, A = antisym):
//   [ S^-1        -S^-1 A      ]
//   [ A S^-1   S - A S^-1 A    ]
// This is the quadratic-form representation the order bounds are stated in.
// Throws InputError when S is not positive definite.
Matrix6 build_block_L(const Matrix3& s);
Matrix6 build_block_L(const TIConductivity& p);

// Signed margin of m2 - m1 in the PSD order: the smallest eigenvalue of the
// symmetrized difference. Both inputs must be symmetric within
// tol * max(1, ||.||_inf); otherwise InputError.
double psd_order_margin(const Matrix6& m1, const Matrix6& m2, double tol = kDefaultTol);

// True when m2 - m1 is PSD up to -tol.
bool psd_order_check(const Matrix6& m1, const Matrix6& m2, double tol = kDefaultTol);

// Upper-left 2x2 sub-determinant m11 m22 - m12 m21.
double delta12(const Matrix3& m);

}  // namespace hallbounds
