#include "hallbounds/tensor_core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace hallbounds {

void TIConductivity::validate() const {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c)))
    throw InputError("conductivity coefficients must be finite");
  if (!(a > 0.0) || !(b > 0.0)) {
    std::ostringstream os;
    os << "in-plane and axial coefficients must be positive (a=" << a << ", b=" << b << ")";
    throw InputError(os.str());
  }
}

void PhaseDistribution::validate() const {
  if (entries.empty()) throw InputError("phase distribution needs at least one phase");
  double total = 0.0;
  for (const auto& e : entries) {
    if (!std::isfinite(e.weight) || e.weight < 0.0)
      throw InputError("phase weights must be nonnegative");
    e.phase.validate();
    total += e.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "phase weights must sum to 1 (got " << total << ")";
    throw InputError(os.str());
  }
}

Matrix3 rot_generator() {
  Matrix3 j = Matrix3::Zero();
  j(1, 0) = 1.0;
  j(0, 1) = -1.0;
  return j;
}

Matrix3 ti_to_matrix(const TIConductivity& p) {
  Matrix3 m = Matrix3::Zero();
  m(0, 0) = m(1, 1) = p.a;
  m(2, 2) = p.b;
  m(1, 0) = p.c;
  m(0, 1) = -p.c;
  return m;
}

std::pair<Matrix3, Matrix3> sym_antisym_split(const Matrix3& m) {
  Matrix3 s = 0.5 * (m + m.transpose());
  Matrix3 a = 0.5 * (m - m.transpose());
  return {s, a};
}

TIConductivity matrix_to_ti(const Matrix3& m, double tol) {
  TIConductivity p;
  p.a = 0.5 * (m(0, 0) + m(1, 1));
  p.b = m(2, 2);
  p.c = 0.5 * (m(1, 0) - m(0, 1));
  Matrix3 residual = m - ti_to_matrix(p);
  const double err = residual.cwiseAbs().maxCoeff();
  if (!(err <= tol)) {
    std::ostringstream os;
    os << "matrix is not transversely isotropic about x3 (pattern residual " << err << ")";
    throw InputError(os.str());
  }
  return p;
}

Matrix6 build_block_L(const Matrix3& s) {
  auto [S, A] = sym_antisym_split(s);
  Eigen::LLT<Matrix3> llt(S);
  if (llt.info() != Eigen::Success)
    throw InputError("symmetric part of the conductivity must be positive definite");
  const Matrix3 Si = llt.solve(Matrix3::Identity());
  Matrix6 L;
  L.topLeftCorner<3, 3>() = Si;
  L.topRightCorner<3, 3>() = -Si * A;
  L.bottomLeftCorner<3, 3>() = A * Si;
  L.bottomRightCorner<3, 3>() = S - A * Si * A;
  return L;
}

Matrix6 build_block_L(const TIConductivity& p) {
  p.validate();
  return build_block_L(ti_to_matrix(p));
}

namespace {

void require_symmetric(const Matrix6& m, double tol, const char* which) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    std::ostringstream os;
    os << which << " matrix must be symmetric (asymmetry " << asym << ")";
    throw InputError(os.str());
  }
}

}  // namespace

double psd_order_margin(const Matrix6& m1, const Matrix6& m2, double tol) {
  require_symmetric(m1, tol, "first");
  require_symmetric(m2, tol, "second");
  Matrix6 diff = m2 - m1;
  diff = 0.5 * (diff + diff.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix6> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool psd_order_check(const Matrix6& m1, const Matrix6& m2, double tol) {
  return psd_order_margin(m1, m2, tol) >= -tol;
}

double delta12(const Matrix3& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

}  // namespace hallbounds
