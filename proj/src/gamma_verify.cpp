#include "hallbounds/gamma_verify.hpp"

#include "hallbounds/bounds_hs.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace hallbounds {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vector3 require_unit(const Vector3& xi) {
  if (!xi.allFinite()) throw InputError("direction must be finite");
  if (std::abs(xi.norm() - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "direction must be a unit vector (|xi| = " << xi.norm() << ")";
    throw InputError(os.str());
  }
  return xi;
}

// Deterministic reduction: always adds neighbors pairwise, so the result does
// not depend on accumulation order and carries ~log2(n) rounding depth.
Matrix6 pairwise_sum(std::vector<Matrix6>& terms) {
  if (terms.empty()) return Matrix6::Zero();
  std::size_t n = terms.size();
  while (n > 1) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) terms[i] = terms[2 * i] + terms[2 * i + 1];
    if (n % 2 == 1) {
      terms[half] = terms[n - 1];
      n = half + 1;
    } else {
      n = half;
    }
  }
  return terms[0];
}

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    std::ostringstream os;
    os << name << " must be positive, got " << v;
    throw InputError(os.str());
  }
}

}  // namespace

void L0Params::validate() const {
  for (double v : {t1, t2, t3, t4, t5})
    if (!std::isfinite(v)) throw InputError("comparison-tensor parameters must be finite");
  if (t1 < 0.0 || t3 < 0.0 || t4 < 0.0 || t5 < 0.0)
    throw InputError("diagonal comparison-tensor parameters must be nonnegative");
  const double slack = 1e-12 * std::max({1.0, t1 * t3, t2 * t2});
  if (t1 * t3 + slack < t2 * t2) {
    std::ostringstream os;
    os << "comparison tensor is not PSD: t1 t3 = " << t1 * t3 << " < t2^2 = " << t2 * t2;
    throw InputError(os.str());
  }
}

Matrix6 build_l0_matrix(const L0Params& l0) {
  l0.validate();
  Matrix6 m = Matrix6::Zero();
  m(0, 0) = m(1, 1) = l0.t1;
  m(2, 2) = l0.t4;
  m(3, 3) = m(4, 4) = l0.t3;
  m(5, 5) = l0.t5;
  m(0, 4) = m(4, 0) = l0.t2;
  m(1, 3) = m(3, 1) = -l0.t2;
  return m;
}

Matrix6 gamma1_of_xi(const Vector3& xi_in) {
  const Vector3 xi = require_unit(xi_in);
  const Matrix3 P = xi * xi.transpose();
  Matrix6 g = Matrix6::Zero();
  g.topLeftCorner<3, 3>() = Matrix3::Identity() - P;
  g.bottomRightCorner<3, 3>() = P;
  return g;
}

Matrix6 gamma_of_xi(const L0Params& l0, const Vector3& xi_in) {
  l0.validate();
  require_positive(l0.t1, "t1");
  require_positive(l0.t4, "t4");
  const double d1 = l0.d1();
  const double d2 = l0.d2();
  require_positive(d1, "d1 = t3 - t2^2/t1");
  require_positive(d2, "d2 = t5");
  const Vector3 xi = require_unit(xi_in);

  Matrix3 C1i = Matrix3::Zero();
  C1i(0, 0) = C1i(1, 1) = 1.0 / l0.t1;
  C1i(2, 2) = 1.0 / l0.t4;
  Matrix3 C2 = Matrix3::Zero();
  C2(0, 1) = l0.t2;
  C2(1, 0) = -l0.t2;
  Matrix3 D = Matrix3::Zero();
  D(0, 0) = D(1, 1) = d1;
  D(2, 2) = d2;

  const Matrix3 P = xi * xi.transpose();
  const double Dxx = xi.dot(D * xi);
  const double Cxx = xi.dot(C1i * xi);

  Matrix6 g;
  g.topLeftCorner<3, 3>() =
      C1i + C1i * C2 * P * C2.transpose() * C1i / Dxx - C1i * P * C1i / Cxx;
  g.topRightCorner<3, 3>() = C1i * C2.transpose() * P / Dxx;
  g.bottomLeftCorner<3, 3>() = P * C2 * C1i / Dxx;
  g.bottomRightCorner<3, 3>() = P / Dxx;
  return g;
}

std::pair<double, double> gamma_defining_residuals(const L0Params& l0, const Vector3& xi,
                                                   const Vector6& A) {
  if (!A.allFinite()) throw InputError("field vector must be finite");
  const Matrix6 G = gamma_of_xi(l0, xi);
  const Matrix6 G1 = gamma1_of_xi(xi);
  const Matrix6 L0 = build_l0_matrix(l0);
  const Vector6 B = G * A;
  const double r1 = (G1 * B - B).cwiseAbs().maxCoeff();
  const double r2 = (G1 * (A - L0 * B)).cwiseAbs().maxCoeff();
  return {r1, r2};
}

Matrix6 GammaAverage::matrix() const {
  const double be = l0.t2 / l0.t1;
  Matrix6 m = Matrix6::Zero();
  m(0, 0) = m(1, 1) = r1 + be * be * p1;
  m(2, 2) = r2;
  m(3, 3) = m(4, 4) = p1;
  m(5, 5) = p2;
  m(0, 4) = m(4, 0) = -be * p1;
  m(1, 3) = m(3, 1) = be * p1;
  return m;
}

double GammaAverage::trace_identity_residual() const {
  return std::abs(2.0 * q1 / l0.t1 + q2 / l0.t4 - 1.0);
}

GammaAverage gamma_avg_closed(const L0Params& l0) {
  l0.validate();
  require_positive(l0.t1, "t1");
  require_positive(l0.t4, "t4");
  const double d1 = l0.d1();
  const double d2 = l0.d2();
  require_positive(d1, "d1 = t3 - t2^2/t1");
  require_positive(d2, "d2 = t5");

  GammaAverage avg;
  avg.l0 = l0;
  const double g14 = g_fun(l0.t1 / l0.t4);
  avg.q2 = l0.t4 * g14;
  avg.q1 = 0.5 * l0.t1 * (1.0 - g14);
  avg.r1 = (1.0 + g14) / (2.0 * l0.t1);
  avg.r2 = (1.0 - g14) / l0.t4;
  const double gd = g_fun(d2 / d1);
  avg.p1 = (1.0 - gd) / (2.0 * d1);
  avg.p2 = gd / d2;
  return avg;
}

Matrix6 gamma_avg_numeric(const L0Params& l0, int n_theta, int n_phi, double phi_offset) {
  if (n_theta < 2 || n_phi < 2) throw InputError("quadrature orders must be at least 2");
  l0.validate();

  std::vector<double> nodes, weights;
  gauss_legendre(n_theta, nodes, weights);

  std::vector<Matrix6> outer;
  outer.reserve(static_cast<std::size_t>(n_theta));
  std::vector<Matrix6> inner;
  inner.reserve(static_cast<std::size_t>(n_phi));
  for (int i = 0; i < n_theta; ++i) {
    const double u = nodes[static_cast<std::size_t>(i)];
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    inner.clear();
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * kPi * k / n_phi + phi_offset;
      const Vector3 xi(s * std::cos(phi), s * std::sin(phi), u);
      inner.push_back(gamma_of_xi(l0, xi / xi.norm()));
    }
    outer.push_back(weights[static_cast<std::size_t>(i)] / n_phi * pairwise_sum(inner));
  }
  return 0.5 * pairwise_sum(outer);
}

Matrix6 gamma_avg_adaptive(const L0Params& l0, double cauchy_tol, int max_order,
                           int* order_used) {
  int n = 8;
  Matrix6 prev = gamma_avg_numeric(l0, n, 2 * n);
  while (n < max_order) {
    n *= 2;
    const Matrix6 cur = gamma_avg_numeric(l0, n, 2 * n);
    if ((cur - prev).cwiseAbs().maxCoeff() < cauchy_tol) {
      if (order_used) *order_used = n;
      return cur;
    }
    prev = cur;
  }
  if (order_used) *order_used = n;
  return prev;
}

Matrix6 gamma_avg_closed_inverse(const L0Params& l0) {
  require_positive(l0.t1, "t1");
  require_positive(l0.t4, "t4");
  require_positive(l0.t5, "t5");
  const double g14 = g_fun(l0.t1 / l0.t4);
  const double r1 = (1.0 + g14) / (2.0 * l0.t1);
  const double r2 = (1.0 - g14) / l0.t4;
  const double be = l0.t2 / l0.t1;
  Matrix6 m = Matrix6::Zero();
  m(0, 0) = m(1, 1) = 1.0 / r1;
  m(2, 2) = 1.0 / r2;
  m(3, 3) = m(4, 4) = be * be / r1;
  m(5, 5) = l0.t5;
  m(0, 4) = m(4, 0) = be / r1;
  m(1, 3) = m(3, 1) = -be / r1;
  return m;
}

BoundsVerdict hs_inequality_check(const Matrix6& yt, const L0Params& l0, double tol) {
  l0.validate();
  const Matrix6 L0 = build_l0_matrix(l0);
  const Matrix6 inv = gamma_avg_closed_inverse(l0);

  const bool axial_limit = std::isinf(yt(2, 2)) && yt(2, 2) > 0.0;
  // Finite entries must form a symmetric matrix.
  double scale = 1.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (std::isfinite(yt(i, j))) scale = std::max(scale, std::abs(yt(i, j)));
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      if (!std::isfinite(yt(i, j)) || !std::isfinite(yt(j, i)))
        throw InputError("off-diagonal Y-block entries must be finite");
      if (std::abs(yt(i, j) - yt(j, i)) > 1e-12 * scale)
        throw InputError("Y-block must be symmetric");
    }
  }
  for (int i = 0; i < 6; ++i)
    if (i != 2 && !std::isfinite(yt(i, i)))
      throw InputError("only the axial inverse entry (3,3) may be infinite");
  if (!axial_limit && !std::isfinite(yt(2, 2)))
    throw InputError("diagonal Y-block entries must be finite or the +inf axial limit");

  double residual;
  std::vector<std::pair<std::string, double>> echo = {{"t1", l0.t1},
                                                      {"t2", l0.t2},
                                                      {"t3", l0.t3},
                                                      {"t4", l0.t4},
                                                      {"t5", l0.t5}};
  if (axial_limit) {
    // The infinite axial entry dominates its (otherwise empty) row/column:
    // it contributes +inf >= 0, and the test reduces to the complementary
    // 5x5 principal block.
    for (int j = 0; j < 6; ++j) {
      if (j == 2) continue;
      if (std::abs(yt(2, j)) > 1e-12 * scale || std::abs(yt(j, 2)) > 1e-12 * scale)
        throw InputError("infinite axial entry requires a zero row/column around it");
    }
    const std::array<int, 5> keep = {0, 1, 3, 4, 5};
    Eigen::Matrix<double, 5, 5> m;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        m(i, j) = yt(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]) +
                  L0(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]) -
                  inv(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
    const Eigen::Matrix<double, 5, 5> sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> es(sym, Eigen::EigenvaluesOnly);
    residual = -es.eigenvalues().minCoeff();
    echo.emplace_back("axial_limit", 1.0);
  } else {
    const Matrix6 m = yt + L0 - inv;
    const Matrix6 sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix6> es(sym, Eigen::EigenvaluesOnly);
    residual = -es.eigenvalues().minCoeff();
    echo.emplace_back("axial_limit", 0.0);
  }
  return make_verdict("hs_matrix_psd", residual, tol, std::move(echo));
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InputError("quadrature order must be at least 1");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One clean evaluation of P' at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    weights[static_cast<std::size_t>(i)] = w;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n == 1) {
    nodes[0] = 0.0;
    weights[0] = 2.0;
  }
}

}  // namespace hallbounds
