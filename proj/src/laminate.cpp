#include "hallbounds/laminate.hpp"

#include "hallbounds/tensor_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hallbounds {

namespace {

Vector3 normalized_or_throw(const Vector3& v, const char* which) {
  if (!v.allFinite()) {
    std::ostringstream os;
    os << which << " direction must be finite";
    throw InputError(os.str());
  }
  const double n = v.norm();
  if (!(n > 1e-300)) {
    std::ostringstream os;
    os << which << " direction must be nonzero";
    throw InputError(os.str());
  }
  return v / n;
}

void require_open_unit(double f, const char* which) {
  if (!std::isfinite(f) || !(f > 0.0) || !(f < 1.0)) {
    std::ostringstream os;
    os << which << " fraction must lie in the open interval (0,1), got " << f;
    throw InputError(os.str());
  }
}

void require_pd_sym(const Matrix3& s, const char* which) {
  if (!s.allFinite()) {
    std::ostringstream os;
    os << which << " must be finite";
    throw InputError(os.str());
  }
  const Matrix3 S = 0.5 * (s + s.transpose());
  Eigen::LLT<Matrix3> llt(S);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << "symmetric part of " << which << " must be positive definite";
    throw InputError(os.str());
  }
}

}  // namespace

void LaminateSpec::validate_and_normalize() {
  outer_direction = normalized_or_throw(outer_direction, "outer");
  inner_direction = normalized_or_throw(inner_direction, "inner");
  require_open_unit(outer_fraction, "outer");
  require_open_unit(inner_fraction, "inner");
  require_pd_sym(phase1, "phase 1");
  require_pd_sym(phase2, "phase 2");
  require_pd_sym(phase3, "phase 3");
}

RankTwoResult rank_two_effective(const LaminateSpec& spec_in) {
  LaminateSpec spec = spec_in;
  spec.validate_and_normalize();

  const Vector3 xi1 = spec.outer_direction;
  const Vector3 xi2 = spec.inner_direction;
  const double f1 = spec.outer_fraction;
  const double g2 = spec.inner_fraction;
  const Matrix3& s1 = spec.phase1;
  const Matrix3& s2 = spec.phase2;
  const Matrix3& s3 = spec.phase3;

  // Flux continuity across both interface families, after the tangential and
  // average conditions eliminate the gradients in favor of (eta1, eta2):
  //   E1 = M + xi1 eta1^T, E2 = M + (1-g2) xi2 eta2^T, E3 = M - g2 xi2 eta2^T,
  //   M  = I - f1 xi1 eta1^T.
  const Matrix3 sbar = g2 * s2 + (1.0 - g2) * s3;
  const Vector3 w = (s2 - s3).transpose() * xi2;
  const Vector3 v = (s1 - sbar).transpose() * xi1;
  const double beta1 = xi1.dot(s1 * xi1);
  const double B = (1.0 - g2) * xi2.dot(s2 * xi2) + g2 * xi2.dot(s3 * xi2);
  const double gamma = xi1.dot((s2 - s3) * xi2);

  Eigen::Matrix2d K;
  K << -f1 * xi1.dot(w), B,
      beta1 - f1 * xi1.dot(v), -g2 * (1.0 - g2) * gamma;

  Eigen::JacobiSVD<Eigen::Matrix2d> svd(K);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(1);
  const double cond =
      smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (smin <= 1e-13 * std::max(smax, 1.0)) {
    std::ostringstream os;
    os << "degenerate lamination: the interface jump system is singular (condition " << cond
       << ")";
    throw SingularSystemError(os.str(), cond);
  }

  // The jump system couples the two amplitudes componentwise: each scalar
  // coefficient multiplies the identity on a 3-vector slot.
  Matrix6 ksys = Matrix6::Zero();
  ksys.topLeftCorner<3, 3>() = K(0, 0) * Matrix3::Identity();
  ksys.topRightCorner<3, 3>() = K(0, 1) * Matrix3::Identity();
  ksys.bottomLeftCorner<3, 3>() = K(1, 0) * Matrix3::Identity();
  ksys.bottomRightCorner<3, 3>() = K(1, 1) * Matrix3::Identity();
  Vector6 rhs;
  rhs << -w, -v;
  const Vector6 eta = ksys.fullPivLu().solve(rhs);

  LaminateFields fields;
  fields.eta1 = eta.head<3>();
  fields.eta2 = eta.tail<3>();
  const Matrix3 M = Matrix3::Identity() - f1 * xi1 * fields.eta1.transpose();
  fields.E1 = M + xi1 * fields.eta1.transpose();
  fields.E2 = M + (1.0 - g2) * xi2 * fields.eta2.transpose();
  fields.E3 = M - g2 * xi2 * fields.eta2.transpose();

  RankTwoResult result;
  result.fields = fields;
  result.condition = cond;
  result.sigma_star =
      effective_from_fields(spec.fractions(), {s1, s2, s3}, fields);
  return result;
}

Matrix3 rank_one_effective(const Matrix3& sA, const Matrix3& sB, double f, const Vector3& xi) {
  LaminateSpec spec;
  spec.outer_direction = xi;
  spec.outer_fraction = f;
  spec.inner_direction = xi;
  spec.inner_fraction = 0.5;
  spec.phase1 = sA;
  spec.phase2 = sB;
  spec.phase3 = sB;
  return rank_two_effective(spec).sigma_star;
}

Matrix3 effective_from_fields(const std::array<double, 3>& fractions,
                              const std::array<Matrix3, 3>& phases,
                              const LaminateFields& fields) {
  const std::array<const Matrix3*, 3> e = {&fields.E1, &fields.E2, &fields.E3};
  double scale = 1.0;
  for (const Matrix3* m : e) scale = std::max(scale, m->cwiseAbs().maxCoeff());
  Matrix3 avg = Matrix3::Zero();
  for (int i = 0; i < 3; ++i) avg += fractions[i] * (*e[i]);
  const double res = (avg - Matrix3::Identity()).cwiseAbs().maxCoeff();
  if (!(res <= 1e-10 * scale)) {
    std::ostringstream os;
    os << "fields are inconsistent with the fractions: average deviates from the identity by "
       << res;
    throw InputError(os.str());
  }
  Matrix3 sigma = Matrix3::Zero();
  for (int i = 0; i < 3; ++i)
    sigma += fractions[i] * e[i]->transpose() * phases[i] * (*e[i]);
  return sigma;
}

double JumpResiduals::max() const {
  return std::max({average, tangential_outer, tangential_inner, flux_outer, flux_inner});
}

JumpResiduals jump_residuals(const LaminateSpec& spec_in, const LaminateFields& fields) {
  LaminateSpec spec = spec_in;
  spec.validate_and_normalize();
  const Vector3 xi1 = spec.outer_direction;
  const Vector3 xi2 = spec.inner_direction;
  const double f1 = spec.outer_fraction;
  const double g2 = spec.inner_fraction;
  const Matrix3 slab = g2 * fields.E2 + (1.0 - g2) * fields.E3;
  const Matrix3 flux1 = spec.phase1 * fields.E1;
  const Matrix3 flux_slab =
      g2 * spec.phase2 * fields.E2 + (1.0 - g2) * spec.phase3 * fields.E3;

  JumpResiduals r;
  r.average = (f1 * fields.E1 + (1.0 - f1) * slab - Matrix3::Identity()).cwiseAbs().maxCoeff();
  r.tangential_outer =
      (fields.E1 - slab - xi1 * fields.eta1.transpose()).cwiseAbs().maxCoeff();
  r.tangential_inner =
      (fields.E2 - fields.E3 - xi2 * fields.eta2.transpose()).cwiseAbs().maxCoeff();
  r.flux_outer = ((flux1 - flux_slab).transpose() * xi1).cwiseAbs().maxCoeff();
  r.flux_inner =
      ((spec.phase2 * fields.E2 - spec.phase3 * fields.E3).transpose() * xi2)
          .cwiseAbs()
          .maxCoeff();
  return r;
}

LaminateSpec counterexample_spec(double theta, double kappa, CounterexampleVariant v) {
  if (!std::isfinite(theta) || !(theta > 0.0) || !(theta < 1.0))
    throw InputError("theta must lie in (0,1)");
  if (!std::isfinite(kappa) || !(kappa > 0.0)) throw InputError("kappa must be positive");

  LaminateSpec spec;
  spec.outer_direction = Vector3(0.0, theta, 1.0);  // normalized by the solver
  spec.outer_fraction = 1.0 - theta;
  spec.inner_direction = Vector3(0.0, 1.0, 1.0);
  spec.inner_fraction = 0.5;
  spec.phase1 = Matrix3::Zero();
  spec.phase1(0, 0) = spec.phase1(1, 1) = kappa / (theta * theta);
  spec.phase1(2, 2) = 1.0;
  spec.phase2 = Matrix3::Identity();
  if (v == CounterexampleVariant::PlusJ) {
    spec.phase3 = 2.0 * Matrix3::Identity() + rot_generator();
  } else {
    spec.phase3 = Matrix3::Zero();
    spec.phase3(0, 0) = spec.phase3(1, 1) = 2.0;
    spec.phase3(1, 0) = 1.0;
    spec.phase3(0, 1) = -1.0;
    spec.phase3(2, 2) = 0.5;
  }
  return spec;
}

double partial_iso_residual(const Matrix3& sigma_star) {
  const Matrix3 A = 0.5 * (sigma_star - sigma_star.transpose());
  return std::max(std::abs(A(0, 2)), std::abs(A(1, 2)));
}

SweepResult counterexample_sweep(double kappa, CounterexampleVariant v,
                                 const std::vector<double>& thetas) {
  if (thetas.size() < 2) throw InputError("theta grid needs at least two values");
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (!std::isfinite(thetas[i]) || !(thetas[i] > 0.0) || !(thetas[i] < 1.0))
      throw InputError("theta grid values must lie in (0,1)");
    if (i > 0 && !(thetas[i] < thetas[i - 1]))
      throw InputError("theta grid must be strictly decreasing");
  }

  SweepResult result;
  result.points.reserve(thetas.size());
  for (double theta : thetas) {
    const LaminateSpec spec = counterexample_spec(theta, kappa, v);
    const RankTwoResult solved = rank_two_effective(spec);
    SweepPoint p;
    p.theta = theta;
    p.c_star = 0.5 * theta * delta12(solved.fields.E3);
    p.d12_E2 = delta12(solved.fields.E2);
    p.d12_E3 = delta12(solved.fields.E3);
    p.partial_iso_residual = partial_iso_residual(solved.sigma_star);
    p.condition = solved.condition;
    result.points.push_back(p);
  }

  // First-order-in-theta extrapolation from the two finest points.
  const SweepPoint& p1 = result.points[result.points.size() - 2];
  const SweepPoint& p2 = result.points.back();
  result.limit_c = p2.c_star + (p2.c_star - p1.c_star) * p2.theta / (p1.theta - p2.theta);

  // Least-squares slope of log|c - limit| against log theta.
  const std::size_t n = result.points.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = std::log(result.points[i].theta);
    ys[i] = std::log(std::max(std::abs(result.points[i].c_star - result.limit_c), 1e-300));
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  result.convergence_order = sxy / sxx;
  return result;
}

}  // namespace hallbounds
