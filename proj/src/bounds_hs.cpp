#include "hallbounds/bounds_hs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <tuple>

namespace hallbounds {

double g_fun(double r) {
  if (!std::isfinite(r) || !(r > 0.0)) {
    std::ostringstream os;
    os << "g is defined for positive arguments only, got " << r;
    throw InputError(os.str());
  }
  const double x = r - 1.0;
  if (std::abs(x) <= 1e-3) {
    // Both closed branches lose all digits near r = 1; the alternating series
    // in (r-1) converges geometrically here.
    double tot = 1.0 / 3.0;
    double xk = 1.0;
    for (int k = 1; k < 40; ++k) {
      xk *= x;
      const double term = 2.0 * xk / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
      tot += (k % 2 == 1) ? term : -term;
    }
    return tot;
  }
  if (r > 1.0) {
    const double t = std::sqrt(r - 1.0);
    return r / (r - 1.0) * (1.0 - std::atan(t) / t);
  }
  const double t = std::sqrt(1.0 - r);
  return r / (1.0 - r) * (std::atanh(t) / t - 1.0);
}

HSCoefficients alpha_pm(double a1, double c1, double a2, double c2) {
  if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(c1) || !std::isfinite(c2))
    throw InputError("phase coefficients must be finite");
  if (!(a1 > 0.0) || !(a2 > 0.0))
    throw InputError("in-plane coefficients must be positive");

  HSCoefficients h;
  if (std::abs(a1 - a2) <= 1e-12 * std::max(a1, a2)) {
    // The quadratic collapses to a linear equation: one tangency circle
    // survives, the other family degenerates to the vertical line a = a1.
    h.degenerate = true;
    h.alpha_plus = h.alpha_minus = 0.5 * (c1 + c2);
    h.line_a = a1;
    return h;
  }
  const double A = a1 - a2;
  const double B = a1 * c2 - a2 * c1;
  const double C = a1 * (a2 * a2 + c2 * c2) - a2 * (a1 * a1 + c1 * c1);
  // Discriminant B^2 - A C in its manifestly nonnegative factored form.
  const double d = a1 * a2 * ((a1 - a2) * (a1 - a2) + (c1 - c2) * (c1 - c2));
  const double sq = std::sqrt(d);
  if (B >= 0.0) {
    const double q = B + sq;
    h.alpha_plus = q / A;
    h.alpha_minus = C / q;
  } else {
    const double q = B - sq;
    h.alpha_minus = q / A;
    h.alpha_plus = C / q;
  }
  return h;
}

std::pair<double, double> t1_s1(double a1, double c1, double b1, double alpha) {
  if (!std::isfinite(a1) || !std::isfinite(c1) || !std::isfinite(b1) || !std::isfinite(alpha))
    throw InputError("t1_s1 arguments must be finite");
  if (!(a1 > 0.0) || !(b1 > 0.0))
    throw InputError("conductivity coefficients must be positive");
  const double t1 = a1 / (a1 * a1 + (c1 - alpha) * (c1 - alpha));
  const double g = g_fun(b1 * t1);
  const double s1 = 2.0 * t1 / (1.0 + g) - t1;
  return {t1, s1};
}

HSCoefficients hs_coefficients(const TIConductivity& p1, const TIConductivity& p2) {
  p1.validate();
  p2.validate();
  if (p1.b < p2.b)
    throw InputError("phase ordering: phase 1 must carry the larger axial coefficient (b1 >= b2)");
  HSCoefficients h = alpha_pm(p1.a, p1.c, p2.a, p2.c);
  std::tie(h.t1_plus, h.s1_plus) = t1_s1(p1.a, p1.c, p1.b, h.alpha_plus);
  std::tie(h.t1_minus, h.s1_minus) = t1_s1(p1.a, p1.c, p1.b, h.alpha_minus);
  return h;
}

Matrix3 y_tensor_matrix(const Matrix3& s1, const Matrix3& s2, double f1, const Matrix3& sstar) {
  if (!s1.allFinite() || !s2.allFinite() || !sstar.allFinite())
    throw InputError("tensors must be finite");
  if (!std::isfinite(f1) || !(f1 > 0.0) || !(f1 < 1.0))
    throw InputError("volume fraction must lie in (0,1)");
  const double phase_scale = std::max({1.0, s1.cwiseAbs().maxCoeff(), s2.cwiseAbs().maxCoeff()});
  if ((s1 - s2).cwiseAbs().maxCoeff() <= 1e-14 * phase_scale)
    throw PoleError("identical phases: the Y-transform is undefined");

  const double f2 = 1.0 - f1;
  const Matrix3 mean = f1 * s1 + f2 * s2;
  const Matrix3 den = mean - sstar;
  const double scale = std::max({1.0, mean.cwiseAbs().maxCoeff(), sstar.cwiseAbs().maxCoeff()});
  Eigen::JacobiSVD<Matrix3> svd(den, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(2) <= 1e-13 * scale)
    throw PoleError("Y-transform pole (arithmetic-mean sigma*)");
  const Matrix3 diff = s1 - s2;
  return -f2 * s1 - f1 * s2 + f1 * f2 * diff * svd.solve(diff);
}

YTensorTI y_tensor_ti(const TIConductivity& p1, const TIConductivity& p2, double f1,
                      const TIConductivity& pstar) {
  p1.validate();
  p2.validate();
  pstar.validate();
  if (!std::isfinite(f1) || !(f1 > 0.0) || !(f1 < 1.0))
    throw InputError("volume fraction must lie in (0,1)");
  const double phase_scale =
      std::max({1.0, std::abs(p1.a), std::abs(p2.a), std::abs(p1.b), std::abs(p2.b),
                std::abs(p1.c), std::abs(p2.c)});
  if (std::abs(p1.a - p2.a) <= 1e-14 * phase_scale &&
      std::abs(p1.b - p2.b) <= 1e-14 * phase_scale &&
      std::abs(p1.c - p2.c) <= 1e-14 * phase_scale)
    throw PoleError("identical phases: the Y-transform is undefined");

  const double f2 = 1.0 - f1;
  const std::complex<double> z1(p1.a, p1.c), z2(p2.a, p2.c), zs(pstar.a, pstar.c);
  const std::complex<double> zmean = f1 * z1 + f2 * z2;
  const std::complex<double> den = zmean - zs;
  const double zscale = std::max({1.0, std::abs(zmean), std::abs(zs)});
  if (std::abs(den) <= 1e-13 * zscale)
    throw PoleError("Y-transform pole (arithmetic-mean sigma*)");
  const std::complex<double> zY = -f2 * z1 - f1 * z2 + f1 * f2 * (z1 - z2) * (z1 - z2) / den;

  const double bmean = f1 * p1.b + f2 * p2.b;
  const double bden = bmean - pstar.b;
  const double bscale = std::max({1.0, std::abs(bmean), std::abs(pstar.b)});
  if (std::abs(bden) <= 1e-13 * bscale)
    throw PoleError("Y-transform pole (arithmetic-mean sigma*)");
  const double bY = -f2 * p1.b - f1 * p2.b + f1 * f2 * (p1.b - p2.b) * (p1.b - p2.b) / bden;

  YTensorTI y;
  y.a_Y = zY.real();
  y.c_Y = zY.imag();
  y.b_Y = bY;
  return y;
}

std::pair<BoundsVerdict, BoundsVerdict> hs_disk_check(const YTensorTI& y, const HSCoefficients& h,
                                                      double tol) {
  if (!std::isfinite(y.a_Y) || !std::isfinite(y.c_Y) || !std::isfinite(y.b_Y))
    throw InputError("Y-tensor coefficients must be finite");

  const double rp = y.a_Y * y.a_Y + (y.c_Y + h.alpha_plus) * (y.c_Y + h.alpha_plus) -
                    y.a_Y / h.s1_plus;
  BoundsVerdict plus = make_verdict("hs_disk_plus", rp, tol,
                                    {{"a_Y", y.a_Y},
                                     {"c_Y", y.c_Y},
                                     {"alpha", h.alpha_plus},
                                     {"s1", h.s1_plus}});
  BoundsVerdict minus;
  if (h.degenerate) {
    // Second family at infinite radius: the disk becomes the half-plane
    // a_Y >= line_a.
    minus = make_verdict("hs_disk_minus", h.line_a - y.a_Y, tol,
                         {{"a_Y", y.a_Y}, {"line_a", h.line_a}});
  } else {
    const double rm = y.a_Y * y.a_Y + (y.c_Y + h.alpha_minus) * (y.c_Y + h.alpha_minus) -
                      y.a_Y / h.s1_minus;
    minus = make_verdict("hs_disk_minus", rm, tol,
                         {{"a_Y", y.a_Y},
                          {"c_Y", y.c_Y},
                          {"alpha", h.alpha_minus},
                          {"s1", h.s1_minus}});
  }
  return {plus, minus};
}

double phase_circle_residual(double a, double c, double alpha, double t1) {
  return a * a + (c - alpha) * (c - alpha) - a / t1;
}

BoundsVerdict b_hs_check(double b_Y, double b1, double t1, double tol) {
  if (!std::isfinite(b_Y) || !std::isfinite(b1) || !std::isfinite(t1))
    throw InputError("b_hs_check arguments must be finite");
  if (!(b1 > 0.0) || !(t1 > 0.0))
    throw InputError("b1 and t1 must be positive");
  const double g = g_fun(b1 * t1);
  const double upper = b1 * (1.0 - g) / g;
  const double residual = std::max(-b_Y, b_Y - upper);
  return make_verdict("b_hs", residual, tol,
                      {{"b_Y", b_Y}, {"b1", b1}, {"t1", t1}, {"upper", upper}});
}

HSGeometry hs_geometry(const HSCoefficients& h) {
  if (!(h.t1_plus > 0.0) || !(h.t1_minus > 0.0) || !(h.s1_plus > 0.0) || !(h.s1_minus > 0.0))
    throw InputError("coefficients must come from hs_coefficients (positive t1, s1)");
  const auto disk = [](double s, double alpha) {
    DiskGeometry d;
    d.center_a = 1.0 / (2.0 * s);
    d.center_c = alpha;
    d.radius = 1.0 / (2.0 * s);
    d.tangent_c = alpha;
    return d;
  };
  HSGeometry g;
  g.degenerate = h.degenerate;
  g.line_a = h.line_a;
  g.hs_plus = disk(h.s1_plus, h.alpha_plus);
  g.hs_minus = disk(h.s1_minus, h.alpha_minus);
  g.phase_plus = disk(h.t1_plus, h.alpha_plus);
  g.phase_minus = disk(h.t1_minus, h.alpha_minus);
  return g;
}

Matrix6 yt_block(const YTensorTI& y, double zero_tol) {
  if (!std::isfinite(y.a_Y) || !std::isfinite(y.c_Y) || !std::isfinite(y.b_Y))
    throw InputError("Y-tensor coefficients must be finite");
  if (std::abs(y.a_Y) <= 1e-300) throw InputError("a_Y must be nonzero");
  Matrix6 m = Matrix6::Zero();
  m(0, 0) = m(1, 1) = 1.0 / y.a_Y;
  m(2, 2) = (std::abs(y.b_Y) <= zero_tol) ? std::numeric_limits<double>::infinity()
                                          : 1.0 / y.b_Y;
  m(3, 3) = m(4, 4) = y.a_Y + y.c_Y * y.c_Y / y.a_Y;
  m(5, 5) = y.b_Y;
  m(0, 4) = m(4, 0) = -y.c_Y / y.a_Y;
  m(1, 3) = m(3, 1) = y.c_Y / y.a_Y;
  return m;
}

}  // namespace hallbounds
