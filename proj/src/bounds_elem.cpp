#include "hallbounds/bounds_elem.hpp"

#include "hallbounds/tensor_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hallbounds {

std::pair<double, double> b_interval(const PhaseDistribution& d) {
  d.validate();
  const double lo = 1.0 / d.mean([](const TIConductivity& p) { return 1.0 / p.b; });
  const double hi = d.mean([](const TIConductivity& p) { return p.b; });
  return {lo, hi};
}

CircleParams circle_params(const PhaseDistribution& d) {
  d.validate();
  CircleParams p;
  p.a_L = 1.0 / d.mean([](const TIConductivity& q) { return 1.0 / q.a; });
  p.c_L = d.mean([](const TIConductivity& q) { return q.c / q.a; }) * p.a_L;
  p.d_L = d.mean([](const TIConductivity& q) { return q.a + q.c * q.c / q.a; }) -
          p.c_L * p.c_L / p.a_L;
  // Cauchy-Schwarz guarantees d_L >= a_L; a violation means the computation
  // itself is broken, not the input.
  const double slack = 1e-12 * std::max({1.0, std::abs(p.a_L), std::abs(p.d_L)});
  if (p.d_L - p.a_L < -slack) {
    std::ostringstream os;
    os << "circle parameters violate d_L >= a_L (a_L=" << p.a_L << ", d_L=" << p.d_L << ")";
    throw std::logic_error(os.str());
  }
  return p;
}

BoundsVerdict circle_check(double astar, double cstar, const CircleParams& p, double tol) {
  if (!std::isfinite(astar) || !std::isfinite(cstar))
    throw InputError("candidate coefficients must be finite");
  const double residual =
      (cstar - p.c_L) * (cstar - p.c_L) - (astar - p.a_L) * (p.d_L - astar);
  return make_verdict("circle", residual, tol,
                      {{"a_star", astar},
                       {"c_star", cstar},
                       {"a_L", p.a_L},
                       {"c_L", p.c_L},
                       {"d_L", p.d_L}});
}

SuperfluousBound superfluous_cstar_bound(const PhaseDistribution& d) {
  d.validate();
  SuperfluousBound s;
  s.mean_bound = d.mean([](const TIConductivity& p) { return p.a + p.c * p.c / p.a; });
  double a_max = d.entries.front().phase.a;
  double a_min = a_max;
  double c_abs = 0.0;
  for (const auto& e : d.entries) {
    a_max = std::max(a_max, e.phase.a);
    a_min = std::min(a_min, e.phase.a);
    c_abs = std::max(c_abs, std::abs(e.phase.c));
  }
  s.coarse_cap = a_max + c_abs * c_abs / a_min;
  return s;
}

double partial_iso_cstar_bound(const Matrix3& sigma_star, double a_lower, double c_upper) {
  if (!sigma_star.allFinite()) throw InputError("sigma_star must be finite");
  if (!std::isfinite(a_lower) || !(a_lower > 0.0))
    throw InputError("a_lower must be positive");
  if (!std::isfinite(c_upper) || c_upper < 0.0)
    throw InputError("c_upper must be nonnegative");
  const Matrix3 S = 0.5 * (sigma_star + sigma_star.transpose());
  Eigen::LLT<Matrix3> llt(S);
  if (llt.info() != Eigen::Success)
    throw InputError("symmetric part of sigma_star must be positive definite");
  return (c_upper / a_lower) * std::sqrt(S(0, 0) * S(1, 1));
}

std::pair<double, double> optimal_shift_bound(double astar, double a_lower, double c_plus,
                                              double c_minus) {
  if (!std::isfinite(astar) || !(astar > 0.0)) throw InputError("a_star must be positive");
  if (!std::isfinite(a_lower) || !(a_lower > 0.0))
    throw InputError("a_lower must be positive");
  if (!std::isfinite(c_plus) || !std::isfinite(c_minus) || c_plus < c_minus)
    throw InputError("need c_plus >= c_minus");
  const double center = 0.5 * (c_plus + c_minus);
  const double halfwidth = astar / (2.0 * a_lower) * (c_plus - c_minus);
  return {center, halfwidth};
}

}  // namespace hallbounds
