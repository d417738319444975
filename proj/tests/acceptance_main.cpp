// Acceptance gate: ten end-to-end checks over the library, one line each.
// Exit code 0 only when every check passes.
#include "hallbounds/bounds_elem.hpp"
#include "hallbounds/bounds_hs.hpp"
#include "hallbounds/gamma_verify.hpp"
#include "hallbounds/laminate.hpp"
#include "hallbounds/tensor_core.hpp"
#include "hallbounds/types.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace {

using namespace hallbounds;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

const std::vector<double> kThetaGrid = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};

// ---------------------------------------------------------------- check 1
bool check_plus_j_limit(std::string& detail) {
  const auto t0 = Clock::now();
  const SweepResult sweep = counterexample_sweep(17.0, CounterexampleVariant::PlusJ, kThetaGrid);
  const double ms = ms_since(t0);
  const double err = std::abs(sweep.limit_c + 1.0);
  detail = fmt("limit error %.2e, order %.3f, %.0f ms", err, sweep.convergence_order, ms);
  return err <= 1e-5 && sweep.convergence_order >= 0.9 && ms < 1000.0;
}

// ---------------------------------------------------------------- check 2
bool check_hall_block_limit(std::string& detail) {
  const SweepResult sweep =
      counterexample_sweep(13.0, CounterexampleVariant::HallBlock, kThetaGrid);
  const double err = std::abs(sweep.limit_c - 1.0);
  detail = fmt("limit error %.2e", err);
  return err <= 1e-5;
}

// ---------------------------------------------------------------- check 3
bool check_minor_growth(std::string& detail) {
  const double theta = 1e-3, kappa = 17.0;
  const RankTwoResult solved =
      rank_two_effective(counterexample_spec(theta, kappa, CounterexampleVariant::PlusJ));
  const double d2 = delta12(solved.fields.E2);
  const double d3 = delta12(solved.fields.E3);
  const double predicted = -2.0 * kappa / (17.0 * theta);
  const double rel = std::abs(d3 - predicted) / std::abs(predicted);
  detail = fmt("minors %.4g / %.4g, growth off by %.2f%%", d2, d3, 100.0 * rel);
  return d2 * d3 < 0.0 && rel <= 0.05;
}

// ---------------------------------------------------------------- check 4
bool check_partial_iso_decay(std::string& detail) {
  const SweepResult sweep = counterexample_sweep(17.0, CounterexampleVariant::PlusJ, kThetaGrid);
  double worst_ratio = 0.0;
  bool decreasing = true, bounded = true;
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    const SweepPoint& p = sweep.points[i];
    worst_ratio = std::max(worst_ratio, p.partial_iso_residual / p.theta);
    bounded = bounded && p.partial_iso_residual <= p.theta;
    if (i > 0)
      decreasing = decreasing &&
                   p.partial_iso_residual < sweep.points[i - 1].partial_iso_residual;
  }
  detail = fmt("max residual/theta %.3g, strictly decreasing: %s", worst_ratio,
               decreasing ? "yes" : "no");
  return bounded && decreasing;
}

// ---------------------------------------------------------------- check 5
bool check_simple_laminate_order(std::string& detail) {
  std::mt19937_64 rng(101);
  double worst_axial = 0.0;
  for (int trial = 0; trial < 1250; ++trial) {
    const bool axial = trial >= 1000;
    const TIConductivity pa{hbtest::uniform(rng, 0.1, 10.0), hbtest::uniform(rng, 0.1, 10.0),
                            hbtest::uniform(rng, -5.0, 5.0)};
    const TIConductivity pb{hbtest::uniform(rng, 0.1, 10.0), hbtest::uniform(rng, 0.1, 10.0),
                            hbtest::uniform(rng, -5.0, 5.0)};
    const double f = hbtest::uniform(rng, 0.02, 0.98);
    const Vector3 n = axial ? Vector3(Vector3::UnitZ()) : hbtest::unit_vector(rng);
    const Matrix3 sa = ti_to_matrix(pa), sb = ti_to_matrix(pb);
    const Matrix3 eff = rank_one_effective(sa, sb, f, n);

    const Matrix6 l_star = build_block_L(eff);
    const Matrix6 l_avg = f * build_block_L(sa) + (1.0 - f) * build_block_L(sb);
    if (!psd_order_check(l_star, l_avg, 1e-9)) {
      detail = fmt("block-average order violated at trial %d", trial);
      return false;
    }
    if (!axial) continue;

    PhaseDistribution dist;
    dist.entries = {{f, pa}, {1.0 - f, pb}};
    const TIConductivity ti = matrix_to_ti(eff, 1e-8 * std::max(1.0, eff.cwiseAbs().maxCoeff()));
    const auto [blo, bhi] = b_interval(dist);
    const double b_res = std::max(blo - ti.b, ti.b - bhi);
    const BoundsVerdict circ = circle_check(ti.a, ti.c, circle_params(dist), 1e-10);
    const SuperfluousBound sup = superfluous_cstar_bound(dist);
    const double sup_res = 2.0 * std::abs(ti.c) - sup.mean_bound;
    const auto [ctr, half] = optimal_shift_bound(ti.a, std::min(pa.a, pb.a),
                                                 std::max(pa.c, pb.c), std::min(pa.c, pb.c));
    const double shift_res = std::abs(ti.c - ctr) - half;
    const double worst = std::max({b_res, circ.residual, sup_res, shift_res});
    worst_axial = std::max(worst_axial, worst);
    if (worst > 1e-10) {
      detail = fmt("axial laminate left a bound by %.3g at trial %d", worst, trial);
      return false;
    }
  }
  detail = fmt("1000 general + 250 axial laminates inside all bounds (worst axial residual %.2e)",
               worst_axial);
  return true;
}

// ---------------------------------------------------------------- check 6
bool check_axial_kernel(std::string& detail) {
  if (std::abs(g_fun(1.0) - 1.0 / 3.0) > 1e-14) {
    detail = "value at 1 is off";
    return false;
  }
  double max_diff = 0.0, prev = -1.0;
  for (int k = 0; k <= 80; ++k) {
    const double r = std::pow(10.0, -4.0 + 0.1 * k);
    const double closed = g_fun(r);
    max_diff = std::max(max_diff, std::abs(closed - hbtest::g_quadrature(r)));
    if (!(closed > 0.0 && closed < 1.0 && closed > prev)) {
      detail = fmt("range/monotonicity broken at r = %.3g", r);
      return false;
    }
    prev = closed;
  }
  detail = fmt("closed form vs quadrature within %.2e on 81 log-spaced points", max_diff);
  return max_diff <= 1e-12;
}

// ---------------------------------------------------------------- check 7
bool check_tangency_coefficients(std::string& detail) {
  std::mt19937_64 rng(131);
  int done = 0;
  double worst_t = 0.0, worst_circle = 0.0, worst_shift = 0.0;
  while (done < 10000) {
    TIConductivity p1{hbtest::uniform(rng, 0.3, 5.0), hbtest::uniform(rng, 0.3, 5.0),
                      hbtest::uniform(rng, -2.0, 2.0)};
    TIConductivity p2{hbtest::uniform(rng, 0.3, 5.0), hbtest::uniform(rng, 0.3, 5.0),
                      hbtest::uniform(rng, -2.0, 2.0)};
    if (std::abs(p1.a - p2.a) < 1e-3) continue;
    if (p1.b < p2.b) std::swap(p1, p2);
    const double f1 = hbtest::uniform(rng, 0.15, 0.85), f2 = 1.0 - f1;
    const HSCoefficients h = hs_coefficients(p1, p2);

    const std::vector<std::pair<double, double>> fam = {{h.alpha_plus, h.t1_plus},
                                                        {h.alpha_minus, h.t1_minus}};
    const std::vector<double> s1s = {h.s1_plus, h.s1_minus};
    for (std::size_t k = 0; k < fam.size(); ++k) {
      const auto [al, t1] = fam[k];
      const double s2sq = p2.a * p2.a + (p2.c - al) * (p2.c - al);
      const double t_other = p2.a / s2sq;
      worst_t = std::max(worst_t, std::abs(t1 - t_other) / std::abs(t1));
      if (!(s1s[k] > 0.0 && s1s[k] < t1)) {
        detail = fmt("s1 outside (0, t1) at trial %d", done);
        return false;
      }
      const double sc1 = std::max(1.0, p1.a / t1);
      worst_circle = std::max(
          {worst_circle, std::abs(phase_circle_residual(p1.a, p1.c, al, t1)) / sc1,
           std::abs(phase_circle_residual(p2.a, p2.c, al, t1)) / std::max(1.0, s2sq)});
    }

    // translating every Hall coefficient moves both families rigidly
    const TIConductivity cand{0.75 * (f1 * p1.a + f2 * p2.a),
                              0.9 * (f1 * p1.b + f2 * p2.b), f1 * p1.c + f2 * p2.c + 0.2};
    const auto r0 = hs_disk_check(y_tensor_ti(p1, p2, f1, cand), h);
    const double s = hbtest::uniform(rng, -2.0, 2.0);
    TIConductivity q1 = p1, q2 = p2, qc = cand;
    q1.c += s;
    q2.c += s;
    qc.c += s;
    const auto r1 = hs_disk_check(y_tensor_ti(q1, q2, f1, qc), hs_coefficients(q1, q2));
    worst_shift = std::max(
        {worst_shift,
         std::abs(r0.first.residual - r1.first.residual) /
             std::max(1.0, std::abs(r0.first.residual)),
         std::abs(r0.second.residual - r1.second.residual) /
             std::max(1.0, std::abs(r0.second.residual))});
    ++done;
  }
  detail = fmt("t1 consistency %.2e, circle residual %.2e, shift covariance %.2e over 10^4 pairs",
               worst_t, worst_circle, worst_shift);
  return worst_t <= 1e-12 && worst_circle <= 1e-11 && worst_shift <= 1e-10;
}

L0Params random_l0(std::mt19937_64& rng) {
  L0Params l0;
  l0.t1 = hbtest::uniform(rng, 0.2, 2.0);
  l0.t3 = hbtest::uniform(rng, 0.2, 2.0);
  l0.t4 = hbtest::uniform(rng, 0.2, 2.0);
  l0.t5 = hbtest::uniform(rng, 0.2, 2.0);
  l0.t2 = hbtest::uniform(rng, -0.8, 0.8) * std::sqrt(l0.t1 * l0.t3);
  return l0;
}

// ---------------------------------------------------------------- check 8
bool check_kernel_averages(std::string& detail) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(151);

  double worst_def = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const L0Params l0 = random_l0(rng);
    const Vector3 xi = hbtest::unit_vector(rng);
    Vector6 a;
    for (int i = 0; i < 6; ++i) a[i] = hbtest::gaussian(rng);
    const auto [r1, r2] = gamma_defining_residuals(l0, xi, a);
    worst_def = std::max({worst_def, r1, r2});
  }
  if (worst_def > 1e-12) {
    detail = fmt("defining relations left residual %.3g", worst_def);
    return false;
  }

  double worst_avg = 0.0;
  int worst_order = 0;
  for (int trial = 0; trial < 13; ++trial) {
    const L0Params l0 =
        trial == 0 ? L0Params{0.2, 0.4, 0.9, 0.5, 1.0} : random_l0(rng);
    int used = 0;
    const Matrix6 numeric = gamma_avg_adaptive(l0, 1e-11, 128, &used);
    const Matrix6 closed = gamma_avg_closed(l0).matrix();
    worst_avg = std::max(worst_avg, (numeric - closed).cwiseAbs().maxCoeff());
    worst_order = std::max(worst_order, used);
  }
  if (worst_avg > 1e-10) {
    detail = fmt("sphere average off closed form by %.3g", worst_avg);
    return false;
  }

  double worst_inv = 0.0;
  const std::vector<std::pair<int, int>> stable = {{0, 0}, {1, 1}, {2, 2}, {0, 4}, {1, 3}};
  for (int trial = 0; trial < 5; ++trial) {
    L0Params l0;
    l0.t1 = hbtest::uniform(rng, 0.3, 1.5);
    l0.t4 = hbtest::uniform(rng, 0.3, 1.5);
    l0.t5 = hbtest::uniform(rng, 0.3, 1.5);
    l0.t2 = hbtest::uniform(rng, 0.2, 0.8) * l0.t1;
    l0.t3 = l0.t2 * l0.t2 / l0.t1 + 1e-6;
    const Matrix6 numeric_inv = gamma_avg_numeric(l0, 64, 128).fullPivLu().inverse().eval();
    const Matrix6 closed_inv = gamma_avg_closed_inverse(l0);
    for (const auto& [i, j] : stable)
      worst_inv = std::max(worst_inv, std::abs(numeric_inv(i, j) - closed_inv(i, j)) /
                                          std::max(1.0, std::abs(closed_inv(i, j))));
  }
  const double ms = ms_since(t0);
  detail = fmt("defining %.1e, average %.1e (order <= %d), inverse limit %.1e, %.0f ms",
               worst_def, worst_avg, worst_order, worst_inv, ms);
  return worst_inv <= 1e-4 && ms < 10000.0;
}

struct EquivalenceStats {
  int mismatches = 0;
  double worst_disc = 0.0;
};

void equivalence_case(const TIConductivity& p1, const TIConductivity& p2, double f1,
                      const TIConductivity& cand, EquivalenceStats& stats) {
  const HSCoefficients h = hs_coefficients(p1, p2);
  const YTensorTI y = y_tensor_ti(p1, p2, f1, cand);
  const auto [disk_plus, disk_minus] = hs_disk_check(y, h);
  const BoundsVerdict b_plus = b_hs_check(y.b_Y, p1.b, h.t1_plus);
  const BoundsVerdict b_minus = b_hs_check(y.b_Y, p1.b, h.t1_minus);
  const Matrix6 yt = yt_block(y);

  const std::vector<std::tuple<double, double, double, const BoundsVerdict*, const BoundsVerdict*>>
      fams = {{h.alpha_plus, h.t1_plus, h.s1_plus, &disk_plus, &b_plus},
              {h.alpha_minus, h.t1_minus, h.s1_minus, &disk_minus, &b_minus}};
  for (const auto& [al, t1, s1, disk, axial] : fams) {
    L0Params l0{t1, al * t1, al * al * t1, 1.0 / p1.b, p2.b};
    const BoundsVerdict matrix_verdict = hs_inequality_check(yt, l0);
    if (matrix_verdict.satisfied != (disk->satisfied && axial->satisfied)) ++stats.mismatches;

    const Matrix6 m = yt + build_l0_matrix(l0) - gamma_avg_closed_inverse(l0);
    const double det = m(0, 0) * m(4, 4) - m(0, 4) * m(4, 0);
    const double mapped = -det * y.a_Y / s1;
    stats.worst_disc = std::max(stats.worst_disc, std::abs(mapped - disk->residual) /
                                                      std::max(1.0, std::abs(disk->residual)));
  }
}

// samples a random two-phase case with a valid, well-conditioned transform
bool random_equivalence_case(std::mt19937_64& rng, EquivalenceStats& stats) {
  TIConductivity p1{hbtest::uniform(rng, 0.3, 5.0), hbtest::uniform(rng, 0.3, 5.0),
                    hbtest::uniform(rng, -2.0, 2.0)};
  TIConductivity p2{hbtest::uniform(rng, 0.3, 5.0), hbtest::uniform(rng, 0.3, 5.0),
                    hbtest::uniform(rng, -2.0, 2.0)};
  if (std::abs(p1.a - p2.a) < 1e-3) return false;
  if (p1.b < p2.b) std::swap(p1, p2);
  const double f1 = hbtest::uniform(rng, 0.15, 0.85);
  const TIConductivity cand{hbtest::uniform(rng, 0.3, 5.0), hbtest::uniform(rng, 0.3, 5.0),
                            hbtest::uniform(rng, -2.0, 2.0)};
  YTensorTI y;
  try {
    y = y_tensor_ti(p1, p2, f1, cand);
  } catch (const PoleError&) {
    return false;
  }
  if (std::abs(y.a_Y) < 1e-2 || std::abs(y.b_Y) < 1e-6) return false;
  equivalence_case(p1, p2, f1, cand, stats);
  return true;
}

// ---------------------------------------------------------------- check 9
bool check_matrix_scalar_equivalence(std::string& detail) {
  std::mt19937_64 rng(173);
  EquivalenceStats stats;
  int constructed = 0, random_cases = 0;
  while (constructed < 50) {
    hbtest::HsCase cs;
    if (!hbtest::make_satisfying_hs_case(rng, [](double r) { return g_fun(r); }, cs)) continue;
    equivalence_case(cs.p1, cs.p2, cs.f1, cs.cand, stats);
    ++constructed;
  }
  while (random_cases < 50)
    if (random_equivalence_case(rng, stats)) ++random_cases;
  detail = fmt("verdict mismatches %d/200, residual discrepancy %.2e over 100 cases",
               stats.mismatches, stats.worst_disc);
  return stats.mismatches == 0 && stats.worst_disc <= 1e-9;
}

// ---------------------------------------------------------------- check 10
bool check_transform_identities(std::string& detail) {
  std::mt19937_64 rng(191);

  double worst_harm = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    TIConductivity p1{hbtest::uniform(rng, 0.3, 5.0), hbtest::uniform(rng, 0.3, 4.0),
                      hbtest::uniform(rng, -2.0, 2.0)};
    TIConductivity p2{hbtest::uniform(rng, 0.3, 5.0), hbtest::uniform(rng, 0.3, 4.0),
                      hbtest::uniform(rng, -2.0, 2.0)};
    if (std::abs(p1.b - p2.b) < 1.0) {
      --trial;
      continue;
    }
    const double f1 = hbtest::uniform(rng, 0.25, 0.75), f2 = 1.0 - f1;
    const TIConductivity cand{0.75 * (f1 * p1.a + f2 * p2.a),
                              1.0 / (f1 / p1.b + f2 / p2.b), f1 * p1.c + f2 * p2.c};
    const YTensorTI y = y_tensor_ti(p1, p2, f1, cand);
    worst_harm = std::max(worst_harm, std::abs(y.b_Y));
  }
  if (worst_harm > 1e-12) {
    detail = fmt("axial transform at the harmonic mean left %.3g", worst_harm);
    return false;
  }

  double worst_mirror = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double c = hbtest::uniform(rng, -3.0, 3.0);
    const TIConductivity p1{hbtest::uniform(rng, 0.3, 5.0), hbtest::uniform(rng, 0.3, 4.0), c};
    const TIConductivity p2{hbtest::uniform(rng, 0.3, 5.0), hbtest::uniform(rng, 0.3, 4.0), c};
    const double f1 = hbtest::uniform(rng, 0.25, 0.75), f2 = 1.0 - f1;
    const TIConductivity cand{0.75 * (f1 * p1.a + f2 * p2.a),
                              0.9 * (f1 * p1.b + f2 * p2.b), c};
    const YTensorTI y = y_tensor_ti(p1, p2, f1, cand);
    worst_mirror =
        std::max(worst_mirror, std::abs(y.c_Y + c) / std::max(1.0, std::abs(c)));
  }
  if (worst_mirror > 1e-12) {
    detail = fmt("Hall mirror identity off by %.3g", worst_mirror);
    return false;
  }

  double worst_route = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const TIConductivity p1{hbtest::uniform(rng, 0.3, 5.0), hbtest::uniform(rng, 0.3, 4.0),
                            hbtest::uniform(rng, -2.0, 2.0)};
    const TIConductivity p2{hbtest::uniform(rng, 0.3, 5.0), hbtest::uniform(rng, 0.3, 4.0),
                            hbtest::uniform(rng, -2.0, 2.0)};
    const double f1 = hbtest::uniform(rng, 0.25, 0.75), f2 = 1.0 - f1;
    const TIConductivity cand{0.75 * (f1 * p1.a + f2 * p2.a),
                              0.9 * (f1 * p1.b + f2 * p2.b),
                              f1 * p1.c + f2 * p2.c + 0.2};
    const YTensorTI y = y_tensor_ti(p1, p2, f1, cand);
    const Matrix3 ym = y_tensor_matrix(ti_to_matrix(p1), ti_to_matrix(p2), f1,
                                       ti_to_matrix(cand));
    const double scale = std::max(1.0, ym.cwiseAbs().maxCoeff());
    worst_route = std::max({worst_route, std::abs(ym(0, 0) - y.a_Y) / scale,
                            std::abs(ym(1, 0) - y.c_Y) / scale,
                            std::abs(ym(2, 2) - y.b_Y) / scale});
  }
  if (worst_route > 1e-12) {
    detail = fmt("scalar and matrix transform routes differ by %.3g", worst_route);
    return false;
  }

  // the 6x6 inequality route must reproduce the scalar disk residual
  EquivalenceStats stats;
  int done = 0;
  while (done < 100)
    if (random_equivalence_case(rng, stats)) ++done;
  detail = fmt("harmonic %.1e, mirror %.1e, routes %.1e, mapped residual %.1e", worst_harm,
               worst_mirror, worst_route, stats.worst_disc);
  return stats.worst_disc <= 1e-12;
}

}  // namespace

int main() {
  struct Check {
    const char* label;
    bool (*fn)(std::string&);
  };
  const std::vector<Check> checks = {
      {"inner Hall coefficient reaches -kappa/17 (plus_j family)", check_plus_j_limit},
      {"inner Hall coefficient reaches +kappa/13 (hall_block family)", check_hall_block_limit},
      {"fine-phase field minors grow as -2 kappa/(17 theta) with opposite signs",
       check_minor_growth},
      {"off-pattern antisymmetry decays linearly in theta", check_partial_iso_decay},
      {"simple laminates stay below the block average and attain the axial bounds",
       check_simple_laminate_order},
      {"axial kernel: closed form, quadrature, monotonicity", check_axial_kernel},
      {"tangency families: consistency, interlacing, shift covariance",
       check_tangency_coefficients},
      {"kernel sphere averages: defining relations, closed form, inverse limit",
       check_kernel_averages},
      {"matrix inequality agrees with the scalar disk + axial verdicts",
       check_matrix_scalar_equivalence},
      {"fractional-linear transform identities and route agreement",
       check_transform_identities},
  };

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = checks[i].fn(detail);
    } catch (const std::exception& e) {
      detail = fmt("threw: %s", e.what());
    }
    std::printf("[%s] check %zu: %s (%s)\n", ok ? "PASS" : "FAIL", i + 1, checks[i].label,
                detail.c_str());
    if (!ok) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu checks passed\n", checks.size());
    return 0;
  }
  std::printf("%d of %zu checks failed\n", failures, checks.size());
  return 1;
}
