#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hallbounds {

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

// Caller-supplied data is malformed (schema, ranges, invalid tensors).
// The CLI maps this to exit code 2.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A mathematically meaningful degeneracy was hit (transform pole, singular
// lamination system). The CLI maps this to exit code 3.
struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The fractional-linear transform used by the two-phase bounds has a pole;
// the message names the configuration that produces it.
struct PoleError : DegeneracyError {
  using DegeneracyError::DegeneracyError;
};

// A linear system that should determine the laminate fields is singular;
// carries the condition estimate that triggered the failure.
struct SingularSystemError : DegeneracyError {
  SingularSystemError(const std::string& what, double cond)
      : DegeneracyError(what), condition(cond) {}
  double condition;
};

// Transversely isotropic conductivity about the x3 axis:
//   [ a -c  0 ]
//   [ c  a  0 ]
//   [ 0  0  b ]
// a, b > 0; c is the antisymmetric (Hall) coefficient and may have any sign.
struct TIConductivity {
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;
  void validate() const;
};

struct WeightedPhase {
  double weight = 0.0;
  TIConductivity phase;
};

// Finite mixture of phases; weights must be nonnegative and sum to 1
// within 1e-12.
struct PhaseDistribution {
  std::vector<WeightedPhase> entries;

  void validate() const;

  // Fraction-weighted average of f(phase).
  template <class F>
  double mean(F&& f) const {
    double s = 0.0;
    for (const auto& e : entries) s += e.weight * f(e.phase);
    return s;
  }
};

// One evaluated bound. residual <= tol means satisfied; the sign convention
// is uniform so a report alone reproduces the check. inputs_echo carries the
// scalars the residual was computed from.
struct BoundsVerdict {
  std::string name;
  bool satisfied = false;
  double residual = 0.0;
  double tol = 0.0;
  std::vector<std::pair<std::string, double>> inputs_echo;
};

inline BoundsVerdict make_verdict(std::string name, double residual, double tol,
                                  std::vector<std::pair<std::string, double>> echo = {}) {
  BoundsVerdict v;
  v.name = std::move(name);
  v.residual = residual;
  v.tol = tol;
  v.satisfied = residual <= tol;
  v.inputs_echo = std::move(echo);
  return v;
}

inline constexpr double kDefaultTol = 1e-9;

}  // namespace hallbounds
