#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pnf {

// Points and tangent quantities never exceed dimension 3, so these stay on the stack.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorKind {
  NonConvex,
  NonPositive,
  GridMismatch,
  Dimension,
  ConventionViolation,
  QuadratureFailure,
  SolverFailure,
  DegenerateBeta,
  NonMeanConvex,
  HypothesisUnmet,
  IncompatibleData,
  VariantMismatch,
  NonConvexInput,
  GaussMapInversion,
  ContainmentViolated,
  DiameterCertificateFailed,
  TruncatedTrace,
  Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Neumaier summation; the accumulated value does not depend on term magnitudes' order
// as long as the partial sums stay within range.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace pnf
