#pragma once

#include "pnflab/common.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pnf {

struct CDParams {
  double rho = 0.0;
  double invN = 0.0;
};

// μ = e^{-V} dx. Evaluators accept points of dimension 2 or 3.
class Density {
 public:
  enum class Family { Lebesgue, Gaussian, Cauchy, Polynomial };
  struct Monomial {
    double coef;
    std::array<int, 3> exps;
  };

  static Density lebesgue();
  // V = |x|²/(2s²).
  static Density gaussian(double s);
  // V = (α/2) log(1 + |x|²).
  static Density cauchy(double alpha);
  static Density polynomial(std::vector<Monomial> terms);

  Family family() const { return family_; }
  double parameter() const { return param_; }
  const std::string& id() const { return id_; }

  double V(const Vec& x) const;
  Vec grad(const Vec& x) const;
  Mat hess(const Vec& x) const;
  double weight(const Vec& x) const { return std::exp(-V(x)); }

  bool is_constant() const;
  bool is_radial() const { return family_ != Family::Polynomial || is_constant(); }
  // d^k/dr^k of the radial profile V(r), k ∈ {0, 1, 2}. Throws for non-radial densities.
  double radial(double r, int k) const;

  std::optional<CDParams> declared;

 private:
  Family family_ = Family::Lebesgue;
  double param_ = 0.0;
  std::vector<Monomial> terms_;
  std::string id_ = "lebesgue";
};

}  // namespace pnf
