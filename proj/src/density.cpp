#include "pnflab/density.hpp"

#include <sstream>

namespace pnf {

Density Density::lebesgue() {
  Density d;
  d.declared = CDParams{0.0, 0.0};
  return d;
}

Density Density::gaussian(double s) {
  if (!(s > 0)) throw Error(ErrorKind::Config, "gaussian scale must be positive");
  Density d;
  d.family_ = Family::Gaussian;
  d.param_ = s;
  std::ostringstream os;
  os.precision(17);
  os << "gaussian:" << s;
  d.id_ = os.str();
  d.declared = CDParams{1.0 / (s * s), 0.0};
  return d;
}

Density Density::cauchy(double alpha) {
  if (!(alpha > 0)) throw Error(ErrorKind::Config, "cauchy exponent must be positive");
  Density d;
  d.family_ = Family::Cauchy;
  d.param_ = alpha;
  std::ostringstream os;
  os.precision(17);
  os << "cauchy:" << alpha;
  d.id_ = os.str();
  return d;
}

Density Density::polynomial(std::vector<Monomial> terms) {
  Density d;
  d.family_ = Family::Polynomial;
  d.terms_ = std::move(terms);
  std::ostringstream os;
  os.precision(17);
  os << "poly:";
  for (std::size_t i = 0; i < d.terms_.size(); ++i) {
    const auto& t = d.terms_[i];
    os << (i ? ";" : "") << t.coef << "*" << t.exps[0] << "," << t.exps[1] << "," << t.exps[2];
  }
  d.id_ = os.str();
  return d;
}

bool Density::is_constant() const {
  if (family_ == Family::Lebesgue) return true;
  if (family_ != Family::Polynomial) return false;
  for (const auto& t : terms_) {
    if (t.coef != 0.0 && (t.exps[0] || t.exps[1] || t.exps[2])) return false;
  }
  return true;
}

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// ∂^{d} x^k / ∂x^{d} for d ≤ 2.
double dpow(double x, int k, int d) {
  if (d == 0) return ipow(x, k);
  if (d == 1) return k == 0 ? 0.0 : k * ipow(x, k - 1);
  return k < 2 ? 0.0 : k * (k - 1) * ipow(x, k - 2);
}

}  // namespace

double Density::V(const Vec& x) const {
  switch (family_) {
    case Family::Lebesgue: return 0.0;
    case Family::Gaussian: return x.squaredNorm() / (2.0 * param_ * param_);
    case Family::Cauchy: return 0.5 * param_ * std::log1p(x.squaredNorm());
    case Family::Polynomial: {
      double v = 0.0;
      for (const auto& t : terms_) {
        double m = t.coef;
        for (int c = 0; c < x.size(); ++c) m *= ipow(x(c), t.exps[c]);
        for (int c = static_cast<int>(x.size()); c < 3; ++c) m *= t.exps[c] == 0 ? 1.0 : 0.0;
        v += m;
      }
      return v;
    }
  }
  return 0.0;
}

Vec Density::grad(const Vec& x) const {
  const auto n = x.size();
  Vec g = Vec::Zero(n);
  switch (family_) {
    case Family::Lebesgue: break;
    case Family::Gaussian: g = x / (param_ * param_); break;
    case Family::Cauchy: g = param_ * x / (1.0 + x.squaredNorm()); break;
    case Family::Polynomial:
      for (const auto& t : terms_) {
        bool alive = true;
        for (int c = static_cast<int>(n); c < 3; ++c) alive = alive && t.exps[c] == 0;
        if (!alive) continue;
        for (int a = 0; a < n; ++a) {
          double m = t.coef;
          for (int c = 0; c < n; ++c) m *= dpow(x(c), t.exps[c], c == a ? 1 : 0);
          g(a) += m;
        }
      }
      break;
  }
  return g;
}

Mat Density::hess(const Vec& x) const {
  const auto n = x.size();
  Mat H = Mat::Zero(n, n);
  switch (family_) {
    case Family::Lebesgue: break;
    case Family::Gaussian: H = Mat::Identity(n, n) / (param_ * param_); break;
    case Family::Cauchy: {
      const double q = 1.0 + x.squaredNorm();
      H = param_ * (q * Mat::Identity(n, n) - 2.0 * x * x.transpose()) / (q * q);
      break;
    }
    case Family::Polynomial:
      for (const auto& t : terms_) {
        bool alive = true;
        for (int c = static_cast<int>(n); c < 3; ++c) alive = alive && t.exps[c] == 0;
        if (!alive) continue;
        for (int a = 0; a < n; ++a) {
          for (int b = a; b < n; ++b) {
            double m = t.coef;
            for (int c = 0; c < n; ++c) m *= dpow(x(c), t.exps[c], (c == a) + (c == b));
            H(a, b) += m;
            if (b != a) H(b, a) += m;
          }
        }
      }
      break;
  }
  return H;
}

double Density::radial(double r, int k) const {
  switch (family_) {
    case Family::Lebesgue: return 0.0;
    case Family::Gaussian: {
      const double s2 = param_ * param_;
      return k == 0 ? r * r / (2 * s2) : (k == 1 ? r / s2 : 1.0 / s2);
    }
    case Family::Cauchy: {
      const double q = 1.0 + r * r;
      if (k == 0) return 0.5 * param_ * std::log1p(r * r);
      if (k == 1) return param_ * r / q;
      return param_ * (1.0 - r * r) / (q * q);
    }
    case Family::Polynomial:
      if (is_constant()) {
        Vec o = Vec::Zero(2);
        return k == 0 ? V(o) : 0.0;
      }
      break;
  }
  throw Error(ErrorKind::Dimension, "density '" + id_ + "' is not radial");
}

}  // namespace pnf
