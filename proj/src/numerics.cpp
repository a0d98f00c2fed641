#include "pnflab/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <map>
#include <mutex>

namespace pnf {

namespace {

QuadratureRule legendre_on_unit(int n) {
  // Newton on P_n from the Tricomi initial guesses; nodes on [-1, 1].
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p0 = 1.0;
        p1 = x;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  QuadratureRule base;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, legendre_on_unit(n)).first;
    base = it->second;
  }
  const double c = 0.5 * (a + b), s = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    base.nodes[i] = c + s * base.nodes[i];
    base.weights[i] *= s;
  }
  return base;
}

Vec symmetric_eigenvalues(const Mat& A) {
  const auto n = A.rows();
  Vec out(n);
  if (n == 1) {
    out(0) = A(0, 0);
  } else if (n == 2) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es;
    es.computeDirect(Eigen::Matrix2d(A), Eigen::EigenvaluesOnly);
    out = es.eigenvalues();
  } else if (n == 3) {
    // The iterative solver keeps full accuracy near repeated eigenvalues.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(Eigen::Matrix3d(A), Eigen::EigenvaluesOnly);
    out = es.eigenvalues();
  } else {
    throw Error(ErrorKind::Dimension, "symmetric_eigenvalues supports sizes 1..3");
  }
  return out;
}

double min_eigenvalue(const Mat& A) { return symmetric_eigenvalues(A)(0); }
double max_eigenvalue(const Mat& A) {
  const Vec e = symmetric_eigenvalues(A);
  return e(e.size() - 1);
}

}  // namespace pnf
