#pragma once

// Fourier differentiation and interpolation of periodic samples on the uniform grid
// θ_j = 2πj/M. Accuracy is spectral for smooth data.

#include <Eigen/Core>

#include <complex>
#include <span>
#include <vector>

namespace pnf {

class Fourier {
 public:
  // Shared per size; safe to use concurrently.
  static const Fourier& of(int M);

  int size() const { return m_; }
  // Unnormalized coefficients c_k = Σ f_j e^{-ikθ_j}, k = 0..M/2.
  std::vector<std::complex<double>> forward(std::span<const double> f) const;
  // Inverse of forward (includes the 1/M factor).
  std::vector<double> inverse(std::vector<std::complex<double>> c) const;
  // d^order f/dθ^order. Odd orders drop the Nyquist mode; even orders keep it.
  std::vector<double> derivative(std::span<const double> f, int order) const;

  ~Fourier();
  Fourier(const Fourier&) = delete;
  Fourier& operator=(const Fourier&) = delete;

 private:
  explicit Fourier(int M);
  int m_;
  void* r2c_ = nullptr;
  void* c2r_ = nullptr;
};

// Band-limited interpolant through periodic samples; derivatives match Fourier::derivative
// at the grid nodes.
class TrigInterpolant {
 public:
  TrigInterpolant() = default;
  explicit TrigInterpolant(std::span<const double> samples);
  double operator()(double theta, int deriv = 0) const;
  int size() const { return m_; }

 private:
  int m_ = 0;
  std::vector<std::complex<double>> c_;
};

// Dense first-derivative matrix of the Fourier collocation scheme (even M): D f = f'.
Eigen::MatrixXd fourier_diff_matrix(int M);

}  // namespace pnf
