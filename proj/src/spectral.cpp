#include "pnflab/spectral.hpp"

#include "pnflab/common.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace pnf {

namespace {

std::mutex& plan_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

const Fourier& Fourier::of(int M) {
  if (M < 4) throw Error(ErrorKind::Dimension, "Fourier grid needs at least 4 points");
  static std::map<int, std::unique_ptr<Fourier>> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(M);
  if (it == cache.end()) it = cache.emplace(M, std::unique_ptr<Fourier>(new Fourier(M))).first;
  return *it->second;
}

Fourier::Fourier(int M) : m_(M) {
  // Called with plan_mutex held: the FFTW planner is not thread-safe.
  std::vector<double> re(M);
  std::vector<fftw_complex> co(M / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  r2c_ = fftw_plan_dft_r2c_1d(M, re.data(), co.data(), flags);
  c2r_ = fftw_plan_dft_c2r_1d(M, co.data(), re.data(), flags | FFTW_DESTROY_INPUT);
}

Fourier::~Fourier() {
  fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

std::vector<std::complex<double>> Fourier::forward(std::span<const double> f) const {
  if (static_cast<int>(f.size()) != m_) throw Error(ErrorKind::GridMismatch, "Fourier size");
  std::vector<double> in(f.begin(), f.end());
  std::vector<std::complex<double>> out(m_ / 2 + 1);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> Fourier::inverse(std::vector<std::complex<double>> c) const {
  std::vector<double> out(m_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), reinterpret_cast<fftw_complex*>(c.data()),
                       out.data());
  const double s = 1.0 / m_;
  for (double& v : out) v *= s;
  return out;
}

std::vector<double> Fourier::derivative(std::span<const double> f, int order) const {
  auto c = forward(f);
  const int K = m_ / 2;
  const std::complex<double> I(0.0, 1.0);
  for (int k = 0; k <= K; ++k) {
    std::complex<double> factor = 1.0;
    if (m_ % 2 == 0 && k == K) {
      if (order % 2 == 1) {
        factor = 0.0;
      } else {
        factor = std::pow(-1.0, order / 2) * std::pow(static_cast<double>(k), order);
      }
    } else {
      for (int d = 0; d < order; ++d) factor *= I * static_cast<double>(k);
    }
    c[k] *= factor;
  }
  return inverse(std::move(c));
}

TrigInterpolant::TrigInterpolant(std::span<const double> samples)
    : m_(static_cast<int>(samples.size())), c_(Fourier::of(m_).forward(samples)) {}

double TrigInterpolant::operator()(double theta, int deriv) const {
  const int K = m_ / 2;
  const bool nyquist = (m_ % 2 == 0);
  const int kmax = nyquist ? K - 1 : K;
  const std::complex<double> step = std::polar(1.0, theta);
  std::complex<double> e = 1.0;
  const std::complex<double> I(0.0, 1.0);
  double sum = deriv == 0 ? c_[0].real() : 0.0;
  for (int k = 1; k <= kmax; ++k) {
    e *= step;
    std::complex<double> factor = 1.0;
    for (int d = 0; d < deriv; ++d) factor *= I * static_cast<double>(k);
    sum += 2.0 * (factor * c_[k] * e).real();
  }
  if (nyquist && deriv % 2 == 0) {
    const double f = std::pow(-1.0, deriv / 2) * std::pow(static_cast<double>(K), deriv);
    sum += f * c_[K].real() * std::cos(K * theta);
  }
  return sum / m_;
}

Eigen::MatrixXd fourier_diff_matrix(int M) {
  if (M % 2 != 0) throw Error(ErrorKind::Dimension, "fourier_diff_matrix needs even M");
  const double h = 2.0 * kPi / M;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      if (i == j) continue;
      const int d = i - j;
      const double sign = (d % 2 == 0) ? 1.0 : -1.0;
      D(i, j) = 0.5 * sign / std::tan(0.5 * d * h);
    }
  }
  return D;
}

}  // namespace pnf
