#include "pnflab/convex_core.hpp"
#include "pnflab/verdict.hpp"

#include "pnflab/numerics.hpp"
#include "pnflab/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>

namespace pnf {

namespace {

struct Jet {
  Eigen::Vector2d grad;
  Eigen::Matrix2d hess;
};

// Quadratic fit over the one-ring in gnomonic coordinates (s, t) of the tangent plane at u_i,
// with the value at the centre pinned to zero. The gnomonic chart has vanishing Christoffel
// symbols at the centre, so the fitted Hessian is the covariant one.
Jet fit_one_ring(const DirectionGrid& grid, int i, const std::vector<double>& q) {
  const Eigen::Vector3d u = grid.direction(i);
  const Mat& F = grid.frame(i);
  const auto& nb = grid.neighbors()[i];
  const double d = grid.spacing();
  Eigen::MatrixXd A(nb.size(), 5);
  Eigen::VectorXd b(nb.size());
  for (std::size_t r = 0; r < nb.size(); ++r) {
    const Eigen::Vector3d uj = grid.direction(nb[r]);
    const double cu = uj.dot(u);
    const double s = uj.dot(F.col(0)) / cu / d;
    const double t = uj.dot(F.col(1)) / cu / d;
    A.row(r) << s, t, 0.5 * s * s, s * t, 0.5 * t * t;
    b(r) = q[r];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  Jet j;
  j.grad << c(0) / d, c(1) / d;
  j.hess << c(2), c(3), c(3), c(4);
  j.hess /= d * d;
  return j;
}

std::vector<double> ring_values(const DirectionGrid& grid, int i, const std::vector<double>& f,
                                bool homogeneous) {
  const auto& nb = grid.neighbors()[i];
  std::vector<double> q(nb.size());
  const Eigen::Vector3d u = grid.direction(i);
  for (std::size_t r = 0; r < nb.size(); ++r) {
    const double cu = homogeneous ? grid.direction(nb[r]).dot(u) : 1.0;
    q[r] = (f[nb[r]] - f[i]) / cu;
  }
  return q;
}

}  // namespace

GaussMapData gauss_map_data(const DirectionGrid& grid, const std::vector<double>& h) {
  GaussMapData g;
  const int n = grid.size();
  g.points.resize(n);
  g.grad_h.resize(n);
  g.W.resize(n);
  if (grid.dimension() == 2) {
    const auto& fo = Fourier::of(n);
    const auto d1 = fo.derivative(h, 1);
    const auto d2 = fo.derivative(h, 2);
    for (int j = 0; j < n; ++j) {
      const Vec& u = grid.direction(j);
      const Mat& F = grid.frame(j);
      g.points[j] = h[j] * u + d1[j] * F.col(0);
      Vec gr(1);
      gr << d1[j];
      g.grad_h[j] = gr;
      Mat W(1, 1);
      W << d2[j] + h[j];
      g.W[j] = W;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      // The ball part h_i·|p| of the homogeneous extension has exact Hessian h_i·I and no
      // tangential gradient, so only the deviation (h_j − h_i)·|p_j| is fitted.
      const Jet jet = fit_one_ring(grid, i, ring_values(grid, i, h, true));
      const Mat& F = grid.frame(i);
      g.points[i] = h[i] * grid.direction(i) + F * jet.grad;
      g.grad_h[i] = jet.grad;
      Mat W = jet.hess + h[i] * Eigen::Matrix2d::Identity();
      W = 0.5 * (W + W.transpose()).eval();
      g.W[i] = W;
    }
  }
  g.min_W_eigenvalue = kInf;
  g.max_W_eigenvalue = -kInf;
  for (const auto& W : g.W) {
    const Vec e = symmetric_eigenvalues(W);
    g.min_W_eigenvalue = std::min(g.min_W_eigenvalue, e(0));
    g.max_W_eigenvalue = std::max(g.max_W_eigenvalue, e(e.size() - 1));
  }
  return g;
}

std::vector<Vec> sphere_gradient(const DirectionGrid& grid, const std::vector<double>& f) {
  const int n = grid.size();
  if (static_cast<int>(f.size()) != n) throw Error(ErrorKind::GridMismatch, "function size");
  std::vector<Vec> out(n);
  if (grid.dimension() == 2) {
    const auto d1 = Fourier::of(n).derivative(f, 1);
    for (int j = 0; j < n; ++j) {
      Vec g(1);
      g << d1[j];
      out[j] = g;
    }
  } else {
    for (int i = 0; i < n; ++i) out[i] = fit_one_ring(grid, i, ring_values(grid, i, f, false)).grad;
  }
  return out;
}

double real_spherical_harmonic(int l, int m, const Eigen::Vector3d& u) {
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  const double phi = std::atan2(u.y(), u.x());
  const unsigned am = static_cast<unsigned>(std::abs(m));
  const double p = std::sph_legendre(static_cast<unsigned>(l), am, theta);
  if (m == 0) return p;
  return std::sqrt(2.0) * p * (m > 0 ? std::cos(am * phi) : std::sin(am * phi));
}

SupportBody::SupportBody(GridPtr grid, std::vector<double> h, std::string id, double eps_convex)
    : grid_(std::move(grid)), h_(std::move(h)), id_(std::move(id)) {
  if (!grid_) throw Error(ErrorKind::Dimension, "missing direction grid");
  if (static_cast<int>(h_.size()) != grid_->size()) {
    throw Error(ErrorKind::GridMismatch, "support table length differs from grid size");
  }
  double mean = 0.0;
  for (double v : h_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::NonPositive, "support function must be positive (origin interior)");
    }
    mean += v;
  }
  mean /= h_.size();
  eps_convex_ = eps_convex < 0 ? 1e-6 * mean : eps_convex;
  gauss_ = gauss_map_data(*grid_, h_);
  if (!(gauss_.min_W_eigenvalue >= eps_convex_)) {
    std::ostringstream os;
    os << "min reverse Weingarten eigenvalue " << gauss_.min_W_eigenvalue << " < eps_convex "
       << eps_convex_;
    throw Error(ErrorKind::NonConvex, os.str());
  }
}

TrigInterpolant SupportBody::support_interpolant() const {
  if (dimension() != 2) throw Error(ErrorKind::Dimension, "support interpolant is 2D only");
  return TrigInterpolant(h_);
}

std::string BodySpec::id() const {
  std::string s;
  switch (kind) {
    case Kind::Ball: s = "ball:" + format_double(radius); break;
    case Kind::Ellipsoid:
      s = axes.size() == 2 ? "ellipse:" : "ellipsoid:";
      for (std::size_t i = 0; i < axes.size(); ++i) s += (i ? "," : "") + format_double(axes[i]);
      break;
    case Kind::Random:
      s = "random:seed=" + std::to_string(seed) + ",amp=" + format_double(amp);
      if (radius != 1.0) s += ",r=" + format_double(radius);
      break;
    case Kind::Table: s = "table:" + std::to_string(table.size()); break;
  }
  return s;
}

namespace {

std::vector<double> random_support_2d(const DirectionGrid& g, std::mt19937_64& rng, double R,
                                      double amp) {
  std::uniform_real_distribution<double> U(-amp, amp);
  double a[7], b[7];
  for (int k = 1; k <= 6; ++k) {
    // |(1 − k²) c_k| ≤ amp keeps h″ + h = R(1 + Σ (1 − k²)(a_k cos + b_k sin)) bounded away from 0.
    const double scale = k == 1 ? 1.0 : 1.0 / (k * k - 1.0);
    a[k] = U(rng) * scale;
    b[k] = U(rng) * scale;
  }
  std::vector<double> h(g.size());
  for (int j = 0; j < g.size(); ++j) {
    const double th = g.angle(j);
    double p = 0.0;
    for (int k = 1; k <= 6; ++k) p += a[k] * std::cos(k * th) + b[k] * std::sin(k * th);
    h[j] = R * (1.0 + p);
  }
  return h;
}

std::vector<double> random_support_3d(const DirectionGrid& g, std::mt19937_64& rng, double R,
                                      double amp) {
  std::uniform_real_distribution<double> U(-amp, amp);
  struct Term {
    int l, m;
    double c;
  };
  std::vector<Term> terms;
  for (int l = 1; l <= 6; ++l) {
    const double peak = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi));
    const double decay = l == 1 ? 1.0 / 3.0 : 1.0 / ((l * l + l - 1.0) * (2.0 * l + 1.0));
    for (int m = -l; m <= l; ++m) terms.push_back({l, m, U(rng) * decay / peak});
  }
  std::vector<double> h(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const Eigen::Vector3d u = g.direction(i);
    double p = 0.0;
    for (const auto& t : terms) p += t.c * real_spherical_harmonic(t.l, t.m, u);
    h[i] = R * (1.0 + p);
  }
  return h;
}

}  // namespace

SupportBody make_body(const BodySpec& spec, const GridPtr& grid) {
  const int n = grid->size();
  const int dim = grid->dimension();
  std::vector<double> h(n);
  switch (spec.kind) {
    case BodySpec::Kind::Ball:
      if (!(spec.radius > 0)) throw Error(ErrorKind::NonPositive, "radius must be positive");
      std::fill(h.begin(), h.end(), spec.radius);
      return SupportBody(grid, std::move(h), spec.id());
    case BodySpec::Kind::Ellipsoid: {
      if (static_cast<int>(spec.axes.size()) != dim) {
        throw Error(ErrorKind::Dimension, "ellipse needs 2 axes, ellipsoid 3");
      }
      for (double a : spec.axes) {
        if (!(a > 0)) throw Error(ErrorKind::NonPositive, "semi-axes must be positive");
      }
      for (int i = 0; i < n; ++i) {
        const Vec& u = grid->direction(i);
        double s = 0.0;
        for (int c = 0; c < dim; ++c) s += spec.axes[c] * spec.axes[c] * u(c) * u(c);
        h[i] = std::sqrt(s);
      }
      return SupportBody(grid, std::move(h), spec.id());
    }
    case BodySpec::Kind::Random: {
      std::mt19937_64 rng(spec.seed);
      for (int attempt = 0; attempt < 1000; ++attempt) {
        h = dim == 2 ? random_support_2d(*grid, rng, spec.radius, spec.amp)
                     : random_support_3d(*grid, rng, spec.radius, spec.amp);
        try {
          return SupportBody(grid, h, spec.id());
        } catch (const Error&) {
          // Rejected draw; resample from the continuing stream.
        }
      }
      throw Error(ErrorKind::NonConvex, "random body rejected 1000 times; lower amp");
    }
    case BodySpec::Kind::Table:
      return SupportBody(grid, spec.table, spec.id());
  }
  throw Error(ErrorKind::Config, "unknown body kind");
}

BoundaryMesh boundary_mesh(const SupportBody& body) {
  const auto& g = body.grid();
  const auto& gm = body.gauss();
  BoundaryMesh m;
  m.dimension = g.dimension();
  m.spacing = g.spacing();
  m.resolution = g.resolution_label();
  const int n = g.size();
  m.points = gm.points;
  m.W = gm.W;
  m.normals.resize(n);
  m.frames.resize(n);
  m.II.resize(n);
  m.area.resize(n);
  for (int i = 0; i < n; ++i) {
    m.normals[i] = g.direction(i);
    m.frames[i] = g.frame(i);
    const Mat& W = gm.W[i];
    if (!(min_eigenvalue(W) > 0)) {
      throw Error(ErrorKind::NonConvex, "reverse Weingarten form not positive definite");
    }
    m.II[i] = W.inverse();
    // dA = det(W) dσ on the Gauss image.
    m.area[i] = W.determinant() * g.cell_weight(i);
  }
  if (m.dimension == 3) m.triangles = g.triangles();
  return m;
}

void require_same_grid(const SupportBody& K, const SupportBody& L) {
  if (!K.grid().same_as(L.grid())) {
    throw Error(ErrorKind::GridMismatch, "bodies live on different direction grids");
  }
}

SupportBody minkowski_sum_support(const SupportBody& K, const SupportBody& L, double t) {
  require_same_grid(K, L);
  if (!(t >= 0.0)) throw Error(ErrorKind::ConventionViolation, "Minkowski scale t must be >= 0");
  std::vector<double> h(K.size());
  for (int i = 0; i < K.size(); ++i) h[i] = K.h()[i] + t * L.h()[i];
  std::ostringstream id;
  id.precision(17);
  id << K.id() << "+" << t << "*" << L.id();
  return SupportBody(K.grid_ptr(), std::move(h), id.str(), K.eps_convex());
}

EuclideanSize euclidean_size(const SupportBody& body) {
  const auto& g = body.grid();
  CompensatedSum vol, area;
  const int n = g.size();
  if (g.dimension() == 2) {
    const auto d1 = Fourier::of(n).derivative(body.h(), 1);
    const double dt = 2.0 * kPi / n;
    for (int j = 0; j < n; ++j) {
      vol += 0.5 * (body.h()[j] * body.h()[j] - d1[j] * d1[j]) * dt;
      area += body.h()[j] * dt;
    }
  } else {
    const auto& gm = body.gauss();
    for (int i = 0; i < n; ++i) {
      const double a = gm.W[i].determinant() * g.cell_weight(i);
      area += a;
      vol += body.h()[i] * a / 3.0;
    }
  }
  return {vol.value(), area.value()};
}

double mixed_area(const SupportBody& K, const SupportBody& L) {
  if (K.dimension() != 2 || L.dimension() != 2) {
    throw Error(ErrorKind::Dimension, "mixed_area is defined for planar bodies");
  }
  require_same_grid(K, L);
  const int n = K.size();
  const auto& fo = Fourier::of(n);
  const auto dk = fo.derivative(K.h(), 1);
  const auto dl = fo.derivative(L.h(), 1);
  CompensatedSum s;
  for (int j = 0; j < n; ++j) s += 0.5 * (K.h()[j] * L.h()[j] - dk[j] * dl[j]);
  return s.value() * 2.0 * kPi / n;
}

}  // namespace pnf
