#include "pnflab/boundary_spectral.hpp"

#include "pnflab/invn.hpp"
#include "pnflab/numerics.hpp"
#include "pnflab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <random>
#include <sstream>

namespace pnf {

// ---------------------------------------------------------------------------------------------
// Boundary functions

BoundaryFunction BoundaryFunction::constant(const DirectionGrid& g, double c) {
  BoundaryFunction f;
  f.values.assign(g.size(), c);
  f.sphere_grad = std::vector<Vec>(g.size(), Vec::Zero(g.dimension() - 1));
  std::ostringstream os;
  os << "const:" << c;
  f.id = c == 1.0 ? "one" : os.str();
  return f;
}

BoundaryFunction BoundaryFunction::cos_mode(const DirectionGrid& g, int k) {
  if (g.dimension() != 2) throw Error(ErrorKind::Dimension, "cos mode needs a planar grid");
  BoundaryFunction f;
  std::vector<Vec> grad(g.size());
  for (int j = 0; j < g.size(); ++j) {
    const double th = g.angle(j);
    f.values.push_back(std::cos(k * th));
    Vec d(1);
    d << -k * std::sin(k * th);
    grad[j] = d;
  }
  f.sphere_grad = std::move(grad);
  f.id = "cos:" + std::to_string(k);
  return f;
}

BoundaryFunction BoundaryFunction::sin_mode(const DirectionGrid& g, int k) {
  if (g.dimension() != 2) throw Error(ErrorKind::Dimension, "sin mode needs a planar grid");
  BoundaryFunction f;
  std::vector<Vec> grad(g.size());
  for (int j = 0; j < g.size(); ++j) {
    const double th = g.angle(j);
    f.values.push_back(std::sin(k * th));
    Vec d(1);
    d << k * std::cos(k * th);
    grad[j] = d;
  }
  f.sphere_grad = std::move(grad);
  f.id = "sin:" + std::to_string(k);
  return f;
}

namespace {

// Tangential derivative of an analytic function on S² by central differences along great
// circles; the O(ε²) error with ε = 1e-5 sits far below the discretization errors it feeds.
template <class F>
Vec analytic_sphere_grad(F fn, const Eigen::Vector3d& u, const Mat& frame) {
  const double eps = 1e-5;
  Vec g(2);
  for (int a = 0; a < 2; ++a) {
    const Eigen::Vector3d e = frame.col(a);
    const Eigen::Vector3d up = std::cos(eps) * u + std::sin(eps) * e;
    const Eigen::Vector3d um = std::cos(eps) * u - std::sin(eps) * e;
    g(a) = (fn(up) - fn(um)) / (2 * eps);
  }
  return g;
}

}  // namespace

BoundaryFunction BoundaryFunction::spherical_harmonic(const DirectionGrid& g, int l, int m) {
  if (g.dimension() != 3) throw Error(ErrorKind::Dimension, "harmonics need a spherical grid");
  if (l < 0 || std::abs(m) > l) throw Error(ErrorKind::Config, "need |m| <= l");
  BoundaryFunction f;
  std::vector<Vec> grad(g.size());
  auto fn = [&](const Eigen::Vector3d& u) { return real_spherical_harmonic(l, m, u); };
  for (int i = 0; i < g.size(); ++i) {
    const Eigen::Vector3d u = g.direction(i);
    f.values.push_back(fn(u));
    grad[i] = analytic_sphere_grad(fn, u, g.frame(i));
  }
  f.sphere_grad = std::move(grad);
  f.id = "Y:" + std::to_string(l) + "," + std::to_string(m);
  return f;
}

BoundaryFunction BoundaryFunction::random_bandlimited(const DirectionGrid& g, std::uint64_t seed,
                                                      int K) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  BoundaryFunction f;
  f.id = "random:seed=" + std::to_string(seed) + ",K=" + std::to_string(K);
  std::vector<Vec> grad(g.size());
  if (g.dimension() == 2) {
    std::vector<double> a(K + 1), b(K + 1);
    for (int k = 0; k <= K; ++k) {
      a[k] = U(rng) / (1.0 + k);
      b[k] = U(rng) / (1.0 + k);
    }
    for (int j = 0; j < g.size(); ++j) {
      const double th = g.angle(j);
      double v = a[0], d = 0.0;
      for (int k = 1; k <= K; ++k) {
        v += a[k] * std::cos(k * th) + b[k] * std::sin(k * th);
        d += k * (-a[k] * std::sin(k * th) + b[k] * std::cos(k * th));
      }
      f.values.push_back(v);
      Vec dv(1);
      dv << d;
      grad[j] = dv;
    }
  } else {
    struct Term {
      int l, m;
      double c;
    };
    std::vector<Term> terms;
    for (int l = 0; l <= K; ++l) {
      for (int m = -l; m <= l; ++m) terms.push_back({l, m, U(rng) / (1.0 + l)});
    }
    auto fn = [&](const Eigen::Vector3d& u) {
      double v = 0.0;
      for (const auto& t : terms) v += t.c * real_spherical_harmonic(t.l, t.m, u);
      return v;
    };
    for (int i = 0; i < g.size(); ++i) {
      const Eigen::Vector3d u = g.direction(i);
      f.values.push_back(fn(u));
      grad[i] = analytic_sphere_grad(fn, u, g.frame(i));
    }
  }
  f.sphere_grad = std::move(grad);
  return f;
}

BoundaryFunction BoundaryFunction::table(std::vector<double> v) {
  BoundaryFunction f;
  f.values = std::move(v);
  return f;
}

// ---------------------------------------------------------------------------------------------
// Operator

Eigen::VectorXd BoundaryOperator::apply_L(const Eigen::VectorXd& f) const {
  return -(stiffness * f).cwiseQuotient(mass);
}

BoundaryOperator assemble_operator(const BoundaryMesh& mesh, const WeightedMeasures& w) {
  BoundaryOperator op;
  op.dimension = mesh.dimension;
  const int n = mesh.size();
  op.mass = Eigen::Map<const Eigen::VectorXd>(w.mass.data(), n);
  std::vector<Eigen::Triplet<double>> trip;
  if (mesh.dimension == 2) {
    op.assembly = "fourier-collocation";
    const Eigen::MatrixXd D = fourier_diff_matrix(n);
    const double dth = 2.0 * kPi / n;
    Eigen::VectorXd q(n);
    for (int j = 0; j < n; ++j) q(j) = w.weight[j] / mesh.W[j](0, 0) * dth;
    Eigen::MatrixXd S = D.transpose() * q.asDiagonal() * D;
    // D annihilates the Nyquist mode z_j = (−1)^j; restore its (M/2)² energy so the kernel of S
    // is exactly the constants.
    const double nyq = 0.25 * n * n * q.mean() / n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) S(i, j) += ((i + j) % 2 == 0 ? nyq : -nyq);
    }
    trip.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) trip.emplace_back(i, j, 0.5 * (S(i, j) + S(j, i)));
    }
  } else {
    op.assembly = "p1-fem";
    for (const auto& t : mesh.triangles) {
      const Eigen::Vector3d pa = mesh.points[t[0]], pb = mesh.points[t[1]], pc = mesh.points[t[2]];
      const Eigen::Vector3d e[3] = {pc - pb, pa - pc, pb - pa};
      const double A = 0.5 * (pb - pa).cross(pc - pa).norm();
      const double wt = (w.weight[t[0]] + w.weight[t[1]] + w.weight[t[2]]) / 3.0;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) trip.emplace_back(t[a], t[b], wt * e[a].dot(e[b]) / (4.0 * A));
      }
    }
  }
  op.stiffness.resize(n, n);
  op.stiffness.setFromTriplets(trip.begin(), trip.end());
  return op;
}

BoundaryProblem::BoundaryProblem(const SupportBody& b, const Density& d)
    : body(std::make_shared<const SupportBody>(b)), density(std::make_shared<const Density>(d)),
      mesh(boundary_mesh(b)), w(weighted_measures(b, mesh, d)),
      op(assemble_operator(mesh, w)) {}

// ---------------------------------------------------------------------------------------------
// Spectral gap

SpectralGap spectral_gap(const BoundaryProblem& p) {
  const auto& S = p.op.stiffness;
  const Eigen::VectorXd& m = p.op.mass;
  const int n = static_cast<int>(m.size());
  const int dim = p.mesh.dimension;
  double area = 0.0;
  for (double a : p.mesh.area) area += a;
  // Shift near λ1 of the round sphere with the same area.
  const double shift = dim == 2 ? std::pow(2.0 * kPi / area, 2) : 4.0 * kPi / area;
  Eigen::SparseMatrix<double> A = S;
  for (int i = 0; i < n; ++i) A.coeffRef(i, i) += shift * m(i);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "LDLT failed");

  const int b = 6;
  Eigen::MatrixXd X(n, b);
  for (int i = 0; i < n; ++i) {
    const Vec& u = p.mesh.normals[i];
    if (dim == 2) {
      const double th = std::atan2(u(1), u(0));
      for (int k = 0; k < 3; ++k) {
        X(i, 2 * k) = std::cos((k + 1) * th);
        X(i, 2 * k + 1) = std::sin((k + 1) * th);
      }
    } else {
      X.row(i) << u(0), u(1), u(2), u(0) * u(1), u(1) * u(2), u(2) * u(0);
    }
  }
  const double msum = m.sum();
  auto deflate = [&](Eigen::MatrixXd& Y) {
    const Eigen::RowVectorXd mean = (m.transpose() * Y) / msum;
    Y.rowwise() -= mean;
  };
  SpectralGap out;
  const double tol = 1e-9;
  double prev = kInf;
  int stagnant = 0;
  for (int it = 1; it <= 3000; ++it) {
    deflate(X);
    const Eigen::MatrixXd SX = S * X;
    const Eigen::MatrixXd MX = m.asDiagonal() * X;
    Eigen::MatrixXd Ss = X.transpose() * SX, Ms = X.transpose() * MX;
    Ss = 0.5 * (Ss + Ss.transpose()).eval();
    Ms = 0.5 * (Ms + Ms.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Ss, Ms);
    if (ges.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "Ritz step failed");
    X = X * ges.eigenvectors();
    const double theta = ges.eigenvalues()(0);
    const Eigen::VectorXd x = X.col(0);
    const Eigen::VectorXd r = S * x - theta * m.cwiseProduct(x);
    const double rn = std::sqrt(r.cwiseProduct(r).cwiseQuotient(m).sum());
    const double xn = std::sqrt(m.cwiseProduct(x).cwiseProduct(x).sum());
    out.residual = rn / (std::abs(theta) * xn);
    out.iterations = it;
    out.lambda1 = theta;
    if (std::abs(theta - prev) <= 1e-15 * std::abs(theta)) {
      ++stagnant;
    } else {
      stagnant = 0;
    }
    prev = theta;
    if (out.residual <= tol || (stagnant >= 5 && out.residual <= 1e-6)) {
      out.eigenfunction = x / xn;
      // Enforce zero mean exactly after normalization.
      out.eigenfunction.array() -= m.dot(out.eigenfunction) / msum;
      out.eigenfunction /= std::sqrt(m.cwiseProduct(out.eigenfunction).dot(out.eigenfunction));
      return out;
    }
    const Eigen::MatrixXd rhs = m.asDiagonal() * X;
    X = ldlt.solve(rhs);
    for (int c = 0; c < b; ++c) X.col(c).normalize();
  }
  std::ostringstream os;
  os << "eigen-iteration stagnated, residual " << out.residual;
  throw Error(ErrorKind::SolverFailure, os.str());
}

SpectralGap spectral_gap(const SupportBody& body, const Density& density) {
  return spectral_gap(BoundaryProblem(body, density));
}

// ---------------------------------------------------------------------------------------------
// Verifiers

double inequality_tolerance(const BoundaryMesh& mesh, double lhs, double rhs, double scale) {
  // Spectral differentiation in 2D leaves only roundoff; the 3D fit and P1 operator are O(h²).
  const double c_h = mesh.dimension == 2 ? 0.0 : 0.5;
  const double h = mesh.spacing;
  return std::max(1e-8, c_h * h * h) *
         std::max({1.0, std::abs(lhs), std::abs(rhs)}) * scale;
}

std::vector<Vec> sphere_gradient_of(const BoundaryProblem& p, const BoundaryFunction& f) {
  if (static_cast<int>(f.values.size()) != p.mesh.size()) {
    throw Error(ErrorKind::GridMismatch, "boundary function length differs from mesh size");
  }
  if (f.sphere_grad) return *f.sphere_grad;
  return sphere_gradient(p.body->grid(), f.values);
}

namespace {

VerdictReport tag(VerdictReport r, const BoundaryProblem& p, double rho, double invN) {
  r.body_id = p.body->id();
  r.density_id = p.density->id();
  r.rho = rho;
  r.invN = invN;
  r.resolution = p.mesh.resolution;
  return r;
}

std::vector<Vec> cd_samples(const BoundaryProblem& p) {
  return body_samples(p.mesh, std::max(1, p.mesh.size() / 256));
}

}  // namespace

VerdictReport colesanti_verify(const BoundaryProblem& p, double invN, const BoundaryFunction& f,
                               double tol_scale) {
  validate_invN(invN, p.mesh.dimension);
  require_cd(*p.density, 0.0, invN, cd_samples(p), "colesanti");
  const auto grad = sphere_gradient_of(p, f);
  const auto& m = p.w.mass;
  CompensatedSum hf2, fm, fabs, rhs;
  for (int i = 0; i < p.mesh.size(); ++i) {
    const double fi = f.values[i];
    hf2 += p.w.H_mu[i] * fi * fi * m[i];
    fm += fi * m[i];
    fabs += std::abs(fi) * m[i];
    // ⟨II⁻¹∇_∂f, ∇_∂f⟩ = ∇_S fᵀ II ∇_S f since ∇_∂f = II ∇_S f.
    rhs += grad[i].dot(p.mesh.II[i] * grad[i]) * m[i];
  }
  double mean_term = 0.0;
  if (is_minus_inf(invN)) {
    if (std::abs(fm.value()) > 1e-12 * std::max(1.0, fabs.value())) {
      throw Error(ErrorKind::ConventionViolation,
                  "N = 0 requires a zero-mean test function (convention -inf * 0 = 0)");
    }
  } else {
    mean_term = dim_ratio(invN) * fm.value() * fm.value() / p.w.volume;
  }
  const double lhs = hf2.value() - mean_term;
  auto r = inequality_verdict("colesanti", lhs, rhs.value(),
                              inequality_tolerance(p.mesh, lhs, rhs.value(), tol_scale));
  r.note = f.id;
  return tag(r, p, 0.0, invN);
}

VerdictReport colesanti_verify(const SupportBody& body, const Density& density, double invN,
                               const BoundaryFunction& f) {
  return colesanti_verify(BoundaryProblem(body, density), invN, f);
}

StrengthenedResult colesanti_strengthened(const BoundaryProblem& p, double invN,
                                          const BoundaryFunction& f, double tol_scale) {
  if (is_minus_inf(invN)) {
    throw Error(ErrorKind::ConventionViolation, "strengthened form needs invN > -inf");
  }
  StrengthenedResult out;
  out.plain = colesanti_verify(p, invN, f, tol_scale);
  const auto& m = p.w.mass;
  const double c = dim_ratio(invN) * p.w.boundary / p.w.volume;
  CompensatedSum bm, fbm;
  for (int i = 0; i < p.mesh.size(); ++i) {
    const double beta = c - p.w.H_mu[i];
    bm += beta * m[i];
    fbm += f.values[i] * beta * m[i];
  }
  out.beta_mass = bm.value();
  const double tol = inequality_tolerance(p.mesh, c * p.w.boundary, c * p.w.boundary, tol_scale);
  if (out.beta_mass <= tol) {
    std::ostringstream os;
    os << "sum of beta*m = " << out.beta_mass << " <= " << tol << " (ball case)";
    throw Error(ErrorKind::DegenerateBeta, os.str());
  }
  const double lhs = out.plain.lhs + fbm.value() * fbm.value() / out.beta_mass;
  out.verdict = inequality_verdict("colesanti-strong", lhs, out.plain.rhs,
                                   inequality_tolerance(p.mesh, lhs, out.plain.rhs, tol_scale));
  out.verdict.note = f.id + "; beta_mass=" + format_double(out.beta_mass);
  out.verdict = tag(out.verdict, p, 0.0, invN);
  return out;
}

VerdictReport dual_colesanti_verify(const BoundaryProblem& p, double rho, const BoundaryFunction& f,
                                    double C, double tol_scale) {
  double hmin = kInf;
  for (double H : p.w.H_mu) hmin = std::min(hmin, H);
  if (!(hmin > 0.0)) {
    throw Error(ErrorKind::NonMeanConvex, "dual inequality needs H_mu > 0 (min " +
                                              format_double(hmin) + ")");
  }
  require_cd(*p.density, rho, -kInf, cd_samples(p), "dual_colesanti");
  const auto grad = sphere_gradient_of(p, f);
  const Eigen::VectorXd fv = Eigen::Map<const Eigen::VectorXd>(f.values.data(), f.values.size());
  const Eigen::VectorXd Lf = p.op.apply_L(fv);
  const auto& m = p.w.mass;
  CompensatedSum lhs, rhs;
  for (int i = 0; i < p.mesh.size(); ++i) {
    const Vec df = p.mesh.II[i] * grad[i];  // ∇_∂f
    lhs += df.dot(p.mesh.II[i] * df) * m[i];
    const double g = Lf(i) + 0.5 * rho * (fv(i) - C);
    rhs += g * g / p.w.H_mu[i] * m[i];
  }
  auto r = inequality_verdict("dual-colesanti", lhs.value(), rhs.value(),
                              inequality_tolerance(p.mesh, lhs.value(), rhs.value(), tol_scale));
  r.note = f.id + "; C=" + format_double(C);
  return tag(r, p, rho, -kInf);
}

std::vector<VerdictReport> mean_curvature_inequalities(const BoundaryProblem& p, double invN,
                                                       double tol_scale) {
  validate_invN(invN, p.mesh.dimension);
  require_cd(*p.density, 0.0, invN, cd_samples(p), "mean_curvature_inequalities");
  const auto& m = p.w.mass;
  CompensatedSum intH, intInvH;
  double hmin = kInf;
  for (int i = 0; i < p.mesh.size(); ++i) {
    intH += p.w.H_mu[i] * m[i];
    hmin = std::min(hmin, p.w.H_mu[i]);
    intInvH += m[i] / p.w.H_mu[i];
  }
  const double mu = p.w.volume, mub = p.w.boundary;
  std::vector<VerdictReport> rows;
  const double upper = is_minus_inf(invN) ? kInf : dim_ratio(invN) * mub * mub / mu;
  const double tol1 = inequality_tolerance(p.mesh, intH.value(), std::isfinite(upper) ? upper : 0.0, tol_scale);
  rows.push_back(tag(inequality_verdict("meancurv-upper", intH.value(), upper, tol1), p, 0.0, invN));
  if (!(hmin > 0.0)) {
    rows.back().note = "NonMeanConvex: H_mu rows skipped (min H_mu " + format_double(hmin) + ")";
    return rows;
  }
  const double lower = mu * inverse_dim_ratio(invN);
  rows.push_back(tag(inequality_verdict("meancurv-lower", lower, intInvH.value(),
                                        inequality_tolerance(p.mesh, lower, intInvH.value(), tol_scale)),
                     p, 0.0, invN));
  const double cs_rhs = intH.value() * intInvH.value();
  rows.push_back(tag(inequality_verdict("meancurv-cs", mub * mub, cs_rhs,
                                        inequality_tolerance(p.mesh, mub * mub, cs_rhs, tol_scale)),
                     p, 0.0, invN));
  return rows;
}

namespace {

VerdictReport skipped(const std::string& id, const std::string& why) {
  VerdictReport r = inequality_verdict(id, 0.0, 0.0, 0.0);
  r.note = "skipped: " + why;
  return r;
}

}  // namespace

std::vector<VerdictReport> bound_suite(const BoundaryProblem& p, double rho, double invN,
                                       const BoundOptions& opt) {
  validate_invN(invN, p.mesh.dimension);
  const int n = p.mesh.dimension;
  const auto sg = spectral_gap(p);
  const double l1 = sg.lambda1;
  const auto samples = cd_samples(p);
  std::vector<double> sig(p.mesh.size()), hg(p.mesh.size());
  double sigma = kInf, ximu = kInf, xig = kInf;
  for (int i = 0; i < p.mesh.size(); ++i) {
    sig[i] = min_eigenvalue(p.mesh.II[i]);
    hg[i] = p.mesh.II[i].trace();
    sigma = std::min(sigma, sig[i]);
    ximu = std::min(ximu, p.w.H_mu[i]);
    xig = std::min(xig, hg[i]);
  }
  auto tolfor = [&](double lhs) { return inequality_tolerance(p.mesh, lhs, l1, opt.tol_scale); };
  std::vector<VerdictReport> rows;
  auto push = [&](VerdictReport r) { rows.push_back(tag(std::move(r), p, rho, invN)); };

  const bool cd00 = cd_check(*p.density, 0.0, -kInf, samples).pass;
  const bool cdr0 = cd_check(*p.density, rho, -kInf, samples).pass;
  const double a = sigma * ximu;
  if (!cd00) {
    push(skipped("gap-sigma-xi", "HypothesisUnmet: CD(0,0) fails"));
  } else if (!(sigma > 0 && ximu > 0)) {
    push(skipped("gap-sigma-xi", "HypothesisUnmet: needs sigma, xi > 0"));
  } else {
    push(inequality_verdict("gap-sigma-xi", a, l1, tolfor(a)));
  }
  if (rho < 0) {
    push(skipped("gap-rho", "HypothesisUnmet: rho < 0"));
  } else if (!cdr0) {
    push(skipped("gap-rho", "HypothesisUnmet: CD(rho,0) fails"));
  } else if (!(sigma > 0 && ximu > 0)) {
    push(skipped("gap-rho", "HypothesisUnmet: needs sigma, xi > 0"));
  } else {
    const double bound = 0.5 * (rho + a + std::sqrt(2 * a * rho + a * a));
    auto r = inequality_verdict("gap-rho", bound, l1, tolfor(bound));
    r.note = "ratio=" + format_double(bound / l1);
    push(r);
  }

  // Rows valid for Euclidean boundaries of dimension ≥ 2.
  std::string why;
  if (n < 3) why = "Dimension: needs a surface boundary";
  else if (!opt.generalized && !p.density->is_constant()) why = "HypothesisUnmet: constant density required";
  else if (opt.generalized && !cd00) why = "HypothesisUnmet: CD(0,0) fails";
  const std::vector<double>& xi_field = opt.generalized ? p.w.H_mu : hg;
  const double xi = opt.generalized ? ximu : xig;
  if (opt.generalized && why.empty()) {
    const auto bcd = boundary_cd(*p.body, *p.density, 0.0, 0.0);
    if (!bcd.verdict.pass || bcd.rho0 < -kTolCD) why = "HypothesisUnmet: boundary CD(0,inf) fails";
  }
  if (why.empty() && !(sigma > 0 && xi > sigma)) why = "HypothesisUnmet: needs xi > sigma > 0";
  if (!why.empty()) {
    push(skipped("gap-lichnerowicz", why));
    push(skipped("gap-veysseire", why));
    push(skipped("gap-colesanti-constant", why));
  } else {
    const double lich = (n - 1.0) / (n - 2.0) * (xi - sigma) * sigma;
    push(inequality_verdict("gap-lichnerowicz", lich, l1, tolfor(lich)));
    CompensatedSum inv, inv_xi, inv_sig, mass;
    for (int i = 0; i < p.mesh.size(); ++i) {
      const double mi = p.w.mass[i];
      inv += mi / ((xi_field[i] - sig[i]) * sig[i]);
      inv_xi += mi / xi_field[i];
      inv_sig += mi / sig[i];
      mass += mi;
    }
    const double vey = mass.value() / inv.value();
    push(inequality_verdict("gap-veysseire", vey, l1, tolfor(vey)));
    const double cemp =
        1.0 / (l1 * (inv_xi.value() / mass.value()) * (inv_sig.value() / mass.value()));
    auto r = inequality_verdict("gap-colesanti-constant", cemp, cemp, 0.0);
    r.note = "reported only: empirical constant " + format_double(cemp);
    push(r);
  }

  // Log-Sobolev rows.
  std::string lswhy;
  if (n < 3) lswhy = "Dimension: needs a surface boundary";
  else if (is_minus_inf(invN) || invN < 0) lswhy = "HypothesisUnmet: needs N in [n, inf]";
  if (lswhy.empty()) {
    const auto bcd = boundary_cd(*p.body, *p.density, rho, invN);
    if (!bcd.sign_condition) lswhy = "HypothesisUnmet: needs <grad V, nu> <= 0";
    const double denom = 1.0 - 2.0 * invN;
    const double lls = bcd.rho0 * (1.0 - invN) / denom;
    if (lswhy.empty() && !(lls > 0)) lswhy = "HypothesisUnmet: lambda_LS <= 0";
    if (lswhy.empty()) {
      const Eigen::VectorXd& phi = sg.eigenfunction;
      const Eigen::VectorXd& m = p.op.mass;
      const double msum = m.sum();
      const double dir = phi.dot(p.op.stiffness * phi);
      for (double eps : {0.01, 0.1, 0.5}) {
        CompensatedSum e1, e2;
        for (int i = 0; i < phi.size(); ++i) {
          const double f2 = std::pow(1.0 + eps * phi(i), 2);
          const double P = m(i) / msum;
          e1 += P * (f2 > 0 ? f2 * std::log(f2) : 0.0);
          e2 += P * f2;
        }
        const double ent = e1.value() - e2.value() * std::log(e2.value());
        const double rhs = 2.0 / lls * eps * eps * dir / msum;
        auto r = inequality_verdict("log-sobolev:eps=" + format_double(eps), ent, rhs,
                                    inequality_tolerance(p.mesh, ent, rhs, opt.tol_scale) * eps * eps);
        r.note = "lambda_LS=" + format_double(lls);
        push(r);
      }
    }
  }
  if (!lswhy.empty()) push(skipped("log-sobolev", lswhy));
  return rows;
}

}  // namespace pnf
