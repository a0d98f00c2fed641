#include "pnflab/interior_pde.hpp"

#include "pnflab/invn.hpp"
#include "pnflab/numerics.hpp"
#include "pnflab/weighted_measure.hpp"

#include <Eigen/QR>

#include <sstream>

namespace pnf {

namespace {

// Chebyshev–Lobatto points x_j = R cos(πj/N) and the first-derivative matrix.
void cheb(int N, double R, std::vector<double>& x, Eigen::MatrixXd& D) {
  x.resize(N + 1);
  for (int j = 0; j <= N; ++j) x[j] = R * std::cos(kPi * j / N);
  D.setZero(N + 1, N + 1);
  auto c = [&](int j) { return (j == 0 || j == N ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0); };
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      if (i != j) D(i, j) = c(i) / c(j) / (x[i] - x[j]);
    }
  }
  // Negative-sum diagonal keeps D·1 = 0 to rounding.
  for (int i = 0; i <= N; ++i) D(i, i) = -D.row(i).sum();
}

double bary(const std::vector<double>& x, const std::vector<double>& f, double t) {
  const int N = static_cast<int>(x.size()) - 1;
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double d = t - x[j];
    if (d == 0.0) return f[j];
    double w = (j % 2) ? -1.0 : 1.0;
    if (j == 0 || j == N) w *= 0.5;
    num += w / d * f[j];
    den += w / d;
  }
  return num / den;
}

std::string disc_id(double R) { return "disc:R=" + format_double(R); }

std::vector<Vec> disc_samples(double R) {
  std::vector<Vec> pts;
  for (int j = 0; j <= 8; ++j) {
    for (int a = 0; a < (j == 0 ? 1 : 32); ++a) {
      const double r = R * j / 8.0, th = 2.0 * kPi * a / 32.0;
      Vec x(2);
      x << r * std::cos(th), r * std::sin(th);
      pts.push_back(x);
    }
  }
  return pts;
}

double ineq_tol(double lhs, double rhs) { return 1e-8 * std::max({1.0, std::abs(lhs), std::abs(rhs)}); }

}  // namespace

double disc_volume(const Density& d, double R) {
  const auto q = gauss_legendre(64, 0.0, R);
  CompensatedSum s;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    s += q.weights[i] * std::exp(-d.radial(q.nodes[i], 0)) * q.nodes[i];
  }
  return 2.0 * kPi * s.value();
}

double disc_boundary(const Density& d, double R) { return 2.0 * kPi * R * std::exp(-d.radial(R, 0)); }

ModeSolution solve_mode(const RadialProblem& p, double rhs) {
  if (!p.density.is_radial()) throw Error(ErrorKind::Config, "interior solves need a radial density");
  if (p.k < 0) throw Error(ErrorKind::Config, "mode index must be non-negative");
  if (p.nodes < 4 || p.nodes % 2) {
    throw Error(ErrorKind::Config, "need an even number >= 4 of Chebyshev nodes on [-R, R]");
  }
  if (!(p.R > 0)) throw Error(ErrorKind::Config, "disc radius must be positive");
  if (p.k > 0 && rhs != 0.0) throw Error(ErrorKind::Config, "modes k >= 1 carry no forcing");
  const bool neumann0 = p.bc == RadialProblem::BC::Neumann && p.k == 0;
  if (neumann0) {
    const double a = rhs * disc_volume(p.density, p.R);
    const double b = p.data * disc_boundary(p.density, p.R);
    if (std::abs(a - b) > 1e-10 * std::max(std::abs(a), std::abs(b)) + 1e-14) {
      std::ostringstream os;
      os << "rhs*mu(M) = " << a << " but data*mu_boundary = " << b;
      throw Error(ErrorKind::IncompatibleData, os.str());
    }
  }
  const int n = p.nodes / 2, N = p.nodes - 1;
  const double parity = (p.k % 2) ? -1.0 : 1.0;
  std::vector<double> x;
  Eigen::MatrixXd D;
  cheb(N, p.R, x, D);
  const Eigen::MatrixXd D2 = D * D;
  // Fold onto the positive half: x_{N−j} = −x_j and U(−r) = parity·U(r).
  Eigen::MatrixXd F1(n, n), F2(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      F1(i, j) = D(i, j) + parity * D(i, N - j);
      F2(i, j) = D2(i, j) + parity * D2(i, N - j);
    }
  }
  // The k = 0 Neumann problem is bordered: an extra unknown λ joins the forcing and the gauge
  // U(0) = 0 closes the system. λ absorbs the discrete compatibility defect and → 0 spectrally.
  const int size = n + (neumann0 ? 1 : 0);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(size, size);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(size);
  for (int i = 1; i < n; ++i) {
    const double r = x[i];
    A.block(i, 0, 1, n) = F2.row(i) + (1.0 / r - p.density.radial(r, 1)) * F1.row(i);
    A(i, i) -= p.k * p.k / (r * r);
    if (neumann0) A(i, n) = -1.0;
    b(i) = rhs;
  }
  if (p.bc == RadialProblem::BC::Dirichlet) {
    A(0, 0) = 1.0;
  } else {
    A.block(0, 0, 1, n) = F1.row(0);
  }
  b(0) = p.data;
  if (neumann0) {
    std::vector<double> e(N + 1, 0.0);
    for (int j = 0; j < n; ++j) {
      std::fill(e.begin(), e.end(), 0.0);
      e[j] = 1.0;
      e[N - j] += 1.0;
      A(n, j) = bary(x, e, 0.0);
    }
  }
  const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd U = sol.head(n);
  // Normwise backward error; the raw residual scales with ‖D²‖ ~ N⁴.
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff() * U.cwiseAbs().maxCoeff() +
                      b.cwiseAbs().maxCoeff();
  const Eigen::VectorXd res = (A * sol - b) / std::max(norm, 1e-300);

  ModeSolution s;
  s.problem = p;
  s.rhs = rhs;
  s.compatibility_defect = neumann0 ? sol(n) : 0.0;
  s.bc_residual = std::abs(res(0));
  s.pde_residual = n > 1 ? res.segment(1, n - 1).cwiseAbs().maxCoeff() : 0.0;
  if (!(s.pde_residual <= 1e-10) || !(s.bc_residual <= 1e-10)) {
    std::ostringstream os;
    os << "collocation residual " << s.pde_residual << " / boundary " << s.bc_residual;
    throw Error(ErrorKind::SolverFailure, os.str());
  }
  Eigen::VectorXd Uf(N + 1);
  for (int j = 0; j < n; ++j) {
    Uf(j) = U(j);
    Uf(N - j) = parity * U(j);
  }
  const Eigen::VectorXd dU = D * Uf, d2U = D2 * Uf;
  s.xfull = x;
  s.ufull.assign(Uf.data(), Uf.data() + N + 1);
  s.dufull.assign(dU.data(), dU.data() + N + 1);
  s.d2ufull.assign(d2U.data(), d2U.data() + N + 1);
  for (int j = 0; j < n; ++j) {
    s.r.push_back(x[j]);
    s.u.push_back(Uf(j));
    s.du.push_back(dU(j));
    s.d2u.push_back(d2U(j));
  }
  return s;
}

std::array<double, 3> ModeSolution::profile(double r) const {
  return {bary(xfull, ufull, r), bary(xfull, dufull, r), bary(xfull, d2ufull, r)};
}

double ModeSolution::value(double r, double theta) const {
  return profile(r)[0] * std::cos(problem.k * theta);
}

ReillyTerms reilly_terms(const ModeSolution& s) {
  const auto& p = s.problem;
  const double R = p.R, k = p.k, k2 = k * k;
  const double ck = p.k == 0 ? 2.0 * kPi : kPi;  // ∫cos²kθ
  const double sk = p.k == 0 ? 0.0 : kPi;        // ∫sin²kθ
  const double avg = p.k == 0 ? 2.0 * kPi : 0.0;  // ∫cos kθ
  const int m = p.nodes + 16;
  const auto q = gauss_legendre(m, 0.0, R);
  CompensatedSum lu2, hess, ric, lu;
  for (int i = 0; i < m; ++i) {
    const double r = q.nodes[i];
    const auto [U, U1, U2] = s.profile(r);
    const double V1 = p.density.radial(r, 1), V2 = p.density.radial(r, 2);
    const double w = q.weights[i] * std::exp(-p.density.radial(r, 0)) * r;
    const double LU = U2 + (1.0 / r - V1) * U1 - k2 * U / (r * r);
    lu2 += ck * LU * LU * w;
    lu += avg * LU * w;
    // Orthonormal polar frame: H_rr = U'' cos, H_θθ = (U'/r − k²U/r²) cos, H_rθ = −k(U'/r − U/r²) sin.
    const double hqq = U1 / r - k2 * U / (r * r);
    const double hrq = k * (U1 / r - U / (r * r));
    hess += (ck * (U2 * U2 + hqq * hqq) + 2.0 * sk * hrq * hrq) * w;
    // ∇²V has eigenvalues V'' (radial) and V'/r (tangential).
    ric += (ck * V2 * U1 * U1 + sk * (V1 / r) * k2 * U * U / (r * r)) * w;
  }
  ReillyTerms t;
  t.lu2 = lu2.value();
  t.hess = hess.value();
  t.ric = ric.value();
  t.lu = lu.value();
  t.lu2_pde = p.k == 0 ? s.rhs * s.rhs * disc_volume(p.density, R) : 0.0;
  const auto [UR, U1R, U2R] = s.profile(R);
  (void)U2R;
  const double wb = std::exp(-p.density.radial(R, 0)) * R;  // dμ_∂ = wb dθ
  const double H = 1.0 / R - p.density.radial(R, 1);
  t.h_unu2 = H * ck * U1R * U1R * wb;
  // ∇_∂u = −(k U(R)/R) sin kθ; the density is constant along the circle, so L_∂ = Δ_∂.
  t.ii_grad = sk * k2 * UR * UR / (R * R * R) * wb;
  t.cross = sk * k2 * U1R * UR / (R * R) * wb;
  t.iinv_gradnu = sk * k2 * U1R * U1R / R * wb;
  t.unu_lbu = -ck * k2 * U1R * UR / (R * R) * wb;
  t.unu = avg * U1R * wb;
  return t;
}

const char* to_string(ReillyVariant v) {
  switch (v) {
    case ReillyVariant::Full: return "full";
    case ReillyVariant::NeumannConstant: return "neumann-constant";
    case ReillyVariant::Dirichlet: return "dirichlet";
  }
  return "?";
}

VerdictReport reilly_residual(const ModeSolution& s, ReillyVariant variant) {
  const auto& p = s.problem;
  if (variant == ReillyVariant::Dirichlet && p.bc != RadialProblem::BC::Dirichlet) {
    throw Error(ErrorKind::VariantMismatch, "dirichlet variant needs a dirichlet solution");
  }
  if (variant == ReillyVariant::NeumannConstant && p.k != 0 &&
      !(p.bc == RadialProblem::BC::Dirichlet && p.data == 0.0)) {
    throw Error(ErrorKind::VariantMismatch,
                "neumann-constant variant needs u or u_nu constant on the boundary (k = 0)");
  }
  const auto t = reilly_terms(s);
  double rhs = t.hess + t.ric + t.h_unu2 + t.ii_grad;
  double mag = std::abs(t.hess) + std::abs(t.ric) + std::abs(t.h_unu2) + std::abs(t.ii_grad);
  if (variant == ReillyVariant::Full) {
    rhs -= 2.0 * t.cross;
    mag += 2.0 * std::abs(t.cross);
  } else if (variant == ReillyVariant::Dirichlet) {
    rhs += 2.0 * t.unu_lbu;
    mag += 2.0 * std::abs(t.unu_lbu);
  }
  const double denom = std::max(std::abs(t.lu2_pde), mag);
  auto r = identity_verdict(std::string("reilly-") + to_string(variant), t.lu2_pde, rhs,
                            1e-6 * denom);
  r.body_id = disc_id(p.R);
  r.density_id = p.density.id();
  r.resolution = "n=" + std::to_string(p.nodes);
  const double resid = denom > 0 ? std::abs(t.lu2_pde - rhs) / denom : 0.0;
  r.note = "k=" + std::to_string(p.k) + "; residual=" + format_double(resid);
  return r;
}

namespace {

void tag_rows(ChainReport& c, const Density& d, double R, double invN, int nodes) {
  for (auto& r : c.rows) {
    r.body_id = disc_id(R);
    r.density_id = d.id();
    r.invN = invN;
    r.resolution = "n=" + std::to_string(nodes);
  }
}

}  // namespace

ChainReport colesanti_proof_chain(const Density& d, double R, double invN,
                                  const std::vector<double>& cos_coeffs, int nodes) {
  validate_invN(invN, 2);
  require_cd(d, 0.0, invN, disc_samples(R), "colesanti_proof_chain");
  const double c0 = cos_coeffs.empty() ? 0.0 : cos_coeffs[0];
  if (is_minus_inf(invN) && c0 != 0.0) {
    throw Error(ErrorKind::ConventionViolation, "N = 0 needs zero-mean boundary data");
  }
  const double mu = disc_volume(d, R), mub = disc_boundary(d, R);
  const double wb = mub / (2.0 * kPi);
  const double H = 1.0 / R - d.radial(R, 1);
  CompensatedSum cs_l, cs_r, lu2, g2, fin_l1, fin_r;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
    const double c = cos_coeffs[k];
    if (c == 0.0) continue;
    RadialProblem p;
    p.R = R;
    p.density = d;
    p.k = static_cast<int>(k);
    p.bc = RadialProblem::BC::Neumann;
    p.data = c;
    p.nodes = nodes;
    const auto t = reilly_terms(solve_mode(p, k == 0 ? c * mub / mu : 0.0));
    cs_l += 2.0 * t.cross;
    cs_r += t.ii_grad + t.iinv_gradnu;
    lu2 += t.lu2_pde;
    g2 += t.hess + t.ric;
    // Closed forms of the data side: ∫H f², ∫⟨II⁻¹∇_∂f,∇_∂f⟩.
    const double ck = k == 0 ? 2.0 * kPi : kPi;
    fin_l1 += H * c * c * ck * wb;
    fin_r += (k == 0 ? 0.0 : kPi) * double(k * k) * c * c / R * wb;
  }
  ChainReport out;
  const double invN_lu2 = is_minus_inf(invN) ? 0.0 : invN * lu2.value();
  auto cs = inequality_verdict("colesanti-chain:cs", cs_l.value(), cs_r.value(),
                               ineq_tol(cs_l.value(), cs_r.value()));
  auto gam = inequality_verdict("colesanti-chain:gamma2", invN_lu2, g2.value(),
                                ineq_tol(invN_lu2, g2.value()));
  const double fm = c0 * mub;
  const double mean_term = is_minus_inf(invN) ? 0.0 : dim_ratio(invN) * fm * fm / mu;
  const double fl = fin_l1.value() - mean_term;
  auto fin = inequality_verdict("colesanti-chain:final", fl, fin_r.value(), ineq_tol(fl, fin_r.value()));
  out.cs_slack = cs.slack;
  out.gamma2_slack = gam.slack;
  out.final_slack = fin.slack;
  const double sum = cs.slack + gam.slack;
  auto acc = identity_verdict("colesanti-chain:accounting", fin.slack, sum,
                              1e-6 * std::max({1.0, std::abs(fin.slack), std::abs(cs.slack),
                                               std::abs(gam.slack)}));
  acc.note = "final slack vs cs + gamma2";
  out.accounting_residual = fin.slack - sum;
  out.rows = {cs, gam, fin, acc};
  tag_rows(out, d, R, invN, nodes);
  return out;
}

ChainReport ros_proof_chain(const Density& d, double R, double invN, int nodes) {
  validate_invN(invN, 2);
  if (is_minus_inf(invN)) {
    throw Error(ErrorKind::ConventionViolation, "Lu = 1 has no meaning at N = 0");
  }
  const double H = 1.0 / R - d.radial(R, 1);
  if (!(H > 0)) {
    throw Error(ErrorKind::NonMeanConvex, "H_mu = " + format_double(H) + " on the circle");
  }
  require_cd(d, 0.0, invN, disc_samples(R), "ros_proof_chain");
  RadialProblem p;
  p.R = R;
  p.density = d;
  p.k = 0;
  p.bc = RadialProblem::BC::Dirichlet;
  p.data = 0.0;
  p.nodes = nodes;
  const auto t = reilly_terms(solve_mode(p, 1.0));
  const double mu = disc_volume(d, R), mub = disc_boundary(d, R);
  const double I = mub / H;  // ∫1/H_μ dμ_∂
  const double a = dim_ratio(invN);
  ChainReport out;
  auto gam = inequality_verdict("ros-chain:gamma2", invN * mu, t.hess + t.ric,
                                ineq_tol(invN * mu, t.hess + t.ric));
  auto cs = inequality_verdict("ros-chain:cs", t.unu * t.unu, t.h_unu2 * I,
                               ineq_tol(t.unu * t.unu, t.h_unu2 * I));
  auto fin = inequality_verdict("ros-chain:final", mu / a, I, ineq_tol(mu / a, I));
  out.cs_slack = cs.slack;
  out.gamma2_slack = gam.slack;
  out.final_slack = fin.slack;
  const double sum = (cs.slack + gam.slack * I) / (a * mu);
  auto acc = identity_verdict("ros-chain:accounting", fin.slack, sum,
                              1e-6 * std::max({1.0, std::abs(fin.slack), std::abs(sum)}));
  acc.note = "final slack vs (cs + gamma2*int(1/H))/((1-invN) mu)";
  out.accounting_residual = fin.slack - sum;
  out.rows = {gam, cs, fin, acc};
  tag_rows(out, d, R, invN, nodes);
  return out;
}

}  // namespace pnf
