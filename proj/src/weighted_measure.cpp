#include "pnflab/weighted_measure.hpp"

#include "pnflab/invn.hpp"
#include "pnflab/numerics.hpp"

#include <sstream>

namespace pnf {

Mat weighted_ricci(const Density& density, const Vec& x, double invN) {
  Mat R = density.hess(x);
  if (density.is_constant()) return R;
  const double c = dv_coefficient(invN, static_cast<int>(x.size()));
  if (c != 0.0) {
    const Vec g = density.grad(x);
    R -= c * g * g.transpose();
  }
  return R;
}

VerdictReport cd_check(const Density& density, double rho, double invN,
                       const std::vector<Vec>& samples) {
  if (samples.empty()) throw Error(ErrorKind::Config, "cd_check needs samples");
  const int n = static_cast<int>(samples.front().size());
  validate_invN(invN, n);
  if (std::abs(invN - 1.0 / n) < 1e-14 && !density.is_constant()) {
    throw Error(ErrorKind::ConventionViolation, "N = n requires a constant potential");
  }
  double worst = kInf;
  for (const auto& x : samples) {
    worst = std::min(worst, min_eigenvalue(weighted_ricci(density, x, invN)));
  }
  auto r = inequality_verdict("cd", rho, worst, kTolCD);
  r.density_id = density.id();
  r.rho = rho;
  r.invN = invN;
  r.resolution = "samples=" + std::to_string(samples.size());
  return r;
}

void require_cd(const Density& density, double rho, double invN, const std::vector<Vec>& samples,
                const std::string& context) {
  const auto r = cd_check(density, rho, invN, samples);
  if (!r.pass) {
    std::ostringstream os;
    os << context << ": CD(" << rho << ", 1/" << format_invN(invN) << ") fails for "
       << density.id() << " (min eigenvalue " << r.rhs << ")";
    throw Error(ErrorKind::HypothesisUnmet, os.str());
  }
}

VerdictReport gamma2_check(const Density& density, const TestFunction& u,
                           const std::vector<Vec>& samples, double invN) {
  if (samples.empty()) throw Error(ErrorKind::Config, "gamma2_check needs samples");
  const int n = static_cast<int>(samples.front().size());
  validate_invN(invN, n);
  double best_slack = kInf, best_lhs = 0.0, best_rhs = 0.0, scale = 1.0;
  for (const auto& x : samples) {
    const Vec du = u.grad(x);
    const Mat H = u.hess(x);
    const Vec dV = density.grad(x);
    const double Lu = H.trace() - dV.dot(du);
    const double gamma2 = du.dot(density.hess(x) * du) + H.squaredNorm();
    double bound = du.dot(weighted_ricci(density, x, invN) * du);
    if (is_minus_inf(invN)) {
      // −∞·0 = 0: the dimensional term only survives where Lu vanishes.
      if (std::abs(Lu) > 1e-12 * std::max(1.0, H.norm())) bound = -kInf;
    } else {
      bound += invN * Lu * Lu;
    }
    const double slack = gamma2 - bound;
    if (slack < best_slack) {
      best_slack = slack;
      best_lhs = bound;
      best_rhs = gamma2;
    }
    scale = std::max(scale, std::abs(gamma2));
  }
  auto r = inequality_verdict("gamma2", best_lhs, best_rhs, kTolCD * scale);
  r.body_id = u.id;
  r.density_id = density.id();
  r.invN = invN;
  r.resolution = "samples=" + std::to_string(samples.size());
  return r;
}

WeightedMeasures weighted_measures(const SupportBody& body, const BoundaryMesh& mesh,
                                   const Density& density) {
  const int n = mesh.size();
  const int dim = mesh.dimension;
  WeightedMeasures w;
  w.H_mu.resize(n);
  w.weight.resize(n);
  w.mass.resize(n);
  w.grad_V.resize(n);
  const auto rule = gauss_legendre(32, 0.0, 1.0);
  CompensatedSum vol, bnd;
  for (int i = 0; i < n; ++i) {
    const Vec& x = mesh.points[i];
    const double Vx = density.V(x);
    if (!std::isfinite(Vx)) throw Error(ErrorKind::QuadratureFailure, "non-finite V on boundary");
    w.weight[i] = std::exp(-Vx);
    w.mass[i] = mesh.area[i] * w.weight[i];
    w.grad_V[i] = density.grad(x);
    w.H_mu[i] = mesh.II[i].trace() - w.grad_V[i].dot(mesh.normals[i]);
    bnd += w.mass[i];

    double radial = 0.0;
    if (density.is_constant()) {
      radial = std::exp(-Vx) / dim;
    } else {
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double r = rule.nodes[q];
        const double v = density.V(Vec(r * x));
        if (!std::isfinite(v)) throw Error(ErrorKind::QuadratureFailure, "non-finite V inside");
        radial += rule.weights[q] * std::pow(r, dim - 1) * std::exp(-v);
      }
    }
    // h·det W·dσ is the volume element of the cone from the origin over the Gauss cell.
    vol += body.h()[i] * mesh.W[i].determinant() * body.grid().cell_weight(i) * radial;
  }
  w.volume = vol.value();
  w.boundary = bnd.value();
  return w;
}

WeightedMeasures weighted_measures(const SupportBody& body, const Density& density) {
  return weighted_measures(body, boundary_mesh(body), density);
}

Quermass quermassintegrals(const SupportBody& body, const Density& density, double invN) {
  validate_invN(invN, body.dimension());
  const auto mesh = boundary_mesh(body);
  const auto w = weighted_measures(body, mesh, density);
  Quermass q;
  q.delta0 = w.volume;
  q.delta1 = w.boundary;
  CompensatedSum d2;
  for (int i = 0; i < mesh.size(); ++i) d2 += w.H_mu[i] * w.mass[i];
  q.delta2 = d2.value();
  const bool defined = std::isfinite(invN) && invN != 0.0 && std::abs(invN - 1.0) > 1e-14;
  if (defined) {
    q.W_N = q.delta0;
    q.W_N1 = invN * q.delta1;
    q.W_N2 = invN * invN / (1.0 - invN) * q.delta2;
  }
  return q;
}

std::vector<Vec> body_samples(const BoundaryMesh& mesh, int stride) {
  std::vector<Vec> s;
  for (int i = 0; i < mesh.size(); i += stride) {
    for (double r : {1.0, 0.75, 0.5, 0.25}) s.push_back(r * mesh.points[i]);
  }
  s.push_back(Vec::Zero(mesh.dimension));
  return s;
}

BoundaryCDResult boundary_cd(const SupportBody& body, const Density& density, double rho,
                             double invN) {
  BoundaryCDResult out;
  const int n = body.dimension();
  validate_invN(invN, n);
  if (n == 2) {
    out.verdict = inequality_verdict("boundary-cd", 0.0, 0.0, kTolCD);
    out.verdict.note = "degenerate: the boundary of a planar body is a curve";
    out.verdict.body_id = body.id();
    out.verdict.density_id = density.id();
    return out;
  }
  const auto mesh = boundary_mesh(body);
  require_cd(density, rho, invN, body_samples(mesh, 4), "boundary_cd");
  const auto w = weighted_measures(body, mesh, density);
  const double c = density.is_constant() ? 0.0 : dv_coefficient(invN, n);
  out.sigma = kInf;
  out.xi = kInf;
  out.sign_condition = true;
  std::vector<Vec> kappa(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) {
    kappa[i] = symmetric_eigenvalues(mesh.II[i]);
    out.sigma = std::min(out.sigma, kappa[i](0));
    out.xi = std::min(out.xi, mesh.II[i].trace());
    if (w.grad_V[i].dot(mesh.normals[i]) > 0) out.sign_condition = false;
  }
  out.ricci.resize(mesh.size());
  out.rho0_pointwise.resize(mesh.size());
  double worst_slack = kInf, worst_eig = kInf, worst_target = 0.0;
  out.rho0 = out.sign_condition ? rho + out.sigma * (out.xi - out.sigma) : kInf;
  for (int i = 0; i < mesh.size(); ++i) {
    const Mat& T = mesh.frames[i];
    const Mat& II = mesh.II[i];
    const Mat I2 = Mat::Identity(II.rows(), II.cols());
    Mat ric = T.transpose() * density.hess(mesh.points[i]) * T + (w.H_mu[i] * I2 - II) * II;
    if (c != 0.0) {
      const Vec gT = T.transpose() * w.grad_V[i];
      ric -= c * gT * gT.transpose();
    }
    ric = 0.5 * (ric + ric.transpose()).eval();
    out.ricci[i] = ric;
    const double s1 = kappa[i](0), s2 = kappa[i](1);
    out.rho0_pointwise[i] =
        rho + std::min(s1 * (w.H_mu[i] - s1), s2 * (w.H_mu[i] - s2));
    const double e = min_eigenvalue(ric);
    const double target = out.sign_condition ? out.rho0 : out.rho0_pointwise[i];
    if (e - target < worst_slack) {
      worst_slack = e - target;
      worst_eig = e;
      worst_target = target;
    }
  }
  if (!out.sign_condition) {
    out.rho0 = kInf;
    for (double r0 : out.rho0_pointwise) out.rho0 = std::min(out.rho0, r0);
  }
  // The node with the smallest margin is reported.
  out.verdict = inequality_verdict("boundary-cd", worst_target, worst_eig,
                                   kTolCD * std::max(1.0, std::abs(out.rho0)));
  out.verdict.body_id = body.id();
  out.verdict.density_id = density.id();
  out.verdict.rho = rho;
  out.verdict.invN = invN;
  out.verdict.resolution = mesh.resolution;
  out.verdict.note = out.sign_condition ? "rho0 = rho + sigma(xi - sigma)"
                                        : "pointwise rho0 (grad V points outward)";
  return out;
}

}  // namespace pnf
