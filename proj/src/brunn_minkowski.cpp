#include "pnflab/brunn_minkowski.hpp"

#include "pnflab/invn.hpp"
#include "pnflab/numerics.hpp"
#include "pnflab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace pnf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::vector<Vec> scaled_samples(const std::vector<Vec>& pts) {
  std::vector<Vec> out;
  for (const auto& p : pts) {
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) out.push_back(s * p);
  }
  return out;
}

void require_profile_invN(double invN, int n) {
  validate_invN(invN, n);
  if (is_minus_inf(invN)) {
    throw Error(ErrorKind::ConventionViolation,
                "N·v^{1/N} has no finite profile at N = 0; use a finite negative invN");
  }
}

}  // namespace

ExtensionSpec ExtensionSpec::geodesic() { return {}; }

ExtensionSpec ExtensionSpec::euclidean_sum(const SupportBody& L) {
  ExtensionSpec s;
  s.kind = Kind::EuclideanSum;
  s.L = std::make_shared<const SupportBody>(L);
  return s;
}

ExtensionSpec ExtensionSpec::pnf_support(const SupportBody& L) {
  ExtensionSpec s;
  s.kind = Kind::Pnf;
  s.L = std::make_shared<const SupportBody>(L);
  return s;
}

ExtensionSpec ExtensionSpec::pnf(BoundaryFunction phi) {
  ExtensionSpec s;
  s.kind = Kind::Pnf;
  s.phi = std::move(phi);
  return s;
}

ExtensionSpec ExtensionSpec::wave(BoundaryFunction phi0) {
  ExtensionSpec s;
  s.kind = Kind::Wave;
  s.phi = std::move(phi0);
  return s;
}

std::string ExtensionSpec::label() const {
  switch (kind) {
    case Kind::Geodesic:
      return "geodesic";
    case Kind::EuclideanSum:
      return "euclidean-sum(" + L->id() + ")";
    case Kind::Pnf:
      return L ? "pnf(h:" + L->id() + ")" : "pnf(" + phi.id + ")";
    case Kind::Wave:
      return "wave(" + phi.id + ")";
  }
  return "unknown";
}

ConcavityProfile concavity_from_values(std::vector<double> t, std::vector<double> v, double invN) {
  const int n = static_cast<int>(t.size());
  if (n < 3 || v.size() != t.size()) throw Error(ErrorKind::Config, "profile needs >= 3 samples");
  ConcavityProfile p;
  const double v0 = *std::min_element(v.begin(), v.end());
  if (!(v0 > 0)) throw Error(ErrorKind::NonPositive, "profile volumes must be positive");
  p.G.resize(n);
  for (int i = 0; i < n; ++i) p.G[i] = bm_transform(v[i], v0, invN);
  const double dt = (t.back() - t.front()) / (n - 1);
  p.max_D2G = -kInf;
  for (int i = 1; i + 1 < n; ++i) {
    p.D2G.push_back((p.G[i + 1] - 2.0 * p.G[i] + p.G[i - 1]) / (dt * dt));
    p.max_D2G = std::max(p.max_D2G, p.D2G.back());
  }
  double d4 = 0.0, gmax = 1.0;
  for (int i = 2; i + 2 < n; ++i) {
    d4 = std::max(d4, std::abs(p.G[i + 2] - 4.0 * p.G[i + 1] + 6.0 * p.G[i] - 4.0 * p.G[i - 1] +
                               p.G[i - 2]) /
                          std::pow(dt, 4));
  }
  for (double g : p.G) gmax = std::max(gmax, std::abs(g));
  p.tol = dt * dt * d4 / 6.0 + 64.0 * kEps * gmax / (dt * dt);
  p.t = std::move(t);
  p.v = std::move(v);
  return p;
}

ConcavityProfile concavity_profile(const ExtensionSpec& source, const SupportBody& body,
                                   const Density& density, double invN, double T, int samples) {
  require_profile_invN(invN, body.dimension());
  if (samples < 3) throw Error(ErrorKind::Config, "profile needs >= 3 samples");
  if (!(T > 0)) throw Error(ErrorKind::Config, "profile horizon must be positive");
  std::vector<double> t, v;
  std::vector<Vec> region = body_samples(boundary_mesh(body));
  bool truncated = false;
  std::string flag;
  const double dt = T / (samples - 1);
  switch (source.kind) {
    case ExtensionSpec::Kind::Geodesic:
    case ExtensionSpec::Kind::EuclideanSum: {
      const SupportBody B = source.kind == ExtensionSpec::Kind::Geodesic
                                ? make_body(BodySpec::ball(1.0), body.grid_ptr())
                                : *source.L;
      for (int i = 0; i < samples; ++i) {
        const SupportBody Kt = minkowski_sum_support(body, B, i * dt);
        t.push_back(i * dt);
        v.push_back(weighted_measures(Kt, density).volume);
        if (i + 1 == samples) {
          const auto more = body_samples(boundary_mesh(Kt));
          region.insert(region.end(), more.begin(), more.end());
        }
      }
      break;
    }
    case ExtensionSpec::Kind::Pnf:
    case ExtensionSpec::Kind::Wave: {
      FlowTrace tr;
      if (source.kind == ExtensionSpec::Kind::Wave) {
        WaveOptions o;
        o.density = density;
        tr = wave_flow(body, source.phi, T, samples - 1, o);
      } else {
        FlowOptions o;
        o.density = density;
        tr = source.L ? pnf_integrate(body, *source.L, T, samples - 1, o)
                      : pnf_integrate(body, source.phi, T, samples - 1, o);
      }
      for (const auto& s : tr.steps) {
        t.push_back(s.t);
        v.push_back(s.volume);
      }
      const auto more = scaled_samples(tr.last().points);
      region.insert(region.end(), more.begin(), more.end());
      truncated = tr.truncated;
      flag = tr.flag;
      break;
    }
  }
  require_cd(density, 0.0, invN, region, "concavity_profile");
  if (t.size() < 3) {
    throw Error(ErrorKind::TruncatedTrace, "trace truncated before three samples: " + flag);
  }
  ConcavityProfile p = concavity_from_values(std::move(t), std::move(v), invN);
  p.extension = source.label();
  p.truncated = truncated;
  p.flag = truncated ? "TruncatedTrace:" + flag : "";
  p.verdict = inequality_verdict("concavity:" + p.extension, p.max_D2G, 0.0, p.tol);
  p.verdict.body_id = body.id();
  p.verdict.density_id = density.id();
  p.verdict.invN = invN;
  p.verdict.resolution = body.grid().resolution_label() + ";samples=" + std::to_string(samples);
  p.verdict.note = p.flag;
  // A truncated extension leaves the hypothesis unmet on [0, T].
  if (truncated) p.verdict.pass = false;
  return p;
}

VerdictReport minkowski_second(const SupportBody& body, const Density& density, double invN,
                               double tol_scale) {
  validate_invN(invN, body.dimension());
  const BoundaryMesh mesh = boundary_mesh(body);
  require_cd(density, 0.0, invN, body_samples(mesh), "minkowski_second");
  const Quermass q = quermassintegrals(body, density, invN);
  const double lhs = inverse_dim_ratio(invN) * q.delta0 * q.delta2;
  const double rhs = q.delta1 * q.delta1;
  auto v = inequality_verdict("minkowski-second", lhs, rhs,
                              inequality_tolerance(mesh, lhs, rhs, tol_scale));
  v.body_id = body.id();
  v.density_id = density.id();
  v.invN = invN;
  v.resolution = mesh.resolution;
  return v;
}

SumVariations sum_variations(const SupportBody& K, const SupportBody& L, const Density& density) {
  require_same_grid(K, L);
  const BoundaryMesh mesh = boundary_mesh(K);
  const WeightedMeasures w = weighted_measures(K, mesh, density);
  const auto grad = sphere_gradient(K.grid(), L.h());
  CompensatedSum d1, d2;
  for (int i = 0; i < mesh.size(); ++i) {
    const double h = L.h()[i];
    d1 += w.mass[i] * h;
    const double tang = grad[i].dot(mesh.II[i] * grad[i]);
    d2 += w.mass[i] * (w.H_mu[i] * h * h - tang);
  }
  return {w.volume, d1.value(), d2.value()};
}

double diameter_certificate(const SupportBody& Omega, const SupportBody& L) {
  require_same_grid(Omega, L);
  const auto& g = Omega.grid();
  double D = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    D = std::max(D, (Omega.h()[i] + Omega.h()[g.antipode(i)]) / L.h()[i]);
  }
  return D;
}

std::vector<VerdictReport> isoperimetric_checks(const SupportBody& K, const SupportBody& L,
                                                const SupportBody& Omega, const Density& density,
                                                double invN, const IsoOptions& opt) {
  require_same_grid(K, L);
  require_same_grid(K, Omega);
  require_profile_invN(invN, K.dimension());
  for (int i = 0; i < K.size(); ++i) {
    if (K.h()[i] > Omega.h()[i] * (1.0 + 1e-12)) {
      throw Error(ErrorKind::ContainmentViolated, "h_K exceeds h_Omega at direction " +
                                                      std::to_string(i));
    }
  }
  const double Dcert = diameter_certificate(Omega, L);
  double D = Dcert;
  if (opt.diameter) {
    if (!(*opt.diameter >= Dcert * (1.0 - 1e-12))) {
      throw Error(ErrorKind::DiameterCertificateFailed,
                  "Omega - Omega is not inside D*L; smallest certified D is " + format_double(Dcert));
    }
    D = *opt.diameter;
  }
  const BoundaryMesh mO = boundary_mesh(Omega);
  require_cd(density, 0.0, invN, body_samples(mO), "isoperimetric_checks");

  auto tag = [&](VerdictReport v) {
    v.body_id = K.id() + ";L=" + L.id() + ";Omega=" + Omega.id();
    v.density_id = density.id();
    v.invN = invN;
    v.resolution = K.grid().resolution_label();
    return v;
  };
  std::vector<VerdictReport> rows;
  const ConcavityProfile prof =
      concavity_profile(ExtensionSpec::euclidean_sum(L), K, density, invN, opt.T, opt.samples);
  rows.push_back(tag(prof.verdict));
  rows.back().id = "isop-concavity";

  const BoundaryMesh mK = boundary_mesh(K);
  const SumVariations var = sum_variations(K, L, density);
  const double perim = var.dv;
  const double muK = var.v;
  const double muO = weighted_measures(Omega, mO, density).volume;

  double sup = -kInf;
  for (std::size_t i = 1; i < prof.t.size(); ++i) {
    sup = std::max(sup, muK * bm_transform(prof.v[i], muK, invN) / prof.t[i]);
  }
  rows.push_back(tag(inequality_verdict("isop-sup", sup, perim,
                                        inequality_tolerance(mK, sup, perim, opt.tol_scale))));
  const double bD = muK * bm_transform(muO, muK, invN) / D;
  rows.push_back(tag(inequality_verdict("isop-diameter", bD, perim,
                                        inequality_tolerance(mK, bD, perim, opt.tol_scale))));
  rows.back().note = "D=" + format_double(D);
  const int n = K.dimension();
  if (density.is_constant() && std::abs(invN - 1.0 / n) <= 1e-15) {
    // μ(tL)^{1/N} is homogeneous of degree one, so the limsup is N·μ(L)^{1/N}.
    const double muL = weighted_measures(L, density).volume;
    const double b = n * std::pow(muK, 1.0 - 1.0 / n) * std::pow(muL, 1.0 / n);
    rows.push_back(tag(inequality_verdict("isop-homogeneous", b, perim,
                                          inequality_tolerance(mK, b, perim, opt.tol_scale))));
  }

  // (N/(N−1))·v·v″ ≤ (v′)² along t ↦ K + tL, worst sample reported.
  const double c = inverse_dim_ratio(invN);
  VerdictReport worst;
  bool have = false;
  for (double t : prof.t) {
    const SupportBody Kt = minkowski_sum_support(K, L, t);
    const SumVariations s = sum_variations(Kt, L, density);
    const double lhs = c * s.v * s.d2v;
    const double rhs = s.dv * s.dv;
    auto v = inequality_verdict("isop-profile", lhs, rhs,
                                inequality_tolerance(boundary_mesh(Kt), lhs, rhs, opt.tol_scale));
    v.note = "t=" + format_double(t);
    if (!have || v.slack + v.tol < worst.slack + worst.tol) {
      worst = v;
      have = true;
    }
  }
  rows.push_back(tag(worst));
  return rows;
}

void write_profile_csv(std::ostream& os, const ConcavityProfile& p) {
  os << "t,v,G,D2G\n";
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    os << format_double(p.t[i]) << ',' << format_double(p.v[i]) << ',' << format_double(p.G[i])
       << ',';
    if (i > 0 && i + 1 < p.t.size()) os << format_double(p.D2G[i - 1]);
    os << '\n';
  }
}

}  // namespace pnf
