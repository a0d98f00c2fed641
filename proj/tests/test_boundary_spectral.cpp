#include "pnflab/boundary_spectral.hpp"
#include "pnflab/invn.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace pnf;

namespace {

SupportBody disc(double r, int M = 256) { return make_body(BodySpec::ball(r), DirectionGrid::circle(M)); }

double ellipse_perimeter(double a, double b) {
  return 4.0 * a * std::comp_ellint_2(std::sqrt(1.0 - (b * b) / (a * a)));
}

BoundaryFunction zero_mean(BoundaryFunction f, const std::vector<double>& m) {
  double fm = 0.0, ms = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    fm += f.values[i] * m[i];
    ms += m[i];
  }
  for (double& v : f.values) v -= fm / ms;
  return f;
}

}  // namespace

TEST_CASE("spectral gap: unit circle, radius 0.5 gaussian, unit sphere") {
  const auto lb = Density::lebesgue();
  const auto g1 = Density::gaussian(1.0);
  const auto c = disc(1.0);
  const auto sg = spectral_gap(c, lb);
  CHECK(std::abs(sg.lambda1 - 1.0) <= 1e-6);
  // e^{−V} is constant on the circle r = 1/2, so λ1 = 1/r².
  const auto h = disc(0.5);
  CHECK(std::abs(spectral_gap(h, g1).lambda1 - 4.0) <= 1e-6);
  const auto s = make_body(BodySpec::ball(1.0), DirectionGrid::icosphere(4));
  CHECK(std::abs(spectral_gap(s, lb).lambda1 - 2.0) <= 1e-2);
}

TEST_CASE("spectral gap eigenfunction is m-normalized, zero-mean and an eigenvector") {
  const auto e = make_body(BodySpec::ellipse(2.0, 1.0), DirectionGrid::circle(128));
  const auto d = Density::gaussian(2.0);
  BoundaryProblem p(e, d);
  const auto sg = spectral_gap(p);
  const Eigen::VectorXd& phi = sg.eigenfunction;
  const Eigen::VectorXd& m = p.op.mass;
  CHECK(std::abs(m.cwiseProduct(phi).dot(phi) - 1.0) <= 1e-12);
  CHECK(std::abs(m.dot(phi)) <= 1e-12);
  const Eigen::VectorXd r = p.op.apply_L(phi) + sg.lambda1 * phi;
  CHECK(r.cwiseAbs().maxCoeff() <= 1e-7 * sg.lambda1 * phi.cwiseAbs().maxCoeff());
  // Compare against a dense generalized eigen-solve.
  Eigen::MatrixXd S(p.op.stiffness);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::MatrixXd(m.asDiagonal()));
  CHECK(std::abs(es.eigenvalues()(0)) <= 1e-10);
  CHECK(sg.lambda1 == doctest::Approx(es.eigenvalues()(1)).epsilon(1e-10));
}

TEST_CASE("operator kernel contains constants") {
  for (const auto& g : {DirectionGrid::circle(128), DirectionGrid::icosphere(3)}) {
    const auto b = make_body(BodySpec::random(7, 0.15), g);
    const auto d = Density::gaussian(1.5);
    BoundaryProblem p(b, d);
    const Eigen::VectorXd rows = p.op.stiffness * Eigen::VectorXd::Ones(p.mesh.size());
    CHECK(rows.cwiseAbs().maxCoeff() <= 1e-10);
    Eigen::MatrixXd S(p.op.stiffness);
    CHECK((S - S.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("integration by parts on the circle") {
  const auto g = DirectionGrid::circle(128);
  const auto b = make_body(BodySpec::ellipse(1.5, 1.0), g);
  const auto d = Density::gaussian(1.0);
  BoundaryProblem p(b, d);
  const auto f = BoundaryFunction::cos_mode(*g, 2);
  const auto h = BoundaryFunction::sin_mode(*g, 1);
  const Eigen::VectorXd hv = Eigen::Map<const Eigen::VectorXd>(h.values.data(), g->size());
  const Eigen::VectorXd Lh = p.op.apply_L(hv);
  double a = 0.0, c = 0.0;
  for (int i = 0; i < g->size(); ++i) {
    const double m = p.w.mass[i];
    a += f.values[i] * Lh(i) * m;
    // ∇_∂ = II ∇_S with scalar II = 1/ρ.
    const double II = p.mesh.II[i](0, 0);
    c += II * II * (*f.sphere_grad)[i](0) * (*h.sphere_grad)[i](0) * m;
  }
  CHECK(std::abs(a + c) <= 1e-8);
}

TEST_CASE("spectral gap scales as 1/c^2") {
  const auto g = DirectionGrid::circle(128);
  const auto lb = Density::lebesgue();
  const auto b1 = make_body(BodySpec::random(3, 0.2, 1.0), g);
  std::vector<double> h2 = b1.h();
  for (double& v : h2) v *= 2.5;
  const SupportBody b2(g, h2);
  CHECK(std::abs(spectral_gap(b2, lb).lambda1 * 6.25 - spectral_gap(b1, lb).lambda1) <= 1e-8);
}

TEST_CASE("colesanti: Wirtinger and ball equalities") {
  const auto c = disc(1.0);
  const auto lb = Density::lebesgue();
  const auto r = colesanti_verify(c, lb, 0.5, BoundaryFunction::cos_mode(c.grid(), 1));
  CHECK(r.lhs == doctest::Approx(oracle::pi).epsilon(1e-12));
  CHECK(r.rhs == doctest::Approx(oracle::pi).epsilon(1e-12));
  CHECK(std::abs(r.slack) <= 1e-8);
  CHECK(r.pass);
  const auto one = colesanti_verify(c, lb, 0.5, BoundaryFunction::constant(c.grid(), 1.0));
  CHECK(std::abs(one.lhs) <= 1e-10);
  CHECK(one.rhs == 0.0);
  CHECK(one.pass);
}

TEST_CASE("colesanti: gaussian on the unit circle with f = 1") {
  const auto c = disc(1.0);
  const auto r = colesanti_verify(c, Density::gaussian(1.0), 0.0, BoundaryFunction::constant(c.grid(), 1.0));
  // H_μ = 1 − ⟨x, ν⟩ = 0 on the unit circle; μ_∂ = 2π e^{−1/2}, μ = 2π(1 − e^{−1/2}).
  const double mub = 2.0 * oracle::pi * std::exp(-0.5);
  const double mu = 2.0 * oracle::pi * (1.0 - std::exp(-0.5));
  CHECK(mub == doctest::Approx(3.810945).epsilon(1e-6));
  CHECK(mu == doctest::Approx(2.472241).epsilon(1e-6));
  CHECK(r.lhs == doctest::Approx(-mub * mub / mu).epsilon(1e-10));
  CHECK(r.rhs == 0.0);
  CHECK(r.slack == doctest::Approx(5.874548).epsilon(1e-6));
  CHECK(r.pass);
}

TEST_CASE("colesanti: N = 0 convention") {
  const auto c = disc(1.0, 64);
  const auto lb = Density::lebesgue();
  CHECK_THROWS_AS(colesanti_verify(c, lb, -kInf, BoundaryFunction::constant(c.grid(), 1.0)), Error);
  try {
    colesanti_verify(c, lb, -kInf, BoundaryFunction::constant(c.grid(), 1.0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConventionViolation);
  }
  const auto r = colesanti_verify(c, lb, -kInf, BoundaryFunction::cos_mode(c.grid(), 1));
  CHECK(r.pass);
  CHECK(std::abs(r.slack) <= 1e-8);
}

TEST_CASE("colesanti: precondition violations") {
  const auto c = disc(2.0, 64);
  // Cauchy(3) in the plane is CD(0, invN) only for invN ≤ −1 once the body leaves the unit disc.
  try {
    colesanti_verify(c, Density::cauchy(3.0), 0.0, BoundaryFunction::cos_mode(c.grid(), 1));
    FAIL("expected HypothesisUnmet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HypothesisUnmet);
  }
  CHECK(colesanti_verify(c, Density::cauchy(3.0), -1.0, BoundaryFunction::cos_mode(c.grid(), 1)).pass);
  try {
    colesanti_verify(c, Density::lebesgue(), 0.0, BoundaryFunction::table({1.0, 2.0}));
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridMismatch);
  }
}

TEST_CASE("colesanti holds on 100+ randomized admissible triples") {
  struct Case {
    Density d;
    double invN;
  };
  const std::vector<Case> cases2 = {{Density::lebesgue(), 0.5},     {Density::lebesgue(), 0.0},
                                    {Density::lebesgue(), -kInf},   {Density::gaussian(1.0), 0.0},
                                    {Density::gaussian(0.7), -1.0}, {Density::gaussian(2.0), -kInf},
                                    {Density::cauchy(3.0), -1.0},   {Density::cauchy(4.0), -kInf}};
  int checked = 0, passed = 0;
  const auto g = DirectionGrid::circle(128);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto b = make_body(BodySpec::random(seed, 0.2, 0.8 + 0.05 * seed), g);
    const auto& cs = cases2[seed % cases2.size()];
    BoundaryProblem p(b, cs.d);
    for (std::uint64_t fs = 0; fs < 8; ++fs) {
      auto f = BoundaryFunction::random_bandlimited(*g, 100 * seed + fs, 5);
      if (is_minus_inf(cs.invN)) f = zero_mean(f, p.w.mass);
      const auto r = colesanti_verify(p, cs.invN, f);
      ++checked;
      passed += r.pass;
      CHECK_MESSAGE(r.pass, "seed=" << seed << " f=" << fs << " slack=" << r.slack);
    }
  }
  const std::vector<Case> cases3 = {{Density::lebesgue(), 1.0 / 3.0}, {Density::gaussian(1.0), 0.0},
                                    {Density::gaussian(1.0), -kInf}};
  const auto s = DirectionGrid::icosphere(3);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto b = make_body(BodySpec::random(seed, 0.15), s);
    const auto& cs = cases3[seed];
    BoundaryProblem p(b, cs.d);
    for (std::uint64_t fs = 0; fs < 4; ++fs) {
      auto f = BoundaryFunction::random_bandlimited(*s, 7 * seed + fs, 3);
      if (is_minus_inf(cs.invN)) f = zero_mean(f, p.w.mass);
      const auto r = colesanti_verify(p, cs.invN, f);
      ++checked;
      passed += r.pass;
      CHECK_MESSAGE(r.pass, "3D seed=" << seed << " f=" << fs << " slack=" << r.slack);
    }
  }
  CHECK(checked >= 100);
  CHECK(passed == checked);
}

TEST_CASE("strengthened colesanti") {
  const auto lb = Density::lebesgue();
  const auto c = disc(1.0);
  try {
    colesanti_strengthened(BoundaryProblem(c, lb), 0.5, BoundaryFunction::cos_mode(c.grid(), 1));
    FAIL("expected DegenerateBeta");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateBeta);
  }
  const auto e = make_body(BodySpec::ellipse(2.0, 1.0), DirectionGrid::circle(256));
  BoundaryProblem p(e, lb);
  const auto s = colesanti_strengthened(p, 0.5, BoundaryFunction::cos_mode(e.grid(), 1));
  CHECK(s.verdict.pass);
  CHECK(s.verdict.slack >= 0.0);
  CHECK(s.verdict.slack <= s.plain.slack);
  // At f ≡ 1 the correction is exactly Σβm.
  const auto one = colesanti_strengthened(p, 0.5, BoundaryFunction::constant(e.grid(), 1.0));
  CHECK(one.verdict.slack == doctest::Approx(one.plain.slack - one.beta_mass).epsilon(1e-12));
  // Σβm = μ_∂²/(2μ) − ∫κ ds with ∫κ ds = 2π.
  const double per = ellipse_perimeter(2.0, 1.0);
  CHECK(one.beta_mass == doctest::Approx(per * per / (4.0 * oracle::pi) - 2.0 * oracle::pi).epsilon(1e-10));
  CHECK(one.verdict.pass);
}

TEST_CASE("dual colesanti") {
  const auto lb = Density::lebesgue();
  const auto c = disc(1.0);
  BoundaryProblem p(c, lb);
  const auto r = dual_colesanti_verify(p, 0.0, BoundaryFunction::cos_mode(c.grid(), 1), 0.0);
  CHECK(r.lhs == doctest::Approx(oracle::pi).epsilon(1e-10));
  CHECK(r.rhs == doctest::Approx(oracle::pi).epsilon(1e-10));
  CHECK(std::abs(r.slack) <= 1e-8);
  // cos 2θ on the unit circle with ρ = 0: LHS = 4π, RHS = 16π whatever C is.
  for (double C : {-1.0, 0.0, 1.0}) {
    const auto q = dual_colesanti_verify(p, 0.0, BoundaryFunction::cos_mode(c.grid(), 2), C);
    CHECK(q.lhs == doctest::Approx(4.0 * oracle::pi).epsilon(1e-10));
    CHECK(q.rhs == doctest::Approx(16.0 * oracle::pi).epsilon(1e-10));
    CHECK(q.pass);
  }
  const auto h = disc(0.5);
  BoundaryProblem pg(h, Density::gaussian(1.0));
  const auto g = dual_colesanti_verify(pg, 1.0, BoundaryFunction::cos_mode(h.grid(), 1), 0.0);
  // L cos θ = −4 cos θ, H_μ = 3/2, |∇_∂ cos θ|² = 4 sin²θ, II = 2, ds = dθ/2, weight e^{−1/8}.
  const double w = std::exp(-0.125);
  CHECK(g.lhs == doctest::Approx(2.0 * 4.0 * oracle::pi * 0.5 * w).epsilon(1e-10));
  CHECK(g.rhs == doctest::Approx((3.5 * 3.5) / 1.5 * oracle::pi * 0.5 * w).epsilon(1e-10));
  CHECK(g.pass);
  const auto s = make_body(BodySpec::ball(1.0), DirectionGrid::icosphere(4));
  BoundaryProblem ps(s, lb);
  const auto d3 = dual_colesanti_verify(ps, 0.0, BoundaryFunction::spherical_harmonic(s.grid(), 1, 0), 0.0);
  CHECK(d3.pass);
  CHECK(std::abs(d3.slack) <= d3.tol);
}

TEST_CASE("dual colesanti rejects non mean-convex bodies") {
  const auto c = disc(2.0, 64);
  // H_μ = 1/2 − 2 < 0 on the circle r = 2 under the standard gaussian.
  try {
    dual_colesanti_verify(BoundaryProblem(c, Density::gaussian(1.0)), 0.0,
                          BoundaryFunction::cos_mode(c.grid(), 1), 0.0);
    FAIL("expected NonMeanConvex");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonMeanConvex);
  }
}

TEST_CASE("mean curvature inequalities") {
  const auto lb = Density::lebesgue();
  const auto c = disc(1.0);
  const auto rows = mean_curvature_inequalities(BoundaryProblem(c, lb), 0.5);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(std::abs(r.slack) <= 1e-8);
    CHECK(r.pass);
  }
  const auto e = make_body(BodySpec::ellipse(2.0, 1.0), DirectionGrid::circle(256));
  const auto er = mean_curvature_inequalities(BoundaryProblem(e, lb), 0.5);
  const double per = ellipse_perimeter(2.0, 1.0);
  CHECK(er[0].lhs == doctest::Approx(2.0 * oracle::pi).epsilon(1e-12));
  CHECK(er[0].rhs == doctest::Approx(per * per / (4.0 * oracle::pi)).epsilon(1e-12));
  CHECK(er[0].slack == doctest::Approx(1.187).epsilon(1e-3));
  for (const auto& r : er) CHECK(r.pass);
  const auto s = make_body(BodySpec::ball(1.0), DirectionGrid::icosphere(4));
  const auto sr = mean_curvature_inequalities(BoundaryProblem(s, lb), 1.0 / 3.0);
  CHECK(sr[0].lhs == doctest::Approx(8.0 * oracle::pi).epsilon(1e-10));
  CHECK(sr[0].rhs == doctest::Approx(8.0 * oracle::pi).epsilon(1e-10));
  for (const auto& r : sr) CHECK(r.pass);
  // Not weighted mean-convex: only the first row survives.
  const auto big = disc(2.0, 64);
  const auto gr = mean_curvature_inequalities(BoundaryProblem(big, Density::gaussian(1.0)), 0.0);
  CHECK(gr.size() == 1);
  CHECK(gr[0].note.find("NonMeanConvex") != std::string::npos);
}

TEST_CASE("bound suite: circle radius 0.5 under the gaussian") {
  const auto h = disc(0.5);
  BoundaryProblem p(h, Density::gaussian(1.0));
  const auto rows = bound_suite(p, 1.0, 0.0);
  auto find = [&](const std::string& id) {
    for (const auto& r : rows) {
      if (r.id == id) return r;
    }
    FAIL("missing row " << id);
    return VerdictReport{};
  };
  const auto a = find("gap-sigma-xi");
  CHECK(a.lhs == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(a.rhs == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(a.pass);
  const auto b = find("gap-rho");
  CHECK(b.lhs == doctest::Approx((4.0 + std::sqrt(15.0)) / 2.0).epsilon(1e-10));
  CHECK(b.pass);
  CHECK(find("gap-lichnerowicz").note.rfind("skipped", 0) == 0);
  // Negative ρ disables the ρ row.
  const auto neg = bound_suite(p, -1.0, 0.0);
  bool skipped = false;
  for (const auto& r : neg) {
    if (r.id == "gap-rho") skipped = r.note.find("rho < 0") != std::string::npos;
  }
  CHECK(skipped);
}

TEST_CASE("bound suite: unit sphere sharpness") {
  const auto s = make_body(BodySpec::ball(1.0), DirectionGrid::icosphere(4));
  BoundaryProblem p(s, Density::lebesgue());
  const auto rows = bound_suite(p, 0.0, 1.0 / 3.0);
  int ls = 0;
  double prev_gap = kInf;
  for (const auto& r : rows) {
    CHECK_MESSAGE(r.pass, r.id << " slack=" << r.slack << " tol=" << r.tol);
    if (r.id == "gap-lichnerowicz") {
      CHECK(r.lhs == doctest::Approx(2.0).epsilon(1e-10));
      CHECK(std::abs(r.slack) <= 1e-2);
    }
    if (r.id == "gap-veysseire") CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-10));
    if (r.id.rfind("log-sobolev:", 0) == 0) {
      ++ls;
      CHECK(r.note == "lambda_LS=2");
      // Relative slack tends to zero with ε; the first two are within the O(h²) operator error.
      const double rel = std::abs(r.slack) / r.lhs;
      if (ls < 3) CHECK(rel <= 1e-2);
      prev_gap = rel;
    }
  }
  CHECK(ls == 3);
  CHECK(prev_gap < 1.0);
}
