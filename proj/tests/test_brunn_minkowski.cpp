#include "pnflab/brunn_minkowski.hpp"

#include "pnflab/invn.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace pnf;

namespace {

GridPtr circle(int M = 256) { return DirectionGrid::circle(M); }

// Perimeter of the ellipse with semi-axes a ≥ b.
double ellipse_perimeter(double a, double b) {
  return 4.0 * a * std::comp_ellint_2(std::sqrt(1.0 - b * b / (a * a)));
}

}  // namespace

TEST_CASE("ellipse plus disc has sqrt-area concave with the mixed-area closed form") {
  const auto g = circle();
  const auto K = make_body(BodySpec::ellipse(2.0, 1.0), g);
  const auto L = make_body(BodySpec::ball(1.0), g);
  const auto p = concavity_profile(ExtensionSpec::euclidean_sum(L), K, Density::lebesgue(), 0.5,
                                   2.0, 41);
  const double A = 2.0 * kPi, P = ellipse_perimeter(2.0, 1.0);
  double worst = -kInf;
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    const double t = p.t[i];
    const double v = A + P * t + kPi * t * t;
    CHECK(p.v[i] == doctest::Approx(v).epsilon(1e-12));
    // G = 2√(v/A) − 2, so G″ = (2/√A)(v″/(2√v) − v′²/(4 v^{3/2})).
    const double dv = P + 2.0 * kPi * t;
    const double d2 = (2.0 / std::sqrt(A)) * (2.0 * kPi / (2.0 * std::sqrt(v)) -
                                              dv * dv / (4.0 * std::pow(v, 1.5)));
    worst = std::max(worst, d2);
  }
  CHECK(p.max_D2G <= 1e-9);
  CHECK(p.max_D2G == doctest::Approx(worst).epsilon(1e-3));
  CHECK(p.verdict.pass);
  CHECK(p.verdict.id == "concavity:euclidean-sum(ball:1)");
  CHECK(!p.truncated);
}

TEST_CASE("geodesic extension under the gaussian is log-concave") {
  const auto g = circle();
  const auto K = make_body(BodySpec::ellipse(2.0, 1.0), g);
  const auto p = concavity_profile(ExtensionSpec::geodesic(), K, Density::gaussian(1.0), 0.0, 2.0,
                                   41);
  CHECK(p.verdict.pass);
  CHECK(p.max_D2G < 0.0);
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    CHECK(p.G[i] == doctest::Approx(std::log(p.v[i] / p.v[0])).epsilon(1e-14));
  }
}

TEST_CASE("equal discs give an affine profile") {
  const auto g = circle();
  const auto K = make_body(BodySpec::ball(1.0), g);
  const auto p = concavity_profile(ExtensionSpec::euclidean_sum(K), K, Density::lebesgue(), 0.5,
                                   2.0, 21);
  for (double d : p.D2G) CHECK(std::abs(d) <= 1e-10);
  CHECK(p.verdict.pass);
}

TEST_CASE("pnf and wave traces feed the profiler") {
  const auto g = circle(128);
  const auto K = make_body(BodySpec::ellipse(2.0, 1.0), g);
  const auto L = make_body(BodySpec::ball(1.0), g);
  const auto flow = concavity_profile(ExtensionSpec::pnf_support(L), K, Density::lebesgue(), 0.5,
                                      1.0, 21);
  const auto sum = concavity_profile(ExtensionSpec::euclidean_sum(L), K, Density::lebesgue(), 0.5,
                                     1.0, 21);
  CHECK(flow.verdict.pass);
  for (std::size_t i = 0; i < flow.v.size(); ++i) {
    CHECK(flow.v[i] == doctest::Approx(sum.v[i]).epsilon(1e-8));
  }
  const auto w = concavity_profile(ExtensionSpec::wave(BoundaryFunction::constant(*g, 1.0)), K,
                                   Density::gaussian(1.0), 0.0, 0.5, 11);
  CHECK(w.verdict.pass);
  CHECK(w.verdict.id == "concavity:wave(one)");
  for (std::size_t i = 1; i < w.v.size(); ++i) CHECK(w.v[i] > w.v[i - 1]);
}

TEST_CASE("a truncated trace is emitted with a flag and does not pass") {
  const auto g = circle(128);
  const auto K = make_body(BodySpec::ellipse(2.0, 1.0), g);
  const auto p = concavity_profile(ExtensionSpec::pnf(BoundaryFunction::constant(*g, -1.0)), K,
                                   Density::lebesgue(), 0.5, 1.0, 101);
  CHECK(p.truncated);
  CHECK(p.flag == "TruncatedTrace:ConvexityLost");
  CHECK(!p.verdict.pass);
  CHECK(p.t.size() < 101);
  CHECK(p.t.back() < 0.5);
  // Before truncation K − tB is a convex body, whose √area stays concave.
  CHECK(p.max_D2G <= p.tol);
}

TEST_CASE("minkowski second inequality closed forms") {
  const auto g = circle();
  SUBCASE("disc is the equality case") {
    const double R = 1.3;
    const auto v = minkowski_second(make_body(BodySpec::ball(R), g), Density::lebesgue(), 0.5);
    CHECK(v.rhs == doctest::Approx(std::pow(2.0 * kPi * R, 2)).epsilon(1e-12));
    CHECK(std::abs(v.slack) <= 1e-10 * v.rhs);
    CHECK(v.pass);
  }
  SUBCASE("ellipse slack is Per² − 8π²") {
    const double P = ellipse_perimeter(2.0, 1.0);
    const auto v =
        minkowski_second(make_body(BodySpec::ellipse(2.0, 1.0), g), Density::lebesgue(), 0.5);
    CHECK(v.rhs == doctest::Approx(P * P).epsilon(1e-12));
    CHECK(v.lhs == doctest::Approx(8.0 * kPi * kPi).epsilon(1e-12));
    CHECK(v.slack == doctest::Approx(P * P - 8.0 * kPi * kPi).epsilon(1e-10));
    CHECK(v.slack == doctest::Approx(14.91).epsilon(1e-3));
  }
  SUBCASE("gaussian circle r = 0.5 with invN = 0") {
    const double e = std::exp(-0.125);
    const double d0 = 2.0 * kPi * (1.0 - e), d1 = kPi * e, d2 = 1.5 * d1;
    const auto v =
        minkowski_second(make_body(BodySpec::ball(0.5), g), Density::gaussian(1.0), 0.0);
    CHECK(v.lhs == doctest::Approx(d0 * d2).epsilon(1e-12));
    CHECK(v.rhs == doctest::Approx(d1 * d1).epsilon(1e-12));
    CHECK(v.slack == doctest::Approx(d1 * d1 - d0 * d2).epsilon(1e-10));
    CHECK(v.pass);
  }
  SUBCASE("gaussian with N = n fails the CD hypothesis") {
    CHECK_THROWS_AS(
        minkowski_second(make_body(BodySpec::ball(0.5), g), Density::gaussian(1.0), 0.5), Error);
  }
}

TEST_CASE("profile verdict agrees with the mixed-area sign") {
  const auto g = circle();
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto K = make_body(BodySpec::random(seed, 0.1), g);
    const auto L = make_body(BodySpec::random(seed + 100, 0.1, 0.7), g);
    const double AKL = mixed_area(K, L), AK = mixed_area(K, K), AL = mixed_area(L, L);
    const auto p = concavity_profile(ExtensionSpec::euclidean_sum(L), K, Density::lebesgue(), 0.5,
                                     2.0, 41);
    const bool mixed_ok = AKL * AKL - AK * AL >= -1e-10;
    CHECK(mixed_ok);
    CHECK(p.verdict.pass == mixed_ok);
    // Area of K + tL is the mixed-area quadratic.
    for (std::size_t i = 0; i < p.t.size(); ++i) {
      const double t = p.t[i];
      CHECK(p.v[i] == doctest::Approx(AK + 2.0 * t * AKL + t * t * AL).epsilon(1e-10));
    }
  }
}

TEST_CASE("first variation matches a forward difference") {
  const auto g = circle();
  const double eps = 1e-4;
  for (const auto& d : {Density::lebesgue(), Density::gaussian(1.0)}) {
    for (std::uint64_t seed : {3u, 9u}) {
      const auto K = make_body(BodySpec::random(seed, 0.1), g);
      const auto L = make_body(BodySpec::ellipse(1.0, 0.6), g);
      const auto s = sum_variations(K, L, d);
      const double v1 = weighted_measures(minkowski_sum_support(K, L, eps), d).volume;
      std::vector<double> hm(K.h());
      for (int i = 0; i < K.size(); ++i) hm[i] -= eps * L.h()[i];
      const double vm = weighted_measures(SupportBody(g, hm), d).volume;
      CHECK(std::abs((v1 - s.v) / eps - s.dv) <= eps * std::abs(s.d2v) + 1e-8);
      // Central difference: O(ε²) truncation plus O(u/ε²) round-off.
      CHECK(std::abs((v1 - 2.0 * s.v + vm) / (eps * eps) - s.d2v) <= 1e-5 * std::abs(s.d2v));
    }
  }
}

TEST_CASE("branch totality over invN") {
  const auto g = circle(128);
  const auto K = make_body(BodySpec::ellipse(1.5, 1.0), g);
  const auto L = make_body(BodySpec::ball(1.0), g);
  const auto O = make_body(BodySpec::ball(3.0), g);
  for (double invN : {0.5, 1.0 / 3.0, 0.0, -1.0, -1e6}) {
    for (const auto& d : {Density::lebesgue(), Density::gaussian(1.0)}) {
      if (d.family() == Density::Family::Gaussian && invN > 0) continue;
      const auto p = concavity_profile(ExtensionSpec::geodesic(), K, d, invN, 2.0, 21);
      for (double G : p.G) CHECK(std::isfinite(G));
      CHECK(std::isfinite(p.max_D2G));
      CHECK(p.verdict.pass);
      const auto rows = isoperimetric_checks(K, L, O, d, invN, {.T = 1.0, .samples = 11});
      for (const auto& r : rows) {
        INFO(r.id << " invN=" << invN << " " << d.id());
        CHECK(std::isfinite(r.slack));
        CHECK(r.pass);
      }
    }
  }
  // At invN = 0 the transform is the log limit of the finite branches.
  const double v = 3.0, v0 = 2.0;
  CHECK(bm_transform(v, v0, 1e-9) == doctest::Approx(bm_transform(v, v0, 0.0)).epsilon(1e-8));
  CHECK_THROWS_AS(concavity_profile(ExtensionSpec::geodesic(), K, Density::lebesgue(), -kInf, 1.0,
                                    11),
                  Error);
}

TEST_CASE("isoperimetric checks on nested discs") {
  const auto g = circle();
  const double r = 0.5, R = 2.0;
  const auto K = make_body(BodySpec::ball(r), g);
  const auto L = make_body(BodySpec::ball(1.0), g);
  const auto O = make_body(BodySpec::ball(R), g);
  CHECK(diameter_certificate(O, L) == doctest::Approx(2.0 * R).epsilon(1e-14));
  const auto rows = isoperimetric_checks(K, L, O, Density::lebesgue(), 0.5);
  REQUIRE(rows.size() == 5);
  for (const auto& row : rows) {
    INFO(row.id);
    CHECK(row.pass);
  }
  const auto& diam = rows[2];
  CHECK(diam.id == "isop-diameter");
  CHECK(diam.rhs == doctest::Approx(2.0 * kPi * r).epsilon(1e-12));
  CHECK(diam.lhs == doctest::Approx(kPi * r * (R - r) / R).epsilon(1e-12));
  CHECK(rows[3].id == "isop-homogeneous");
  CHECK(std::abs(rows[3].slack) <= 1e-10);  // 2πr = 2√(πr²·π)
  CHECK(rows[4].id == "isop-profile");
  CHECK(std::abs(rows[4].slack) <= 1e-9);  // equality family
}

TEST_CASE("isoperimetric profile for ellipse plus disc is the quadratic closed form") {
  const auto g = circle();
  const auto K = make_body(BodySpec::ellipse(2.0, 1.0), g);
  const auto L = make_body(BodySpec::ball(1.0), g);
  const auto O = make_body(BodySpec::ball(5.0), g);
  const auto rows = isoperimetric_checks(K, L, O, Density::lebesgue(), 0.5);
  const double P = ellipse_perimeter(2.0, 1.0);
  // With v = A + Pt + πt², (v′)² − 2vv″ = P² − 4πA for every t.
  CHECK(rows.back().id == "isop-profile");
  CHECK(rows.back().slack == doctest::Approx(P * P - 8.0 * kPi * kPi).epsilon(1e-9));
  CHECK(rows[1].id == "isop-sup");
  CHECK(rows[1].rhs == doctest::Approx(P).epsilon(1e-12));
  for (const auto& row : rows) CHECK(row.pass);
}

TEST_CASE("hypothesis errors") {
  const auto g = circle(64);
  const auto L = make_body(BodySpec::ball(1.0), g);
  const auto big = make_body(BodySpec::ball(2.0), g);
  const auto small = make_body(BodySpec::ball(1.0), g);
  try {
    isoperimetric_checks(big, L, small, Density::lebesgue(), 0.5);
    FAIL("expected ContainmentViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ContainmentViolated);
  }
  try {
    IsoOptions o;
    o.diameter = 3.0;  // Ω − Ω = disc(4)
    isoperimetric_checks(small, L, big, Density::lebesgue(), 0.5, o);
    FAIL("expected DiameterCertificateFailed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DiameterCertificateFailed);
  }
  IsoOptions ok;
  ok.diameter = 5.0;
  const auto rows = isoperimetric_checks(small, L, big, Density::lebesgue(), 0.5, ok);
  CHECK(rows[2].note == "D=5");
}

TEST_CASE("profile csv") {
  const auto g = circle(64);
  const auto K = make_body(BodySpec::ball(1.0), g);
  const auto p =
      concavity_profile(ExtensionSpec::geodesic(), K, Density::lebesgue(), 0.5, 1.0, 5);
  std::ostringstream a, b;
  write_profile_csv(a, p);
  write_profile_csv(b, p);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("t,v,G,D2G\n0,", 0) == 0);
  std::istringstream in(a.str());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == 6);
}
