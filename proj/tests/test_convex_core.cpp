#include "pnflab/convex_core.hpp"
#include "pnflab/numerics.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace pnf;

TEST_CASE("disc support function is constant") {
  const auto K = make_body(BodySpec::ball(1.0), DirectionGrid::circle(256));
  REQUIRE(K.size() == 256);
  for (double v : K.h()) CHECK(v == 1.0);
}

TEST_CASE("ellipse support in axis direction") {
  const auto K = make_body(BodySpec::ellipse(2, 1), DirectionGrid::circle(256));
  CHECK(K.h()[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(K.h()[64] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("random body passes an independent convexity evaluation") {
  const auto grid = DirectionGrid::circle(256);
  const auto K = make_body(BodySpec::random(7, 0.1), grid);
  const auto d2 = oracle::naive_trig_derivative(K.h(), 2);
  double min_rho = 1e300;
  for (int j = 0; j < K.size(); ++j) min_rho = std::min(min_rho, d2[j] + K.h()[j]);
  CHECK(min_rho >= K.eps_convex());
  CHECK(K.gauss().min_W_eigenvalue == doctest::Approx(min_rho).epsilon(1e-10));
}

TEST_CASE("random bodies are reproducible from the seed") {
  const auto grid = DirectionGrid::circle(128);
  const auto A = make_body(BodySpec::random(11, 0.1), grid);
  const auto B = make_body(BodySpec::random(11, 0.1), grid);
  CHECK(A.h() == B.h());
  const auto C = make_body(BodySpec::random(12, 0.1), grid);
  CHECK(A.h() != C.h());
}

TEST_CASE("boundary mesh of a disc has curvature 1/R") {
  const auto m = boundary_mesh(make_body(BodySpec::ball(0.5), DirectionGrid::circle(128)));
  for (int i = 0; i < m.size(); ++i) {
    CHECK(m.II[i](0, 0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(m.normals[i].norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.points[i].norm() == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("ellipse curvature at the major-axis endpoint is a/b^2") {
  const auto m = boundary_mesh(make_body(BodySpec::ellipse(2, 1), DirectionGrid::circle(256)));
  // Second spectral derivatives carry roundoff of order (M/2)²·eps.
  CHECK(m.II[0](0, 0) == doctest::Approx(2.0).epsilon(1e-10));
  // Minor-axis endpoint: b/a².
  CHECK(m.II[64](0, 0) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(m.points[0](0) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("unit ball has principal curvatures 1 at level 4") {
  const auto m = boundary_mesh(make_body(BodySpec::ball(1.0), DirectionGrid::icosphere(4)));
  REQUIRE(m.size() == 2562);
  double err = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    const Vec e = symmetric_eigenvalues(m.II[i]);
    err = std::max({err, std::abs(e(0) - 1.0), std::abs(e(1) - 1.0)});
  }
  CHECK(err <= 1e-6);
}

TEST_CASE("ellipsoid curvature comes from the reverse Weingarten form") {
  // At the pole u = e3 of ellipsoid (a, b, c) the principal radii are a²/c and b²/c.
  const auto grid = DirectionGrid::icosphere(4);
  const auto K = make_body(BodySpec::ellipsoid(1.2, 1.0, 0.9), grid);
  int pole = -1;
  for (int i = 0; i < grid->size(); ++i) {
    if (grid->direction(i)(2) > 1.0 - 1e-12) pole = i;
  }
  if (pole >= 0) {
    const Vec e = symmetric_eigenvalues(K.gauss().W[pole]);
    CHECK(e(0) == doctest::Approx(1.0 / 0.9).epsilon(2e-3));
    CHECK(e(1) == doctest::Approx(1.44 / 0.9).epsilon(2e-3));
  }
  // Boundary area against a direct Simpson quadrature of the ellipsoid surface.
  const double a = 1.2, b = 1.0, c = 0.9;
  auto integrand = [&](double th, double ph) {
    const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    // |∂x/∂θ × ∂x/∂φ| for x = (a sinθ cosφ, b sinθ sinφ, c cosθ).
    const double nx = b * c * st * st * cp, ny = a * c * st * st * sp, nz = a * b * st * ct;
    return std::sqrt(nx * nx + ny * ny + nz * nz);
  };
  const double area = oracle::simpson(
      [&](double th) {
        return oracle::simpson([&](double ph) { return integrand(th, ph); }, 0, 2 * oracle::pi,
                               400);
      },
      0, oracle::pi, 400);
  const auto sz = euclidean_size(K);
  CHECK(sz.boundary_area == doctest::Approx(area).epsilon(1e-3));
  CHECK(sz.volume == doctest::Approx(4.0 / 3.0 * oracle::pi * a * b * c).epsilon(1e-3));
}

TEST_CASE("Minkowski sum adds support functions") {
  const auto grid = DirectionGrid::circle(256);
  const auto D = make_body(BodySpec::ball(1.0), grid);
  const auto S = minkowski_sum_support(D, D, 0.7);
  for (double v : S.h()) CHECK(v == doctest::Approx(1.7).epsilon(1e-15));

  const auto E = make_body(BodySpec::ellipse(2, 1), grid);
  const auto Z = minkowski_sum_support(E, D, 0.0);
  CHECK(Z.h() == E.h());

  const auto ED = minkowski_sum_support(E, D, 1.0);
  CHECK(ED.h()[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(ED.h()[64] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("Minkowski additivity in the scale parameter") {
  const auto grid = DirectionGrid::circle(128);
  const auto K = make_body(BodySpec::random(3, 0.1), grid);
  const auto L = make_body(BodySpec::random(4, 0.1), grid);
  for (double s : {0.0, 0.25, 0.5}) {
    for (double t : {0.0, 0.125, 1.0}) {
      const auto one = minkowski_sum_support(K, L, s + t);
      const auto two = minkowski_sum_support(minkowski_sum_support(K, L, s), L, t);
      for (int j = 0; j < K.size(); ++j) {
        // Equal up to the rounding of one extra addition.
        CHECK(std::abs(one.h()[j] - two.h()[j]) <= 4e-16 * one.h()[j]);
      }
    }
  }
}

TEST_CASE("grid mismatch and dimension errors") {
  const auto A = make_body(BodySpec::ball(1), DirectionGrid::circle(64));
  const auto B = make_body(BodySpec::ball(1), DirectionGrid::circle(128));
  const auto C = make_body(BodySpec::ball(1), DirectionGrid::icosphere(1));
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Config;
  };
  CHECK(kind_of([&] { minkowski_sum_support(A, B, 1.0); }) == ErrorKind::GridMismatch);
  CHECK(kind_of([&] { mixed_area(A, B); }) == ErrorKind::GridMismatch);
  CHECK(kind_of([&] { mixed_area(C, C); }) == ErrorKind::Dimension);
  CHECK(kind_of([&] { make_body(BodySpec::ellipse(2, 1), DirectionGrid::icosphere(1)); }) ==
        ErrorKind::Dimension);
}

TEST_CASE("explicit tables are validated, never regularized") {
  const auto grid = DirectionGrid::circle(64);
  std::vector<double> neg(64, 1.0);
  neg[5] = -0.1;
  CHECK_THROWS_AS(make_body(BodySpec::from_table(neg), grid), Error);
  try {
    make_body(BodySpec::from_table(neg), grid);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositive);
  }
  // h = 1 + 0.2 cos 3θ has h″ + h = 1 − 1.6 cos 3θ < 0 somewhere.
  std::vector<double> wavy(64);
  for (int j = 0; j < 64; ++j) wavy[j] = 1.0 + 0.2 * std::cos(3 * grid->angle(j));
  try {
    make_body(BodySpec::from_table(wavy), grid);
    FAIL("expected NonConvex");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvex);
  }
}

TEST_CASE("Euclidean size of disc, ellipse and ball") {
  const auto D = make_body(BodySpec::ball(1), DirectionGrid::circle(256));
  const auto d = euclidean_size(D);
  CHECK(std::abs(d.volume - oracle::pi) <= 1e-12);
  CHECK(std::abs(d.boundary_area - 2 * oracle::pi) <= 1e-12);

  const auto E = make_body(BodySpec::ellipse(2, 1), DirectionGrid::circle(256));
  const auto e = euclidean_size(E);
  // Perimeter 4a·E(k) with k² = 1 − b²/a², from the standard library's elliptic integral.
  const double perimeter = 4.0 * 2.0 * std::comp_ellint_2(std::sqrt(1.0 - 0.25));
  CHECK(perimeter == doctest::Approx(9.688448).epsilon(1e-6));
  CHECK(std::abs(e.boundary_area - perimeter) <= 1e-12);
  CHECK(std::abs(e.volume - 2 * oracle::pi) <= 1e-12);

  const auto B = make_body(BodySpec::ball(1), DirectionGrid::icosphere(4));
  const auto b = euclidean_size(B);
  CHECK(b.volume == doctest::Approx(4 * oracle::pi / 3).epsilon(1e-3));
  CHECK(b.boundary_area == doctest::Approx(4 * oracle::pi).epsilon(1e-3));
  // Spherical cell weights partition the sphere.
  double w = 0;
  for (int i = 0; i < B.size(); ++i) w += B.grid().cell_weight(i);
  CHECK(w == doctest::Approx(4 * oracle::pi).epsilon(1e-12));
}

TEST_CASE("mixed area") {
  const auto grid = DirectionGrid::circle(256);
  const auto D1 = make_body(BodySpec::ball(0.5), grid);
  const auto D2 = make_body(BodySpec::ball(3.0), grid);
  CHECK(mixed_area(D1, D2) == doctest::Approx(oracle::pi * 1.5).epsilon(1e-13));

  const auto K = make_body(BodySpec::random(7, 0.1), grid);
  const auto L = make_body(BodySpec::random(9, 0.1), grid);
  CHECK(mixed_area(K, K) == doctest::Approx(euclidean_size(K).volume).epsilon(1e-13));
  CHECK(mixed_area(K, L) == doctest::Approx(mixed_area(L, K)).epsilon(1e-14));

  const auto E = make_body(BodySpec::ellipse(2, 1), grid);
  const double t = 0.5;
  const double lhs = euclidean_size(minkowski_sum_support(E, D2, t)).volume;
  const double rhs = mixed_area(E, E) + 2 * t * mixed_area(E, D2) + t * t * mixed_area(D2, D2);
  CHECK(std::abs(lhs - rhs) <= 1e-10);
}

TEST_CASE("Gauss-map consistency: max <x_i, u> reproduces h") {
  const auto grid = DirectionGrid::circle(256);
  const auto K = make_body(BodySpec::random(5, 0.1), grid);
  const auto m = boundary_mesh(K);
  double err = 0.0;
  for (int j = 0; j < K.size(); ++j) {
    double best = -1e300;
    for (int i = 0; i < m.size(); ++i) best = std::max(best, m.points[i].dot(grid->direction(j)));
    err = std::max(err, std::abs(best - K.h()[j]));
  }
  CHECK(err <= 1e-8);
}

TEST_CASE("II lower bound from the largest radius of curvature") {
  for (int seed = 1; seed <= 5; ++seed) {
    const auto K = make_body(BodySpec::random(seed, 0.1), DirectionGrid::icosphere(3));
    const auto m = boundary_mesh(K);
    double min_ii = 1e300;
    for (const auto& II : m.II) min_ii = std::min(min_ii, min_eigenvalue(II));
    CHECK(min_ii >= 1.0 / K.gauss().max_W_eigenvalue - 1e-10);
  }
}

TEST_CASE("curvature convergence under grid doubling") {
  // Ratio q = (a−b)/(a+b) sets the geometric decay of the Fourier coefficients; a = 8 keeps
  // the error above roundoff long enough to observe it. The exact curvature is
  // ab / (a² sin² + b² cos²)^{3/2} at the boundary point with normal angle θ expressed through
  // the Gauss map: κ(θ) = (a²cos² + b²sin²)^{3/2} / (a² b²).
  for (double a : {2.0, 8.0}) {
    const double b = 1.0;
    double prev = -1;
    for (int M : {64, 128, 256, 512}) {
      const auto m = boundary_mesh(make_body(BodySpec::ellipse(a, b), DirectionGrid::circle(M)));
      double err = 0.0;
      for (int j = 0; j < M; ++j) {
        const double th = 2 * oracle::pi * j / M;
        const double s = a * a * std::cos(th) * std::cos(th) + b * b * std::sin(th) * std::sin(th);
        const double kappa = std::pow(s, 1.5) / (a * a * b * b);
        err = std::max(err, std::abs(m.II[j](0, 0) - kappa) / kappa);
      }
      // Below the roundoff floor (M/2)²·eps·(few) the rate is no longer observable.
      if (prev > 0) CHECK((err <= prev / 4.0 || err <= 1e-15 * M * M));
      prev = err;
    }
  }
}
