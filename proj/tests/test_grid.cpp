#include <doctest.h>

#include <cmath>

#include "mlnhardy/errors.hpp"
#include "mlnhardy/grid.hpp"
#include "oracles.hpp"

using namespace mlnhardy;

namespace {
double ball_volume(double R) { return 4.0 / 3.0 * oracles::kPi * R * R * R; }
}  // namespace

TEST_CASE("mesh interior count tracks the ball volume") {
  Mesh mesh = Mesh::build(Domain::ball(3, 1.0), 16, 1.25);
  const double h = mesh.spacing();
  const double expected = ball_volume(1.0) / (h * h * h);
  CHECK(std::fabs(static_cast<double>(mesh.interior_count()) - expected) <= 0.10 * expected);
}

TEST_CASE("full box has every cell interior") {
  Mesh mesh = Mesh::build(Domain::box({1.0, 1.0, 1.0}), 8, 1.0);
  CHECK(mesh.interior_count() == 512);
}

TEST_CASE("origin must lie inside the domain") {
  CHECK_THROWS_AS(Mesh::build(Domain::ball(3, 1.0, {2.0, 0.0, 0.0}), 16, 4.0), ValidationError);
}

TEST_CASE("domain exceeding the box is rejected") {
  CHECK_THROWS_AS(Mesh::build(Domain::ball(3, 1.5), 16, 1.25), ValidationError);
  CHECK_THROWS_AS(Mesh::build(Domain::ball(3, 1.0), 15, 1.25), ValidationError);  // odd N
  CHECK_THROWS_AS(Mesh::build(Domain::ball(3, 1.0), 6, 1.25), ValidationError);   // too coarse
}

TEST_CASE("no interior node sits within h/2 of the origin") {
  for (int N : {8, 12, 16}) {
    Mesh mesh = Mesh::build(Domain::ball(3, 1.0), N, 1.25);
    const double floor = mesh.spacing() / 2.0;
    for (std::size_t i = 0; i < mesh.interior_count(); ++i)
      CHECK(std::sqrt(mesh.radius_sq(i)) >= floor - 1e-15);
  }
}

TEST_CASE("interior index round trip is the identity") {
  Mesh mesh = Mesh::build(Domain::ball(3, 1.0), 12, 1.25);
  for (std::size_t i = 0; i < mesh.interior_count(); ++i) {
    std::size_t flat = mesh.box_index_of_interior(i);
    CHECK(mesh.interior_index_of_box(flat) == static_cast<std::int32_t>(i));
  }
  // index map covers exactly the interior
  std::size_t count = 0;
  for (std::size_t flat = 0; flat < mesh.box_count(); ++flat)
    if (mesh.interior_index_of_box(flat) >= 0) ++count;
  CHECK(count == mesh.interior_count());
}

TEST_CASE("sample_field and singular weights") {
  Mesh mesh = Mesh::build(Domain::ball(3, 1.0), 12, 1.25);
  FieldVector ones = sample_field([](std::span<const double>) { return 1.0; }, mesh);
  for (std::size_t i = 0; i < ones.size(); ++i) CHECK(ones[i] == 1.0);

  FieldVector r2 = sample_field(
      [](std::span<const double> x) {
        double s = 0;
        for (double xd : x) s += xd * xd;
        return s;
      },
      mesh);
  double mn = r2[0];
  for (std::size_t i = 0; i < r2.size(); ++i) mn = std::min(mn, r2[i]);
  CHECK(mn > 0.0);

  // |x|^{-2} peaks at the node nearest the origin (brute-force argmax)
  FieldVector w = sample_field(
      [](std::span<const double> x) {
        double s = 0;
        for (double xd : x) s += xd * xd;
        return 1.0 / s;
      },
      mesh);
  std::size_t argmax_w = 0, argmin_r = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] > w[argmax_w]) argmax_w = i;
    if (mesh.radius_sq(i) < mesh.radius_sq(argmin_r)) argmin_r = i;
  }
  CHECK(w[argmax_w] == w[argmin_r]);

  CHECK_THROWS_AS(
      sample_field([](std::span<const double>) { return std::nan(""); }, mesh), NumericalError);
}

TEST_CASE("midpoint quadrature") {
  Mesh box = Mesh::build(Domain::box({1.0, 1.0, 1.0}), 8, 1.0);
  FieldVector ones = sample_field([](std::span<const double>) { return 1.0; }, box);
  CHECK(integrate(ones, 1.0) == doctest::Approx(8.0).epsilon(1e-13));

  Mesh ball = Mesh::build(Domain::ball(3, 1.0), 20, 1.25);
  FieldVector ob = sample_field([](std::span<const double>) { return 1.0; }, ball);
  CHECK(integrate(ob, 1.0) == doctest::Approx(ball_volume(1.0)).epsilon(0.05));

  // homogeneity: integrate(c u, p) = |c|^p integrate(u, p)
  FieldVector u = sample_field(
      [](std::span<const double> x) { return x[0] - 0.3 * x[1]; }, box);
  FieldVector cu(box);
  for (std::size_t i = 0; i < u.size(); ++i) cu[i] = -2.5 * u[i];
  for (double p : {1.0, 2.0, 3.5}) {
    CHECK(integrate(cu, p) ==
          doctest::Approx(std::pow(2.5, p) * integrate(u, p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(integrate(u, 0.5), ValidationError);
}

TEST_CASE("ellipsoid domain") {
  Domain e = Domain::ellipsoid({1.0, 0.8, 0.6});
  Mesh mesh = Mesh::build(e, 12, 1.25);
  // volume of the ellipsoid: 4/3 pi abc
  const double vol = 4.0 / 3.0 * oracles::kPi * 1.0 * 0.8 * 0.6;
  FieldVector ones = sample_field([](std::span<const double>) { return 1.0; }, mesh);
  CHECK(integrate(ones, 1.0) == doctest::Approx(vol).epsilon(0.10));
  // boundary distance is a positive lower bound inside
  for (std::size_t i = 0; i < mesh.interior_count(); ++i)
    CHECK(mesh.boundary_distance(i) > 0.0);
}

TEST_CASE("four-dimensional mesh at tiny N") {
  Mesh mesh = Mesh::build(Domain::ball(4, 1.0), 8, 1.25);
  // 4-ball volume pi^2/2
  const double vol = oracles::kPi * oracles::kPi / 2.0;
  FieldVector ones = sample_field([](std::span<const double>) { return 1.0; }, mesh);
  CHECK(integrate(ones, 1.0) == doctest::Approx(vol).epsilon(0.15));
  const double floor = mesh.spacing() / 2.0;
  for (std::size_t i = 0; i < mesh.interior_count(); ++i)
    CHECK(std::sqrt(mesh.radius_sq(i)) >= floor - 1e-15);
}

TEST_CASE("quadrature refinement converges at first order or better") {
  // staircase phase makes the error non-monotone level to level; the O(h)
  // rate with a fixed constant is what refinement guarantees
  const double exact = ball_volume(1.0);
  for (int N : {12, 16, 24}) {
    Mesh mesh = Mesh::build(Domain::ball(3, 1.0), N, 1.25);
    FieldVector ones = sample_field([](std::span<const double>) { return 1.0; }, mesh);
    double err = std::fabs(integrate(ones, 1.0) - exact) / exact;
    CAPTURE(N);
    CHECK(err <= 0.3 * mesh.spacing());
    if (N == 24) CHECK(err < 0.05);
  }
}
