#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mlnhardy/kernels.hpp"
#include "mlnhardy/solver.hpp"

namespace k = mlnhardy::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

// Every available backend must agree with the scalar reference up to
// reassociation-level rounding.
TEST_CASE("backend equivalence on all kernels") {
  const auto& ref = k::ops(k::Backend::scalar);
  std::vector<k::Backend> backends{k::Backend::scalar};
  if (k::supported(k::Backend::avx2)) backends.push_back(k::Backend::avx2);

  for (std::size_t n : {1ul, 5ul, 64ul, 1003ul}) {
    auto a = random_vec(n, 100 + n), b = random_vec(n, 200 + n), w = random_vec(n, 300 + n);
    for (k::Backend be : backends) {
      const auto& o = k::ops(be);
      CAPTURE(k::name(be));
      CAPTURE(n);

      CHECK(o.dot(a.data(), b.data(), n) ==
            doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(1e-12));
      CHECK(o.weighted_dot(w.data(), a.data(), b.data(), n) ==
            doctest::Approx(ref.weighted_dot(w.data(), a.data(), b.data(), n)).epsilon(1e-12));
      for (double p : {1.0, 2.0, 1.4, 9.75}) {
        CHECK(o.power_sum(a.data(), p, n) ==
              doctest::Approx(ref.power_sum(a.data(), p, n)).epsilon(1e-12));
      }

      auto y1 = b, y2 = b;
      ref.axpy(0.37, a.data(), y1.data(), n);
      o.axpy(0.37, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-13));

      y1 = b;
      y2 = b;
      ref.aypx(-1.21, a.data(), y1.data(), n);
      o.aypx(-1.21, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("inv_pow_dist equivalence and symmetry") {
  const std::size_t count = 257;
  auto xs0 = random_vec(count, 1), xs1 = random_vec(count, 2), xs2 = random_vec(count, 3);
  const double* xs[3] = {xs0.data(), xs1.data(), xs2.data()};
  const double xi[3] = {0.1, -0.2, 0.05};
  const double q = 2.0;  // (n + 2s)/2 with n = 3, s = 0.5

  std::vector<double> out_ref(count), out(count);
  k::ops(k::Backend::scalar).inv_pow_dist(xs, count, xi, 3, q, out_ref.data());
  for (std::size_t j = 0; j < count; ++j) {
    double d2 = 0;
    for (int d = 0; d < 3; ++d) {
      double t = xi[d] - xs[d][j];
      d2 += t * t;
    }
    CHECK(out_ref[j] == doctest::Approx(std::pow(d2, -q)).epsilon(1e-13));
  }
  if (k::supported(k::Backend::avx2)) {
    k::ops(k::Backend::avx2).inv_pow_dist(xs, count, xi, 3, q, out.data());
    for (std::size_t j = 0; j < count; ++j)
      CHECK(out[j] == doctest::Approx(out_ref[j]).epsilon(1e-12));
  }
}

TEST_CASE("deterministic across repeated calls") {
  const std::size_t n = 1000;
  auto a = random_vec(n, 5), b = random_vec(n, 6);
  const double d1 = k::dot(a.data(), b.data(), n);
  const double d2 = k::dot(a.data(), b.data(), n);
  CHECK(d1 == d2);  // bitwise
}

// End-to-end backend equivalence: assemble and solve the same problem under
// each backend; solutions agree to reassociation-level rounding.
TEST_CASE("backends agree through a full assemble-and-solve") {
  using namespace mlnhardy;
  if (!k::supported(k::Backend::avx2)) return;
  const k::Backend saved = k::active();

  auto run = [](k::Backend be) {
    k::set_backend(be);
    Mesh mesh = Mesh::build(Domain::ball(3, 1.0), 10, 1.25);
    OperatorSet ops = assemble(mesh, 0.5);
    FieldVector f = sample_field(
        [](std::span<const double> x) { return 1.0 + 0.25 * x[0]; }, mesh);
    SolveOptions sopt;
    sopt.tol = 1e-12;
    return solve_linear(ops, 0.15, f, sopt);
  };
  SolveReport scalar = run(k::Backend::scalar);
  SolveReport avx2 = run(k::Backend::avx2);
  k::set_backend(saved);

  REQUIRE(scalar.solution.size() == avx2.solution.size());
  double sup = 0;
  for (std::size_t i = 0; i < scalar.solution.size(); ++i)
    sup = std::max(sup, std::fabs(scalar.solution[i] - avx2.solution[i]));
  CHECK(sup <= 1e-10 * std::max(1.0, scalar.max_value));
}
