#include "mlnhardy/special.hpp"

#include <cmath>
#include <string>

#include "mlnhardy/errors.hpp"

namespace mlnhardy::special {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Lanczos coefficients, g = 7, 9 terms.
constexpr double kLanczos[9] = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double x) {
  // valid for x >= 0.5
  x -= 1.0;
  double a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  double t = x + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw ValidationError("gamma_fn: non-finite argument");
  if (is_pole(x)) {
    throw ValidationError("gamma_fn: pole at x = " + std::to_string(x));
  }
  if (x < 0.5) {
    // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
    return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
  }
  return lanczos_gamma(x);
}

double sphere_surface(int n) {
  if (n < 1) throw ValidationError("sphere_surface: n must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * n) / gamma_fn(0.5 * n);
}

double hardy_constant(int n) {
  if (n < 3) throw ValidationError("hardy_constant: n must be >= 3");
  double d = n - 2;
  return d * d / 4.0;
}

double normalization_constant(int n, double s) {
  if (n < 3) throw ValidationError("normalization_constant: n must be >= 3");
  if (!(s > 0.0 && s < 1.0)) {
    throw ValidationError("normalization_constant: s must lie in (0,1)");
  }
  return std::pow(2.0, 2.0 * s) * std::pow(kPi, -0.5 * n) * gamma_fn(0.5 * (n + 2.0 * s)) /
         std::fabs(gamma_fn(-s));
}

double truncate(double t, double k) {
  if (!(k > 0.0)) throw ValidationError("truncate: level k must be positive");
  return std::max(std::min(k, t), -k);
}

ExponentTable exponent_table(int n, double s, double m) {
  if (n < 3) throw ValidationError("exponent_table: n must be >= 3");
  if (!(s > 0.0 && s < 1.0)) throw ValidationError("exponent_table: s must lie in (0,1)");
  if (!(m > 1.0)) throw ValidationError("exponent_table: m must be > 1");

  ExponentTable t;
  t.n = n;
  t.s = s;
  t.m = m;
  t.lambda_n = hardy_constant(n);
  t.c_ns = normalization_constant(n, s);
  t.two_star = 2.0 * n / (n - 2.0);
  t.two_star_conj = 2.0 * n / (n + 2.0);

  t.m_conj = m / (m - 1.0);
  if (m < n) t.m_star = n * m / (n - m);
  if (2.0 * m < n) {
    t.m_double_star = n * m / (n - 2.0 * m);
    t.alpha = m * (n - 2.0) / (n - 2.0 * m);
    t.gamma_m = n * (m - 1.0) * (n - 2.0 * m) / (m * m);
  }
  if (m * s < n) t.m_star_s = n * m / (n - m * s);
  if (2.0 * m * s < n) t.m_double_star_s = n * m / (n - 2.0 * m * s);
  return t;
}

}  // namespace mlnhardy::special
