#pragma once

#include <optional>

namespace mlnhardy::special {

// Gamma function on the real line, Lanczos approximation with reflection for
// x < 0.5. Relative accuracy ~1e-13 on [-2, 20] away from the poles; poles
// (non-positive integers) raise a domain error. Intended range [-5, 50].
double gamma_fn(double x);

// Surface measure of the unit sphere S^{n-1}: 2 pi^{n/2} / Gamma(n/2).
double sphere_surface(int n);

// Best constant of the local Hardy inequality: (n-2)^2 / 4.
double hardy_constant(int n);

// Normalization constant of the fractional Laplacian:
//   C_{n,s} = 2^{2s} pi^{-n/2} Gamma((n+2s)/2) / |Gamma(-s)|.
double normalization_constant(int n, double s);

// Clamp of t to [-k, k].
double truncate(double t, double k);

// All scalar exponents for a given (n, s, m). Fields whose defining formula
// requires m in a narrower range than (1, inf) are carried as empty optionals
// rather than sentinel numbers.
struct ExponentTable {
  int n = 0;
  double s = 0;
  double m = 0;

  double lambda_n = 0;       // (n-2)^2/4
  double c_ns = 0;           // C_{n,s}
  double two_star = 0;       // 2n/(n-2)
  double two_star_conj = 0;  // 2n/(n+2)

  std::optional<double> m_conj;           // m/(m-1),        m > 1
  std::optional<double> m_star;           // nm/(n-m),       m < n
  std::optional<double> m_double_star;    // nm/(n-2m),      m < n/2
  std::optional<double> m_star_s;         // nm/(n-ms),      ms < n
  std::optional<double> m_double_star_s;  // nm/(n-2ms),     2ms < n
  std::optional<double> alpha;            // m(n-2)/(n-2m),  m < n/2
  std::optional<double> gamma_m;          // n(m-1)(n-2m)/m^2, 1 < m < n/2
};

ExponentTable exponent_table(int n, double s, double m);

}  // namespace mlnhardy::special
