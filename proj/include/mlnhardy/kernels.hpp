#pragma once

#include <cstddef>

namespace mlnhardy::kernels {

// Inner-loop arithmetic kernels. A scalar reference implementation is always
// available; on x86-64 an AVX2+FMA variant is selected at startup when the CPU
// supports it. The active backend is process-global and fixed for a run, so
// repeated runs on the same machine are bit-identical. Within a backend every
// reduction uses a fixed summation order independent of thread count.
enum class Backend { scalar, avx2 };

Backend active();
bool supported(Backend b);
void set_backend(Backend b);  // throws ValidationError if unsupported
const char* name(Backend b);

struct Ops {
  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha*x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[i] = x[i] + alpha*y[i]
  void (*aypx)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i w[i]*a[i]*b[i]
  double (*weighted_dot)(const double* w, const double* a, const double* b, std::size_t n);
  // sum_i |x[i]|^p  (p = 1 and p = 2 take the vector path, general p scalar pow)
  double (*power_sum)(const double* x, double p, std::size_t n);
  // out[j] = ( sum_d (xi[d]-xs[d][j])^2 )^{-q};  xs is one coordinate array per axis
  void (*inv_pow_dist)(const double* const* xs, std::size_t count, const double* xi, int dim,
                       double q, double* out);
};

const Ops& ops();            // active backend
const Ops& ops(Backend b);   // explicit backend (for equivalence tests)

inline double dot(const double* a, const double* b, std::size_t n) { return ops().dot(a, b, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) { ops().axpy(alpha, x, y, n); }
inline void aypx(double alpha, const double* x, double* y, std::size_t n) { ops().aypx(alpha, x, y, n); }
inline double weighted_dot(const double* w, const double* a, const double* b, std::size_t n) {
  return ops().weighted_dot(w, a, b, n);
}
inline double power_sum(const double* x, double p, std::size_t n) { return ops().power_sum(x, p, n); }
inline void inv_pow_dist(const double* const* xs, std::size_t count, const double* xi, int dim,
                         double q, double* out) {
  ops().inv_pow_dist(xs, count, xi, dim, q, out);
}

namespace detail {
extern const Ops scalar_ops;
#if defined(MLNHARDY_HAVE_AVX2)
extern const Ops avx2_ops;
#endif
}  // namespace detail

}  // namespace mlnhardy::kernels
