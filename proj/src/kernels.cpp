#include "mlnhardy/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "mlnhardy/errors.hpp"

namespace mlnhardy::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void aypx_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + alpha * y[i];
}

double weighted_dot_scalar(const double* w, const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

double power_sum_scalar(const double* x, double p, std::size_t n) {
  double s = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  } else if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::fabs(x[i]), p);
  }
  return s;
}

void inv_pow_dist_scalar(const double* const* xs, std::size_t count, const double* xi, int dim,
                         double q, double* out) {
  for (std::size_t j = 0; j < count; ++j) {
    double d2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      double t = xi[d] - xs[d][j];
      d2 += t * t;
    }
    out[j] = d2;
  }
  for (std::size_t j = 0; j < count; ++j) out[j] = std::pow(out[j], -q);
}

}  // namespace

namespace detail {
const Ops scalar_ops = {dot_scalar, axpy_scalar, aypx_scalar, weighted_dot_scalar,
                        power_sum_scalar, inv_pow_dist_scalar};
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(MLNHARDY_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("MLNHARDY_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{initial_backend()};

}  // namespace

Backend active() { return g_backend.load(std::memory_order_relaxed); }

bool supported(Backend b) {
  switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2: return cpu_has_avx2();
  }
  return false;
}

void set_backend(Backend b) {
  if (!supported(b)) throw ValidationError("kernel backend not supported on this CPU");
  g_backend.store(b, std::memory_order_relaxed);
}

const char* name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "?";
}

const Ops& ops(Backend b) {
#if defined(MLNHARDY_HAVE_AVX2)
  if (b == Backend::avx2) return detail::avx2_ops;
#endif
  (void)b;
  return detail::scalar_ops;
}

const Ops& ops() { return ops(active()); }

}  // namespace mlnhardy::kernels
