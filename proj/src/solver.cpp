#include "mlnhardy/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "mlnhardy/errors.hpp"
#include "mlnhardy/kernels.hpp"

namespace mlnhardy {

namespace {

double l2(const double* x, std::size_t n) { return std::sqrt(kernels::dot(x, x, n)); }

void record_norms(SolveReport& rep, const OperatorSet& ops, const SolveOptions& opts) {
  const FieldVector& u = rep.solution;
  rep.norms["L1"] = lp_norm(u, 1.0);
  rep.norms["L2"] = lp_norm(u, 2.0);
  rep.norms["rho_sq"] = rho_squared(ops, u);
  rep.norms["hardy"] = hardy_functional(ops.mesh(), u, 2.0, ops.s());
  if (opts.extra_lp) {
    std::ostringstream key;
    key << "L" << *opts.extra_lp;
    rep.norms[key.str()] = lp_norm(u, *opts.extra_lp);
  }
}

}  // namespace

SolveReport solve_linear(const OperatorSet& ops, double gamma, const FieldVector& rhs,
                         const SolveOptions& opts) {
  if (!rhs.has_mesh() || &rhs.mesh() != &ops.mesh())
    throw ValidationError("solve_linear: rhs lives on a different mesh");
  if (!(gamma >= 0.0)) throw ValidationError("solve_linear: gamma must be >= 0");
  for (std::size_t i = 0; i < rhs.size(); ++i)
    if (!std::isfinite(rhs[i])) throw ValidationError("solve_linear: rhs has non-finite entries");

  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t M = ops.size();
  const int maxit = opts.maxit > 0
                        ? opts.maxit
                        : static_cast<int>(20.0 * std::sqrt(static_cast<double>(M)) + 500.0);
  const double* w = opts.hardy_override ? opts.hardy_override->data() : nullptr;

  SolveReport rep;
  rep.gamma = gamma;
  rep.solution = opts.initial_guess ? *opts.initial_guess : FieldVector(ops.mesh());
  double* x = rep.solution.data();

  std::vector<double> diag = ops.diagonal(gamma, w);
  for (double d : diag)
    if (!(d > 0.0))
      throw SolverBreakdown("solve_linear: non-positive diagonal; form not coercive at this gamma/mesh");

  std::vector<double> r(M), z(M), p(M), ap(M);
  ops.apply(gamma, x, ap.data(), opts.threads, w);
  for (std::size_t i = 0; i < M; ++i) r[i] = rhs[i] - ap[i];
  const double bnorm = l2(rhs.data(), M);
  const double target = opts.tol * (bnorm > 0.0 ? bnorm : 1.0);

  std::vector<double> history;
  double rz = 0.0;
  int it = 0;
  double rnorm = l2(r.data(), M);
  if (rnorm > target) {
    for (std::size_t i = 0; i < M; ++i) z[i] = r[i] / diag[i];
    p = z;
    rz = kernels::dot(r.data(), z.data(), M);
    for (it = 1; it <= maxit; ++it) {
      ops.apply(gamma, p.data(), ap.data(), opts.threads, w);
      const double pap = kernels::dot(p.data(), ap.data(), M);
      if (!(pap > 0.0)) {
        std::ostringstream os;
        os << "solve_linear: breakdown at iteration " << it
           << " (p^T A p = " << pap << "); form not coercive at this gamma/mesh (gamma=" << gamma
           << ")";
        throw SolverBreakdown(os.str());
      }
      const double alpha = rz / pap;
      kernels::axpy(alpha, p.data(), x, M);
      kernels::axpy(-alpha, ap.data(), r.data(), M);
      rnorm = l2(r.data(), M);
      history.push_back(rnorm);
      if (rnorm <= target) break;
      for (std::size_t i = 0; i < M; ++i) z[i] = r[i] / diag[i];
      const double rz_new = kernels::dot(r.data(), z.data(), M);
      kernels::aypx(rz_new / rz, z.data(), p.data(), M);
      rz = rz_new;
    }
    if (rnorm > target) {
      std::ostringstream os;
      os << "solve_linear: maxit=" << maxit << " exceeded, relative residual "
         << rnorm / (bnorm > 0 ? bnorm : 1.0) << "; history tail:";
      const std::size_t tail = history.size() > 8 ? history.size() - 8 : 0;
      for (std::size_t k = tail; k < history.size(); ++k) os << ' ' << history[k];
      throw NumericalError(os.str());
    }
  }

  // independent residual recomputation
  ops.apply(gamma, x, ap.data(), opts.threads, w);
  for (std::size_t i = 0; i < M; ++i) ap[i] -= rhs[i];
  rep.residual_norm = l2(ap.data(), M) / (bnorm > 0.0 ? bnorm : 1.0);
  rep.iterations = it;

  rep.min_value = rep.max_value = M ? x[0] : 0.0;
  for (std::size_t i = 1; i < M; ++i) {
    rep.min_value = std::min(rep.min_value, x[i]);
    rep.max_value = std::max(rep.max_value, x[i]);
  }
  if (opts.record_norms) record_norms(rep, ops, opts);
  rep.parameters["tol"] = opts.tol;
  rep.parameters["maxit"] = maxit;
  rep.parameters["interior_count"] = static_cast<double>(M);
  rep.parameters["n"] = ops.n();
  rep.parameters["s"] = ops.s();
  rep.parameters["N"] = ops.mesh().per_axis();
  rep.parameters["assembly_time"] = ops.assembly_time();
  rep.parameters["fractional_bytes"] = static_cast<double>(ops.dense_bytes());
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

EigenResult min_generalized_eigen(const OperatorSet& ops, EigenWeight weight, double tol, double p,
                                  int maxit) {
  const std::size_t M = ops.size();
  std::vector<double> w(M, 1.0);
  if (weight == EigenWeight::hardy) {
    for (std::size_t i = 0; i < M; ++i) w[i] = std::pow(ops.mesh().radius_sq(i), -0.5 * p);
  }

  FieldVector v(ops.mesh());
  for (std::size_t i = 0; i < M; ++i) v[i] = 1.0;
  double nv = l2(v.data(), M);
  for (std::size_t i = 0; i < M; ++i) v[i] /= nv;

  SolveOptions sopt;
  sopt.tol = std::min(1e-11, tol * 1e-2);
  sopt.record_norms = false;

  auto rayleigh = [&](const FieldVector& u) {
    std::vector<double> au(M);
    ops.apply(0.0, u.data(), au.data());
    double num = kernels::dot(u.data(), au.data(), M);
    double den = kernels::weighted_dot(w.data(), u.data(), u.data(), M);
    return num / den;
  };

  double lambda = rayleigh(v);
  FieldVector z = v;
  int it = 0;
  for (it = 1; it <= maxit; ++it) {
    FieldVector rhs(ops.mesh());
    for (std::size_t i = 0; i < M; ++i) rhs[i] = w[i] * v[i];
    sopt.initial_guess = &z;
    SolveReport step = solve_linear(ops, 0.0, rhs, sopt);
    z = step.solution;
    double nz = l2(z.data(), M);
    if (!(nz > 0.0)) throw NumericalError("min_generalized_eigen: zero iterate");
    for (std::size_t i = 0; i < M; ++i) v[i] = z[i] / nz;
    const double lambda_new = rayleigh(v);
    const bool done = std::fabs(lambda_new - lambda) <= tol * std::fabs(lambda_new);
    lambda = lambda_new;
    if (done) break;
  }
  if (it > maxit) throw NumericalError("min_generalized_eigen: no convergence within maxit");

  // deterministic sign: largest-magnitude component positive
  std::size_t arg = 0;
  for (std::size_t i = 1; i < M; ++i)
    if (std::fabs(v[i]) > std::fabs(v[arg])) arg = i;
  if (v[arg] < 0.0)
    for (std::size_t i = 0; i < M; ++i) v[i] = -v[i];

  EigenResult res;
  res.lambda_min = lambda;
  res.eigvec = std::move(v);
  res.iterations = it;
  return res;
}

}  // namespace mlnhardy
