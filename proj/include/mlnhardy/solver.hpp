#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlnhardy/operators.hpp"

namespace mlnhardy {

struct SolveOptions {
  double tol = 1e-10;       // relative residual target
  int maxit = 0;            // 0 -> 20*sqrt(M)+500
  int threads = 0;
  const FieldVector* initial_guess = nullptr;
  const std::vector<double>* hardy_override = nullptr;  // e.g. regularized weight
  std::optional<double> extra_lp;  // record an additional ||u||_{L^p} in norms
  bool record_norms = true;
};

struct SolveReport {
  FieldVector solution;
  double residual_norm = 0;  // relative, recomputed after the iteration
  int iterations = 0;
  double gamma = 0;
  std::map<std::string, double> norms;  // L1, L2, rho_sq, hardy, optional Lp:<p>
  double min_value = 0, max_value = 0;
  double wall_time = 0;  // seconds
  std::map<std::string, double> parameters;  // numeric echo (tol, maxit, N, ...)
};

// Preconditioned conjugate gradients on A(gamma) = local + fractional - gamma*W
// with Jacobi preconditioning; fixed summation order, deterministic.
// Residual contract: || A u - f ||_2 <= tol * || f ||_2 (mass weighting scales
// both sides by h^n and cancels). Breakdown (non-positive curvature) raises
// SolverBreakdown; exceeding maxit raises NumericalError with the residual
// history tail.
SolveReport solve_linear(const OperatorSet& ops, double gamma, const FieldVector& rhs,
                         const SolveOptions& opts = {});

enum class EigenWeight { hardy, mass };

struct EigenResult {
  double lambda_min = 0;
  FieldVector eigvec;
  int iterations = 0;
};

// Smallest eigenvalue of A(0) v = lambda W v by inverse power iteration; each
// step is a solve_linear call warm-started from the previous iterate. For
// weight = hardy the diagonal is |x|^{-p} (p = 2 by default), for mass it is 1
// (the h^n factors cancel in the Rayleigh quotient).
EigenResult min_generalized_eigen(const OperatorSet& ops, EigenWeight weight, double tol,
                                  double p = 2.0, int maxit = 200);

}  // namespace mlnhardy
