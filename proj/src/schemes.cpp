#include "mlnhardy/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mlnhardy/errors.hpp"
#include "mlnhardy/kernels.hpp"
#include "mlnhardy/special.hpp"

namespace mlnhardy {

double schedule_value(Schedule sched, double f, int k) {
  switch (sched) {
    case Schedule::truncation: return special::truncate(f, k);
    case Schedule::truncation_squared: return special::truncate(f, static_cast<double>(k) * k);
    case Schedule::scaled: return (1.0 - 1.0 / k) * f;
  }
  return f;
}

std::string schedule_name(Schedule sched) {
  switch (sched) {
    case Schedule::truncation: return "truncation";
    case Schedule::truncation_squared: return "truncation-squared";
    case Schedule::scaled: return "scaled";
  }
  return "?";
}

namespace {

double rel_l2_distance(const FieldVector& a, const FieldVector& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    num += d * d;
    den += b[i] * b[i];
  }
  return std::sqrt(num) / std::sqrt(den > 0 ? den : 1.0);
}

double mass_dot(const Mesh& mesh, const FieldVector& a, const FieldVector& b) {
  return mesh.cell_volume() * kernels::dot(a.data(), b.data(), a.size());
}

}  // namespace

IterationTrace monotone_iteration(const OperatorSet& ops, double gamma, const FieldVector& f,
                                  int K, const SchemeOptions& opts) {
  if (!f.has_mesh() || &f.mesh() != &ops.mesh())
    throw ValidationError("monotone_iteration: f lives on a different mesh");
  if (K < 2) throw ValidationError("monotone_iteration: K must be >= 2");
  if (!(gamma >= 0.0)) throw ValidationError("monotone_iteration: gamma must be >= 0");
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] < 0.0) throw ValidationError("monotone_iteration: f must be nonnegative");

  const Mesh& mesh = ops.mesh();
  const std::size_t M = mesh.interior_count();

  IterationTrace trace;
  FieldVector phi(mesh);  // phi_0 = 0
  if (opts.keep_iterates) trace.iterates.push_back(phi);

  SolveOptions sopt;
  sopt.tol = opts.solver_tol;
  sopt.threads = opts.threads;
  sopt.record_norms = false;

  FieldVector rhs(mesh);
  for (int k = 1; k <= K; ++k) {
    const double eps = 1.0 / k;
    for (std::size_t i = 0; i < M; ++i) {
      rhs[i] = gamma * phi[i] / (mesh.radius_sq(i) + eps) + schedule_value(opts.schedule, f[i], k);
    }
    sopt.initial_guess = &phi;
    SolveReport step;
    try {
      step = solve_linear(ops, 0.0, rhs, sopt);
    } catch (const NumericalError& e) {
      throw NumericalError("monotone_iteration: step k=" + std::to_string(k) + ": " + e.what());
    }

    IterationStep rec;
    rec.k = k;
    double defect = 0.0, mn = step.solution[0];
    for (std::size_t i = 0; i < M; ++i) {
      defect = std::max(defect, phi[i] - step.solution[i]);
      mn = std::min(mn, step.solution[i]);
    }
    rec.monotonicity_defect = std::max(defect, 0.0);
    rec.min_value = mn;
    phi = std::move(step.solution);
    rec.l1 = lp_norm(phi, 1.0);
    rec.l2 = lp_norm(phi, 2.0);
    rec.rho_sq = rho_squared(ops, phi);
    rec.hardy = hardy_functional(mesh, phi, 2.0, ops.s());
    trace.steps.push_back(rec);
    if (opts.keep_iterates) trace.iterates.push_back(phi);
  }

  trace.limit = phi;

  // direct solve of the level-K problem: regularized weight at K, datum at K
  std::vector<double> wK = assemble_hardy(mesh, static_cast<double>(K));
  FieldVector fK(mesh);
  for (std::size_t i = 0; i < M; ++i) fK[i] = schedule_value(opts.schedule, f[i], K);
  SolveOptions dopt;
  dopt.tol = opts.solver_tol;
  dopt.threads = opts.threads;
  dopt.record_norms = false;
  dopt.hardy_override = &wK;
  SolveReport direct_reg = solve_linear(ops, gamma, fK, dopt);
  trace.final_distance = rel_l2_distance(phi, direct_reg.solution);

  SolveOptions uopt = dopt;
  uopt.hardy_override = nullptr;
  SolveReport direct_plain = solve_linear(ops, gamma, f, uopt);
  trace.final_distance_unregularized = rel_l2_distance(phi, direct_plain.solution);
  return trace;
}

double duality_verify(const OperatorSet& ops, const FieldVector& u, const FieldVector& f,
                      double gamma, std::span<const FieldVector> probes, double solver_tol) {
  const Mesh& mesh = ops.mesh();
  if (!u.has_mesh() || &u.mesh() != &mesh || !f.has_mesh() || &f.mesh() != &mesh)
    throw ValidationError("duality_verify: fields live on a different mesh");

  FieldVector u_weighted(mesh);
  for (std::size_t i = 0; i < mesh.interior_count(); ++i)
    u_weighted[i] = u[i] * ops.hardy_diag()[i];

  SolveOptions sopt;
  sopt.tol = solver_tol;
  sopt.record_norms = false;

  double max_defect = 0.0;
  for (const FieldVector& g : probes) {
    SolveReport wrep = solve_linear(ops, 0.0, g, sopt);
    const FieldVector& w = wrep.solution;
    const double gu = mass_dot(mesh, g, u);
    const double hardy_term = gamma * mass_dot(mesh, u_weighted, w);
    const double fw = mass_dot(mesh, f, w);
    const double defect = std::fabs(gu - hardy_term - fw) / std::max(1.0, std::fabs(gu));
    max_defect = std::max(max_defect, defect);
  }
  return max_defect;
}

std::vector<FieldVector> random_bounded_probes(const Mesh& mesh, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<FieldVector> probes;
  probes.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    FieldVector g(mesh);
    for (std::size_t i = 0; i < mesh.interior_count(); ++i) g[i] = dist(rng);
    probes.push_back(std::move(g));
  }
  return probes;
}

SolveReport compute_phi_omega(const OperatorSet& ops, double gamma, double solver_tol) {
  const Mesh& mesh = ops.mesh();
  FieldVector one(mesh);
  for (std::size_t i = 0; i < mesh.interior_count(); ++i) one[i] = 1.0;
  SolveOptions sopt;
  sopt.tol = solver_tol;
  SolveReport rep = solve_linear(ops, gamma, one, sopt);
  if (rep.min_value < -1e-10)
    throw NumericalError("compute_phi_omega: negative values (min " +
                         std::to_string(rep.min_value) + "); positivity lost");
  const double depth = 2.0 * mesh.spacing();
  double interior_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.interior_count(); ++i)
    if (mesh.boundary_distance(i) >= depth)
      interior_min = std::min(interior_min, rep.solution[i]);
  if (!(interior_min > 0.0))
    throw NumericalError("compute_phi_omega: interior positivity failed");
  return rep;
}

SolvabilityProbe solvability_probe(const Domain& domain, double box_halfwidth, double s,
                                   double gamma, double beta, std::span<const int> ladder,
                                   double solver_tol) {
  if (ladder.size() < 3)
    throw ValidationError("solvability_probe: mesh ladder must have at least 3 levels");
  if (!(beta >= 0.0)) throw ValidationError("solvability_probe: beta must be >= 0");

  SolvabilityProbe out;
  for (int N : ladder) {
    Mesh mesh = Mesh::build(domain, N, box_halfwidth);
    OperatorSet ops = assemble(mesh, s);
    SolveReport phi = compute_phi_omega(ops, gamma, solver_tol);
    FieldVector f = sample_field(
        [beta](std::span<const double> x) {
          double r2 = 0.0;
          for (double xd : x) r2 += xd * xd;
          return std::pow(r2, -0.5 * beta);
        },
        mesh);
    out.ladder.push_back(N);
    out.integrals.push_back(mass_dot(mesh, f, phi.solution));
  }
  for (std::size_t k = 0; k + 1 < out.integrals.size(); ++k)
    out.ratios.push_back(out.integrals[k + 1] / out.integrals[k]);
  const std::size_t R = out.ratios.size();
  const bool divergent = out.ratios[R - 1] >= 1.05 && out.ratios[R - 2] >= 1.05;
  out.verdict = divergent ? "divergent-trend" : "finite-trend";
  return out;
}

double sola_uniqueness_check(const OperatorSet& ops, double gamma, const FieldVector& f,
                             Schedule schedule_a, Schedule schedule_b, int K, double m,
                             double solver_tol) {
  const int n = ops.n();
  special::ExponentTable tab = special::exponent_table(n, ops.s(), m);
  if (!tab.m_double_star)
    throw ValidationError("sola_uniqueness_check: m must lie in (1, n/2) so that m** is defined");
  const double mss = *tab.m_double_star;

  SchemeOptions opts;
  opts.solver_tol = solver_tol;
  opts.keep_iterates = false;
  opts.schedule = schedule_a;
  IterationTrace ta = monotone_iteration(ops, gamma, f, K, opts);
  opts.schedule = schedule_b;
  IterationTrace tb = monotone_iteration(ops, gamma, f, K, opts);

  FieldVector diff(ops.mesh());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = ta.limit[i] - tb.limit[i];
  const double denom = lp_norm(ta.limit, mss);
  return lp_norm(diff, mss) / (denom > 0 ? denom : 1.0);
}

L1CaseBounds l1_case_bounds(const OperatorSet& ops, double gamma, const FieldVector& f, int K,
                            std::span<const double> k_levels, double p,
                            const SchemeOptions& opts) {
  const int n = ops.n();
  const double threshold = static_cast<double>(n) / (n - 1.0);
  if (!(p < threshold)) {
    std::ostringstream os;
    os << "l1_case_bounds: p=" << p << " violates p < n/(n-1) = " << threshold;
    throw ValidationError(os.str());
  }
  SchemeOptions o = opts;
  o.keep_iterates = true;
  IterationTrace trace = monotone_iteration(ops, gamma, f, K, o);

  L1CaseBounds out;
  for (std::size_t j = 1; j < trace.iterates.size(); ++j) {
    out.grad_lp_norms.emplace_back(static_cast<int>(j), grad_lp_norm(trace.iterates[j], p));
  }
  const FieldVector& u = trace.iterates.back();
  for (double k : k_levels) {
    FieldVector tk(ops.mesh());
    for (std::size_t i = 0; i < u.size(); ++i) tk[i] = special::truncate(u[i], k);
    out.tk_energies.emplace_back(k, rho_squared(ops, tk));
  }
  return out;
}

}  // namespace mlnhardy
