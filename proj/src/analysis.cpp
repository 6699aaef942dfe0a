#include "mlnhardy/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mlnhardy/errors.hpp"
#include "mlnhardy/special.hpp"

namespace mlnhardy {

double rayleigh_quotient(const OperatorSet& ops, const FieldVector& u) {
  const double H = hardy_functional(ops.mesh(), u, 2.0, ops.s());
  if (!(H > 0.0)) throw ValidationError("rayleigh_quotient: H(u) = 0");
  return rho_squared(ops, u) / H;
}

ScalingStudy scaling_study(const std::function<double(std::span<const double>)>& profile, int dim,
                           double s, std::span<const double> lambdas, const ScalingOptions& opts) {
  if (lambdas.size() < 4)
    throw ValidationError("scaling_study: need at least 4 lambda values");
  double lmin = lambdas[0], lmax = lambdas[0];
  for (double l : lambdas) {
    if (!(l >= 1.0)) throw ValidationError("scaling_study: lambdas must be >= 1");
    lmin = std::min(lmin, l);
    lmax = std::max(lmax, l);
  }
  if (!(lmax / lmin >= 8.0))
    throw ValidationError("scaling_study: lambda range must span a factor >= 8");

  const Domain base_domain = Domain::ball(dim, opts.domain_radius);
  Mesh base = Mesh::build(base_domain, opts.N, opts.box_halfwidth);
  AssemblyOptions aopts;
  aopts.threads = opts.threads;
  OperatorSet ops = assemble(base, s, aopts);
  FieldVector u = sample_field(profile, base);

  ScalingStudy st;
  st.grad_sq = local_part(ops, u);
  st.gagliardo_sq = gagliardo_seminorm_sq(ops, u);
  st.hardy = hardy_functional(base, u, 2.0, s);
  if (!(st.hardy > 0.0)) throw ValidationError("scaling_study: profile has H(u) = 0");
  const double C = ops.c_ns();
  st.q_loc = st.grad_sq / st.hardy;

  const double half_gag = 0.5 * C * st.gagliardo_sq / st.hardy;
  for (double l : lambdas) {
    const double gap = std::pow(l, 2.0 * s - 2.0) * half_gag;
    st.lambdas.push_back(l);
    st.gap.push_back(gap);
    st.q.push_back(st.q_loc + gap);
    if (gap < 1e-13)
      throw ValidationError("scaling_study: degenerate fit (gap below 1e-13); use smaller lambdas");
  }

  // resampled cross-check
  const double amp = 0.5 * (dim - 2.0);
  for (double l : lambdas) {
    auto rescaled = [&](std::span<const double> x) {
      std::vector<double> lx(x.size());
      for (std::size_t d = 0; d < x.size(); ++d) lx[d] = l * x[d];
      return std::pow(l, amp) * profile(lx);
    };
    double qr;
    if (opts.policy == ResamplePolicy::adapted) {
      Domain dom = Domain::ball(dim, opts.domain_radius / l);
      Mesh mesh = Mesh::build(dom, opts.N, opts.box_halfwidth / l);
      OperatorSet o2 = assemble(mesh, s, aopts);
      FieldVector ul = sample_field(rescaled, mesh);
      qr = rayleigh_quotient(o2, ul);
    } else {
      FieldVector ul = sample_field(rescaled, base);
      qr = rayleigh_quotient(ops, ul);
    }
    st.q_resampled.push_back(qr);
  }
  for (std::size_t k = 0; k < st.q.size(); ++k) {
    st.max_resample_dev =
        std::max(st.max_resample_dev, std::fabs(st.q_resampled[k] - st.q[k]) / st.q[k]);
  }

  // least-squares slope of log(gap) against log(lambda)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double npts = static_cast<double>(lambdas.size());
  for (std::size_t k = 0; k < st.lambdas.size(); ++k) {
    const double X = std::log(st.lambdas[k]);
    const double Y = std::log(st.gap[k]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  st.slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  return st;
}

std::vector<HardyEstimateRow> hardy_inf_estimate(std::span<const Domain> domains, double s,
                                                 std::span<const int> Ns, double box_halfwidth,
                                                 double tol) {
  std::vector<HardyEstimateRow> rows;
  for (const Domain& dom : domains) {
    for (int N : Ns) {
      Mesh mesh = Mesh::build(dom, N, box_halfwidth);
      OperatorSet ops = assemble(mesh, s);
      EigenResult eig = min_generalized_eigen(ops, EigenWeight::hardy, tol);
      rows.push_back({dom.describe(), N, eig.lambda_min, eig.iterations});
    }
  }
  return rows;
}

double mixed_hardy_p_probe(const OperatorSet& ops, double p, int num_probes, std::uint64_t seed) {
  const double s = ops.s();
  if (!(p >= 2.0 * s && p <= 2.0))
    throw ValidationError("mixed_hardy_p_probe: p must lie in [2s, 2]");
  const Mesh& mesh = ops.mesh();
  const int n = mesh.dim();

  auto quotient = [&](const FieldVector& u) {
    const double Hp = hardy_functional(mesh, u, p, s);
    return rho_squared(ops, u) / Hp;
  };

  EigenResult eig = min_generalized_eigen(ops, EigenWeight::hardy, 1e-9, p);
  double best = quotient(eig.eigvec);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> width(0.1, 0.3);
  const double R = mesh.domain().halfwidths[0];
  for (int k = 0; k < num_probes; ++k) {
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) c[static_cast<std::size_t>(d)] = 0.4 * R * unit(rng);
    const double sig = width(rng) * R;
    FieldVector u = sample_field(
        [&](std::span<const double> x) {
          double r2 = 0.0;
          for (std::size_t d = 0; d < x.size(); ++d) {
            const double t = x[d] - c[d];
            r2 += t * t;
          }
          return std::exp(-r2 / (2.0 * sig * sig));
        },
        mesh);
    best = std::min(best, quotient(u));
  }
  if (!(best > 0.0))
    throw NumericalError("mixed_hardy_p_probe: nonpositive quotient observed");
  return best;
}

SweepResult integrability_sweep(const OperatorSet& ops, double m, const FieldVector& f,
                                std::span<const double> gammas, double solver_tol) {
  const int n = ops.n();
  special::ExponentTable tab = special::exponent_table(n, ops.s(), m);
  if (!(m > tab.two_star_conj && 2.0 * m < n)) {
    std::ostringstream os;
    os << "integrability_sweep: m=" << m << " must lie in ((2*)'=" << tab.two_star_conj
       << ", n/2=" << 0.5 * n << ")";
    throw ValidationError(os.str());
  }
  const double gm = *tab.gamma_m;
  for (double g : gammas) {
    if (!(g < gm)) {
      std::ostringstream os;
      os << "integrability_sweep: gamma=" << g << " is not below the threshold γ(m)=" << gm;
      throw ValidationError(os.str());
    }
  }

  SweepResult out;
  out.m = m;
  out.gamma_m = gm;
  out.m_double_star = *tab.m_double_star;
  out.f_norm_m = lp_norm(f, m);

  SolveOptions sopt;
  sopt.tol = solver_tol;
  sopt.record_norms = false;
  for (double g : gammas) {
    SolveReport rep = solve_linear(ops, g, f, sopt);
    SweepRow row;
    row.gamma = g;
    row.u_norm_mss = lp_norm(rep.solution, out.m_double_star);
    row.bound_ratio = (gm - g) * row.u_norm_mss / out.f_norm_m;
    row.iterations = rep.iterations;
    out.rows.push_back(row);
  }
  return out;
}

double ground_state_inequality_check(const FieldVector& u, const FieldVector& phi, long num_pairs,
                                     std::uint64_t seed) {
  if (u.size() != phi.size()) throw ValidationError("ground_state_inequality_check: size mismatch");
  const std::size_t M = u.size();
  for (std::size_t i = 0; i < M; ++i)
    if (!(u[i] > 0.0))
      throw ValidationError("ground_state_inequality_check: u must be positive at every node");

  std::vector<double> psi(M);
  for (std::size_t i = 0; i < M; ++i) psi[i] = phi[i] * phi[i] / u[i];

  auto violation = [&](std::size_t i, std::size_t j) {
    const double lhs = (u[i] - u[j]) * (psi[i] - psi[j]);
    const double dphi = phi[i] - phi[j];
    return lhs - dphi * dphi;
  };

  double worst = -std::numeric_limits<double>::infinity();
  const long all = static_cast<long>(M) * static_cast<long>(M - 1) / 2;
  if (num_pairs <= 0 || num_pairs >= all) {
    for (std::size_t i = 0; i < M; ++i)
      for (std::size_t j = i + 1; j < M; ++j) worst = std::max(worst, violation(i, j));
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, M - 1);
    for (long k = 0; k < num_pairs; ++k) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i == j) continue;
      worst = std::max(worst, violation(i, j));
    }
  }
  return worst;
}

double power_inequality_check(double a, long num_samples, std::uint64_t seed) {
  if (!(a > 0.0)) throw ValidationError("power_inequality_check: a must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  const double coeff = 4.0 * a / ((a + 1.0) * (a + 1.0));
  const double half = 0.5 * (a + 1.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (long k = 0; k < num_samples; ++k) {
    const double s1 = dist(rng), s2 = dist(rng);
    const double lhs = (s1 - s2) * (std::pow(s1, a) - std::pow(s2, a));
    const double d = std::pow(s1, half) - std::pow(s2, half);
    worst = std::max(worst, coeff * d * d - lhs);
  }
  return worst;
}

}  // namespace mlnhardy
