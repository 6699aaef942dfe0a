// mlnhardy: batch driver for the mixed local-nonlocal Hardy experiments.
//
//   mlnhardy <command> --config <path> [--output <dir>] [--threads <k>]
//
// Commands: solve, iterate, constant, scaling, probe-solvability, sweep, verify.
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

#include "mlnhardy/analysis.hpp"
#include "mlnhardy/errors.hpp"
#include "mlnhardy/io.hpp"
#include "mlnhardy/kernels.hpp"
#include "mlnhardy/parallel.hpp"
#include "mlnhardy/schemes.hpp"
#include "mlnhardy/special.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mlnhardy;

namespace {

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config file not found: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw ValidationError("config must be a JSON object");
  return cfg;
}

template <typename T>
T require(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ValidationError("missing field: " + key);
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("field has wrong type: " + key);
  }
}

template <typename T>
T get_or(json& resolved, const std::string& key, T def) {
  if (!resolved.contains(key)) resolved[key] = def;
  try {
    return resolved.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("field has wrong type: " + key);
  }
}

Domain parse_domain(const json& cfg, int n) {
  if (!cfg.contains("domain")) throw ValidationError("missing field: domain");
  const json& d = cfg.at("domain");
  std::string kind = require<std::string>(d, "kind");
  std::vector<double> center;
  if (d.contains("center")) center = d.at("center").get<std::vector<double>>();
  if (kind == "ball") return Domain::ball(n, require<double>(d, "radius"), center);
  if (kind == "box") {
    auto hw = d.contains("halfwidth")
                  ? std::vector<double>(static_cast<std::size_t>(n), d.at("halfwidth").get<double>())
                  : require<std::vector<double>>(d, "halfwidths");
    return Domain::box(hw, center);
  }
  if (kind == "ellipsoid") return Domain::ellipsoid(require<std::vector<double>>(d, "semiaxes"), center);
  throw ValidationError("domain.kind must be ball, box or ellipsoid");
}

std::function<double(std::span<const double>)> parse_f(const json& cfg, const Mesh* mesh,
                                                       FieldVector* custom_out) {
  if (!cfg.contains("f")) throw ValidationError("missing field: f");
  const json& f = cfg.at("f");
  std::string kind = require<std::string>(f, "kind");
  if (kind == "constant") {
    double v = require<double>(f, "value");
    return [v](std::span<const double>) { return v; };
  }
  if (kind == "power") {
    double beta = require<double>(f, "beta");
    double scale = f.value("scale", 1.0);
    return [beta, scale](std::span<const double> x) {
      double r2 = 0.0;
      for (double xd : x) r2 += xd * xd;
      return scale * std::pow(r2, -0.5 * beta);
    };
  }
  if (kind == "gaussian") {
    double sigma = require<double>(f, "sigma");
    double amp = f.value("amplitude", 1.0);
    return [sigma, amp](std::span<const double> x) {
      double r2 = 0.0;
      for (double xd : x) r2 += xd * xd;
      return amp * std::exp(-r2 / (2.0 * sigma * sigma));
    };
  }
  if (kind == "custom") {
    if (!mesh || !custom_out) throw ValidationError("custom f tables are not supported here");
    *custom_out = io::read_field_csv(require<std::string>(f, "path"), *mesh);
    FieldVector* ptr = custom_out;
    return [ptr](std::span<const double>) { return (*ptr)[0]; };  // unused; custom_out wins
  }
  throw ValidationError("f.kind must be constant, power, gaussian or custom");
}

FieldVector sample_f(const json& cfg, const Mesh& mesh) {
  FieldVector custom;
  auto fn = parse_f(cfg, &mesh, &custom);
  if (custom.has_mesh()) return custom;
  return sample_field(fn, mesh);
}

Schedule parse_schedule(const std::string& name) {
  if (name == "truncation") return Schedule::truncation;
  if (name == "truncation-squared") return Schedule::truncation_squared;
  if (name == "scaled") return Schedule::scaled;
  throw ValidationError("schedule must be truncation, truncation-squared or scaled");
}

struct Ctx {
  json resolved;
  fs::path outdir;
  int threads = 0;

  void emit_report(const json& results) const {
    json rep;
    rep["config"] = resolved;
    rep["results"] = results;
    rep["kernel_backend"] = kernels::name(kernels::active());
    io::write_json((outdir / "report.json").string(), rep);
  }
};

// ---- commands -------------------------------------------------------------

int run_solve(Ctx& ctx) {
  json& cfg = ctx.resolved;
  const int n = get_or(cfg, "n", 3);
  const double s = get_or(cfg, "s", 0.5);
  const double gamma = get_or(cfg, "gamma", 0.0);
  const int N = require<int>(cfg, "N");
  const double L = get_or(cfg, "box_halfwidth", 1.25);
  const bool local_only = get_or(cfg, "local_only", false);

  Mesh mesh = Mesh::build(parse_domain(cfg, n), N, L);
  AssemblyOptions aopts;
  aopts.with_fractional = !local_only;
  aopts.threads = ctx.threads;
  OperatorSet ops = assemble(mesh, s, aopts);
  FieldVector f = sample_f(cfg, mesh);

  SolveOptions sopt;
  sopt.tol = get_or(cfg, "tol", 1e-10);
  sopt.maxit = get_or(cfg, "maxit", 0);
  sopt.threads = ctx.threads;
  if (cfg.contains("m")) {
    auto tab = special::exponent_table(n, s, cfg.at("m").get<double>());
    if (tab.m_double_star) sopt.extra_lp = *tab.m_double_star;
  }
  SolveReport rep = solve_linear(ops, gamma, f, sopt);

  io::write_field_csv((ctx.outdir / "solution.csv").string(), rep.solution);
  json res = io::report_of(rep);
  res["mesh"] = io::mesh_header(mesh);
  ctx.emit_report(res);
  std::cout << "solve: M=" << mesh.interior_count() << " iters=" << rep.iterations
            << " residual=" << rep.residual_norm << " min=" << rep.min_value
            << " max=" << rep.max_value << "\n";
  return 0;
}

int run_iterate(Ctx& ctx) {
  json& cfg = ctx.resolved;
  const int n = get_or(cfg, "n", 3);
  const double s = get_or(cfg, "s", 0.5);
  const double gamma = get_or(cfg, "gamma", 0.0);
  const int N = require<int>(cfg, "N");
  const double L = get_or(cfg, "box_halfwidth", 1.25);
  const int K = require<int>(cfg, "K");

  Mesh mesh = Mesh::build(parse_domain(cfg, n), N, L);
  AssemblyOptions aopts;
  aopts.threads = ctx.threads;
  OperatorSet ops = assemble(mesh, s, aopts);
  FieldVector f = sample_f(cfg, mesh);

  SchemeOptions sopts;
  sopts.solver_tol = get_or(cfg, "tol", 1e-10);
  sopts.threads = ctx.threads;
  sopts.schedule = parse_schedule(get_or<std::string>(cfg, "schedule", "truncation"));

  IterationTrace trace = monotone_iteration(ops, gamma, f, K, sopts);

  {
    io::CsvWriter csv((ctx.outdir / "trace.csv").string(),
                      {"k", "L1", "L2", "rho_sq", "hardy", "monotonicity_defect", "min_value"});
    for (const auto& st : trace.steps)
      csv.row({static_cast<double>(st.k), st.l1, st.l2, st.rho_sq, st.hardy,
               st.monotonicity_defect, st.min_value});
  }
  io::write_field_csv((ctx.outdir / "solution.csv").string(), trace.limit);

  json res;
  res["final_distance"] = trace.final_distance;
  res["final_distance_unregularized"] = trace.final_distance_unregularized;
  double max_defect = 0.0;
  for (const auto& st : trace.steps) max_defect = std::max(max_defect, st.monotonicity_defect);
  res["max_monotonicity_defect"] = max_defect;

  if (cfg.contains("schedule_b")) {
    const double m = require<double>(cfg, "m");
    double dist = sola_uniqueness_check(ops, gamma, f, sopts.schedule,
                                        parse_schedule(cfg.at("schedule_b").get<std::string>()), K,
                                        m, sopts.solver_tol);
    res["sola_distance"] = dist;
  }
  if (cfg.contains("k_levels") && cfg.contains("p")) {
    auto k_levels = cfg.at("k_levels").get<std::vector<double>>();
    const double p = cfg.at("p").get<double>();
    L1CaseBounds b = l1_case_bounds(ops, gamma, f, K, k_levels, p, sopts);
    io::CsvWriter ek((ctx.outdir / "tk_energies.csv").string(), {"k", "rho_sq"});
    for (auto& [k, e] : b.tk_energies) ek.row({k, e});
    io::CsvWriter gk((ctx.outdir / "grad_norms.csv").string(), {"iterate", "grad_lp"});
    for (auto& [j, g] : b.grad_lp_norms) gk.row({static_cast<double>(j), g});
    res["l1_tables"] = true;
  }
  res["mesh"] = io::mesh_header(mesh);
  ctx.emit_report(res);
  std::cout << "iterate: K=" << K << " max_defect=" << max_defect
            << " final_distance=" << trace.final_distance << "\n";
  return 0;
}

int run_constant(Ctx& ctx) {
  json& cfg = ctx.resolved;
  const int n = get_or(cfg, "n", 3);
  const double s = get_or(cfg, "s", 0.5);
  const double m = get_or(cfg, "m", 1.3);
  auto tab = special::exponent_table(n, s, m);

  json res;
  res["lambda_n"] = tab.lambda_n;
  res["c_ns"] = tab.c_ns;
  res["two_star"] = tab.two_star;
  res["two_star_conj"] = tab.two_star_conj;
  res["omega_surface"] = special::sphere_surface(n);
  auto put = [&res](const char* key, const std::optional<double>& v) {
    if (v) res[key] = *v; else res[key] = "undefined";
  };
  put("m_conj", tab.m_conj);
  put("m_star", tab.m_star);
  put("m_double_star", tab.m_double_star);
  put("m_star_s", tab.m_star_s);
  put("m_double_star_s", tab.m_double_star_s);
  put("alpha", tab.alpha);
  put("gamma_m", tab.gamma_m);

  io::CsvWriter csv((ctx.outdir / "constants.csv").string(), {"name", "value"});
  for (auto& [k, v] : res.items())
    if (v.is_number()) csv.raw_row({k, io::format_double(v.get<double>())});
  ctx.emit_report(res);
  std::cout << "constant: n=" << n << " s=" << s << " m=" << m << " Lambda_n=" << tab.lambda_n
            << " C_ns=" << tab.c_ns << "\n";
  return 0;
}

int run_scaling(Ctx& ctx) {
  json& cfg = ctx.resolved;
  const int n = get_or(cfg, "n", 3);
  const double s = get_or(cfg, "s", 0.5);
  auto lambdas = require<std::vector<double>>(cfg, "lambdas");

  ScalingOptions opts;
  opts.N = get_or(cfg, "N", 16);
  opts.domain_radius = get_or(cfg, "domain_radius", 1.0);
  opts.box_halfwidth = get_or(cfg, "box_halfwidth", 1.25);
  opts.policy = get_or<std::string>(cfg, "resample_policy", "adapted") == "fixed"
                    ? ResamplePolicy::fixed
                    : ResamplePolicy::adapted;
  opts.threads = ctx.threads;

  auto profile = cfg.contains("f")
                     ? parse_f(cfg, nullptr, nullptr)
                     : std::function<double(std::span<const double>)>([](std::span<const double> x) {
                         double r2 = 0.0;
                         for (double xd : x) r2 += xd * xd;
                         return std::exp(-r2 / (2.0 * 0.25 * 0.25));
                       });
  ScalingStudy st = scaling_study(profile, n, s, lambdas, opts);

  io::CsvWriter csv((ctx.outdir / "scaling.csv").string(),
                    {"lambda", "q", "gap", "q_resampled"});
  for (std::size_t k = 0; k < st.lambdas.size(); ++k)
    csv.row({st.lambdas[k], st.q[k], st.gap[k], st.q_resampled[k]});

  json res;
  res["q_loc"] = st.q_loc;
  res["slope"] = st.slope;
  res["expected_slope"] = 2.0 * s - 2.0;
  res["max_resample_dev"] = st.max_resample_dev;
  res["grad_sq"] = st.grad_sq;
  res["gagliardo_sq"] = st.gagliardo_sq;
  res["hardy"] = st.hardy;
  ctx.emit_report(res);
  std::cout << "scaling: slope=" << st.slope << " expected=" << 2.0 * s - 2.0
            << " resample_dev=" << st.max_resample_dev << "\n";
  return 0;
}

int run_probe(Ctx& ctx) {
  json& cfg = ctx.resolved;
  const int n = get_or(cfg, "n", 3);
  const double s = get_or(cfg, "s", 0.5);
  const double gamma = get_or(cfg, "gamma", 0.15);
  const double beta = require<double>(cfg, "beta");
  auto ladder = require<std::vector<int>>(cfg, "ladder");
  const double L = get_or(cfg, "box_halfwidth", 1.25);

  Domain dom = parse_domain(cfg, n);
  SolvabilityProbe probe = solvability_probe(dom, L, s, gamma, beta, ladder,
                                             get_or(cfg, "tol", 1e-10));

  io::CsvWriter csv((ctx.outdir / "probe.csv").string(), {"N", "integral"});
  for (std::size_t k = 0; k < probe.ladder.size(); ++k)
    csv.row({static_cast<double>(probe.ladder[k]), probe.integrals[k]});

  json res;
  res["verdict"] = probe.verdict;
  res["integrals"] = probe.integrals;
  res["ratios"] = probe.ratios;
  ctx.emit_report(res);
  std::cout << "probe-solvability: beta=" << beta << " verdict=" << probe.verdict << "\n";
  return 0;
}

int run_sweep(Ctx& ctx) {
  json& cfg = ctx.resolved;
  const int n = get_or(cfg, "n", 3);
  const double s = get_or(cfg, "s", 0.5);
  const double m = require<double>(cfg, "m");
  auto gammas = require<std::vector<double>>(cfg, "gammas");
  const int N = require<int>(cfg, "N");
  const double L = get_or(cfg, "box_halfwidth", 1.25);

  Mesh mesh = Mesh::build(parse_domain(cfg, n), N, L);
  AssemblyOptions aopts;
  aopts.threads = ctx.threads;
  OperatorSet ops = assemble(mesh, s, aopts);
  FieldVector f = sample_f(cfg, mesh);

  SweepResult sw = integrability_sweep(ops, m, f, gammas, get_or(cfg, "tol", 1e-10));

  io::CsvWriter csv((ctx.outdir / "sweep.csv").string(),
                    {"gamma", "u_norm_mss", "bound_ratio", "iterations"});
  for (const auto& row : sw.rows)
    csv.row({row.gamma, row.u_norm_mss, row.bound_ratio, static_cast<double>(row.iterations)});

  json res;
  res["gamma_m"] = sw.gamma_m;
  res["m_double_star"] = sw.m_double_star;
  res["f_norm_m"] = sw.f_norm_m;
  ctx.emit_report(res);
  std::cout << "sweep: m=" << m << " gamma(m)=" << sw.gamma_m << " levels=" << sw.rows.size()
            << "\n";
  return 0;
}

// ---- verify: fast property suite -------------------------------------------

int run_verify(Ctx& ctx) {
  int failures = 0;
  json res;
  auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    res[name] = ok;
    if (!ok) ++failures;
  };

  // exact exponent identities
  {
    bool ok = true;
    for (int n = 3; n <= 6; ++n) {
      auto t0 = special::exponent_table(n, 0.5, 2.0 * n / (n + 2.0));
      ok = ok && t0.gamma_m && std::fabs(*t0.gamma_m - t0.lambda_n) <= 1e-12 * t0.lambda_n;
      for (double frac : {0.25, 0.5, 0.75}) {
        double m = 1.0 + frac * (0.5 * n - 1.0) * 0.9;
        auto t = special::exponent_table(n, 0.5, m);
        double lhs = (*t.alpha - 1.0) * *t.m_conj;
        ok = ok && std::fabs(lhs - *t.m_double_star) <= 1e-12 * *t.m_double_star;
        ok = ok && std::fabs(0.5 * t.two_star * *t.alpha - *t.m_double_star) <=
                       1e-12 * *t.m_double_star;
      }
    }
    check("exponent-identities", ok);
  }
  // gamma recurrence
  {
    bool ok = true;
    for (double x : {0.3, 1.7, 4.2, 9.5, 14.25}) {
      double lhs = special::gamma_fn(x + 1.0), rhs = x * special::gamma_fn(x);
      ok = ok && std::fabs(lhs - rhs) <= 1e-10 * std::fabs(rhs);
    }
    check("gamma-recurrence", ok);
  }
  // truncation properties
  {
    bool ok = true;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
      double a = d(rng), b = d(rng), lev = std::fabs(d(rng)) + 0.1;
      ok = ok && std::fabs(special::truncate(a, lev) - special::truncate(b, lev)) <=
                     std::fabs(a - b) + 1e-15;
      if (a <= b) ok = ok && special::truncate(a, lev) <= special::truncate(b, lev);
    }
    check("truncate-lipschitz-monotone", ok);
  }

  Mesh mesh = Mesh::build(Domain::ball(3, 1.0), 10, 1.25);
  OperatorSet ops = assemble(mesh, 0.5);
  const std::size_t M = mesh.interior_count();

  // structure: symmetry, sign pattern, row sums
  {
    const auto& F = ops.fractional_dense();
    double sym = 0.0, maxabs = 0.0;
    bool signs = true;
    for (std::size_t i = 0; i < M; ++i) {
      double rowsum = 0.0;
      for (std::size_t j = 0; j < M; ++j) {
        sym = std::max(sym, std::fabs(F[i * M + j] - F[j * M + i]));
        maxabs = std::max(maxabs, std::fabs(F[i * M + j]));
        if (i != j) signs = signs && F[i * M + j] <= 0.0;
        rowsum += F[i * M + j];
      }
      signs = signs && F[i * M + i] > 0.0 && rowsum >= -1e-12 * maxabs;
    }
    check("fractional-structure", sym <= 1e-12 * maxabs && signs);
  }
  // coercivity witness and Hardy witness
  {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    bool ok = true;
    std::vector<double> au(M);
    const double lam3 = special::hardy_constant(3);
    for (int t = 0; t < 200; ++t) {
      FieldVector u(mesh);
      for (std::size_t i = 0; i < M; ++i) u[i] = d(rng);
      ops.apply(0.15, u.data(), au.data());
      double quad = 0.0;
      for (std::size_t i = 0; i < M; ++i) quad += u[i] * au[i];
      ok = ok && quad > 0.0;
      ok = ok && rho_squared(ops, u) >= 0.8 * lam3 * hardy_functional(mesh, u, 2.0, 0.5);
    }
    check("coercivity-and-hardy-witness", ok);
  }
  // solver determinism + adjoint identity
  {
    FieldVector f1 = sample_field([](std::span<const double> x) { return 1.0 + x[0]; }, mesh);
    FieldVector f2 = sample_field([](std::span<const double> x) { return 1.0 + x[1] * x[1]; }, mesh);
    SolveReport a1 = solve_linear(ops, 0.0, f1);
    SolveReport a2 = solve_linear(ops, 0.0, f1);
    bool bitwise = a1.iterations == a2.iterations && a1.residual_norm == a2.residual_norm;
    for (std::size_t i = 0; i < M && bitwise; ++i) bitwise = a1.solution[i] == a2.solution[i];
    SolveReport b = solve_linear(ops, 0.0, f2);
    const double hn = mesh.cell_volume();
    double gu = 0.0, fu = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      gu += f2[i] * a1.solution[i];
      fu += f1[i] * b.solution[i];
    }
    gu *= hn;
    fu *= hn;
    check("solver-determinism", bitwise);
    check("adjoint-identity", std::fabs(gu - fu) <= 1e-9 * std::max(std::fabs(gu), 1.0),
          "defect=" + std::to_string(std::fabs(gu - fu)));
  }
  // monotone scheme mini-run + comparison principle
  {
    FieldVector f(mesh);
    for (std::size_t i = 0; i < M; ++i) f[i] = 1.0;
    IterationTrace tr = monotone_iteration(ops, 0.1, f, 8);
    double defect = 0.0, minv = 0.0;
    for (auto& st : tr.steps) {
      defect = std::max(defect, st.monotonicity_defect);
      minv = std::min(minv, st.min_value);
    }
    check("monotone-scheme", defect <= 1e-8 && minv >= -1e-9,
          "defect=" + std::to_string(defect));

    FieldVector f2(mesh);
    for (std::size_t i = 0; i < M; ++i) f2[i] = f[i] + 0.5 * (1.0 + mesh.coord(i, 0));
    SolveReport u1 = solve_linear(ops, 0.1, f);
    SolveReport u2 = solve_linear(ops, 0.1, f2);
    double worst = 0.0;
    for (std::size_t i = 0; i < M; ++i) worst = std::max(worst, u1.solution[i] - u2.solution[i]);
    check("comparison-principle", worst <= 1e-9, "excess=" + std::to_string(worst));
  }
  // duality identity
  {
    FieldVector f(mesh);
    for (std::size_t i = 0; i < M; ++i) f[i] = 1.0;
    SolveReport u = solve_linear(ops, 0.15, f);
    auto probes = random_bounded_probes(mesh, 5, 321);
    double defect = duality_verify(ops, u.solution, f, 0.15, probes);
    check("duality-identity", defect <= 1e-8, "max_defect=" + std::to_string(defect));
  }
  // proof inequalities
  {
    double pv = power_inequality_check(1.5, 100000, 99);
    check("power-inequality", pv <= 1e-12 * std::pow(10.0, 2.5));
    Mesh tiny = Mesh::build(Domain::ball(3, 1.0), 8, 1.25);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.1, 2.0);
    FieldVector u(tiny), phi(tiny);
    for (std::size_t i = 0; i < tiny.interior_count(); ++i) {
      u[i] = d(rng);
      phi[i] = d(rng) - 1.0;
    }
    double gv = ground_state_inequality_check(u, phi, 0, 0);
    check("ground-state-inequality", gv <= 1e-9, "max_violation=" + std::to_string(gv));
  }
  // validation contract: sweep must reject gamma >= gamma(m)
  {
    bool threw = false;
    try {
      FieldVector f(mesh);
      for (std::size_t i = 0; i < M; ++i) f[i] = 1.0;
      std::vector<double> bad{0.25};
      integrability_sweep(ops, 1.3, f, bad);
    } catch (const ValidationError& e) {
      threw = std::string(e.what()).find("γ(m)") != std::string::npos;
    }
    check("sweep-threshold-validation", threw);
  }

  ctx.emit_report(res);
  std::cout << (failures == 0 ? "verify: all checks passed\n"
                              : "verify: " + std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed local-nonlocal Hardy experiments"};
  app.require_subcommand(1);

  std::string config_path, output_dir = "out";
  int threads = 0;

  const char* names[] = {"solve", "iterate", "constant", "scaling", "probe-solvability",
                         "sweep", "verify"};
  for (const char* name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--output", output_dir, "output directory");
    sub->add_option("--threads", threads, "worker cap for assembly/sweeps");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    Ctx ctx;
    ctx.resolved = load_config(config_path);
    ctx.outdir = output_dir;
    fs::create_directories(ctx.outdir);
    if (threads == 0) {
      if (const char* env = std::getenv("MLNHARDY_THREADS")) threads = std::atoi(env);
    }
    ctx.threads = threads;
    if (threads > 0) set_default_threads(threads);
    ctx.resolved["threads"] = threads;
    ctx.resolved["seed"] = ctx.resolved.value("seed", 12345);

    const std::string cmd = app.get_subcommands().front()->get_name();
    ctx.resolved["command"] = cmd;
    if (cmd == "solve") return run_solve(ctx);
    if (cmd == "iterate") return run_iterate(ctx);
    if (cmd == "constant") return run_constant(ctx);
    if (cmd == "scaling") return run_scaling(ctx);
    if (cmd == "probe-solvability") return run_probe(ctx);
    if (cmd == "sweep") return run_sweep(ctx);
    if (cmd == "verify") return run_verify(ctx);
    std::cerr << "unknown command: " << cmd << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
