#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fracneumann/commands.hpp"
#include "fracneumann/diagnostics.hpp"
#include "fracneumann/extension.hpp"
#include "fracneumann/io.hpp"
#include "fracneumann/profile.hpp"
#include "fracneumann/profile_ode.hpp"
#include "fracneumann/run_config.hpp"
#include "fracneumann/solver.hpp"

// Release gate: one self-contained check per shipped guarantee, each with a
// pinned tolerance and wall-clock budget. Every check recomputes its own
// reference values; nothing here reads expected numbers from disk.

namespace fracneumann::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget = 0.0;
  std::string detail;
};

struct Options {
  std::string scratch_dir = "acceptance_scratch";
  int threads = 0;       // 0: hardware_concurrency, capped at 8
  bool rho_tamper = false;  // negative control: skew the kernel profile by 1e-3
                            // so the profile-sensitive checks (2-4) must fail
};

namespace detail {

inline int resolve_threads(const Options& opts) {
  if (opts.threads > 0) return opts.threads;
  const unsigned hc = std::thread::hardware_concurrency();
  return int(std::min(hc == 0 ? 2u : hc, 8u));
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return std::string(buf);
}

// First failed requirement wins; the detail string keeps the measurements.
struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& msg) {
    if (ok && !cond) {
      ok = false;
      detail << " FAILED: " << msg << ";";
    }
  }
  void note(const std::string& msg) { detail << " " << msg << ";"; }
};

using ProfileFn = double (*)(double, double);

inline double profile_plain(double t, double s) { return rho_eval(t, s); }
inline double profile_tampered(double t, double s) { return (1.0 + 1e-3) * rho_eval(t, s); }

inline ProfileFn pick_profile(const Options& opts) {
  return opts.rho_tamper ? profile_tampered : profile_plain;
}

// The criterion-7 sweep feeds criteria 9-12; solve it once per harness run.
struct SweepCache {
  std::optional<SweepResult> result;
  double build_seconds = 0.0;
  std::string error;
};

inline SweepConfig existence_sweep_config(const Options& opts) {
  SweepConfig sw;
  sw.domain = ModelDomain::interval(1.0);
  sw.num_modes = 256;
  sw.grid_size = 512;
  sw.s = 0.5;
  sw.p = 2.0;
  sw.eps_list = make_eps_list(1e-5, 1e-3, 8);
  sw.eta_rel = 0.5;
  sw.threads = resolve_threads(opts);
  sw.solver.seed = 20260814;
  // The least-energy state anchors at the boundary, so start the search
  // there; interior tents relax to higher-energy translation-degenerate
  // spikes and waste most of the wall-clock budget.
  sw.solver.spike_centers_rel = {0.0, 0.05};
  sw.solver.multistart = 0;
  return sw;
}

inline const SweepResult* shared_sweep(const Options& opts, SweepCache& cache, Check& c) {
  if (!cache.result && cache.error.empty()) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cache.result = run_sweep(existence_sweep_config(opts));
    } catch (const std::exception& e) {
      cache.error = e.what();
    }
    cache.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  if (!cache.result) {
    c.require(false, "sweep failed: " + cache.error);
    return nullptr;
  }
  return &*cache.result;
}

}  // namespace detail

// 1. Applying the resolvent to each eigenmode reproduces the closed-form
//    diagonal action 1/(1 + (eps lambda_k)^s) to 1e-14 relative. The mode is
//    fed in its exact spectral representation (a coordinate vector), so the
//    check gates the resolvent arithmetic itself; a second pass going
//    through grid sampling and quadrature analysis guards the full pipeline
//    at the quadrature noise floor.
inline CriterionResult criterion_1(const Options&) {
  detail::Check c;
  const double tol = 1e-14;
  const double grid_tol = 1e-12;
  double worst = 0.0, worst_grid = 0.0;
  const std::vector<ModelDomain> domains{ModelDomain::interval(1.0), ModelDomain::interval(2.5),
                                         ModelDomain::rectangle(1.0, 1.0), ModelDomain::rectangle(2.0, 0.5)};
  for (const ModelDomain& dom : domains) {
    const BasisPtr basis = build_basis(dom, 24, 64);
    for (double eps : {0.3, 1.7}) {
      for (double s : {0.25, 0.6}) {
        const FracParams P{eps, s};
        for (int k = 0; k < basis->size(); ++k) {
          const double want = 1.0 / (1.0 + std::pow(eps * basis->lambda(k), s));
          SpectralField mode = zero_field(basis);
          mode.coeffs[std::size_t(k)] = 1.0;
          const SpectralField r = resolvent(mode, P);
          for (int j = 0; j < basis->size(); ++j) {
            const double got = r.coeffs[std::size_t(j)];
            worst = std::max(worst, std::abs(got - (j == k ? want : 0.0)) / want);
          }
          GridField g{basis, std::vector<double>(std::size_t(basis->node_count()))};
          for (int i = 0; i < basis->node_count(); ++i) {
            g.values[std::size_t(i)] = basis->mode_value(k, i);
          }
          const SpectralField rg = resolvent(analyze(g), P);
          for (int j = 0; j < basis->size(); ++j) {
            const double got = rg.coeffs[std::size_t(j)];
            worst_grid = std::max(worst_grid, std::abs(got - (j == k ? want : 0.0)) / want);
          }
        }
      }
    }
  }
  c.detail << " max rel err " << detail::num(worst) << " (tol " << detail::num(tol)
           << "), sampled route " << detail::num(worst_grid) << " (tol " << detail::num(grid_tol)
           << ");";
  c.require(worst <= tol, "resolvent deviates from diagonal closed form");
  c.require(worst_grid <= grid_tol, "sampled-mode route exceeds the quadrature floor");
  return {1, "resolvent-diagonal-exactness", c.ok, 0.0, 1.0, c.detail.str()};
}

// 2. Cylinder energy of the lifted eigenmode equals (C_s/2)(eps lambda_k)^s.
inline CriterionResult criterion_2(const Options& opts) {
  detail::Check c;
  const double tol = 1e-4;
  const detail::ProfileFn prof = detail::pick_profile(opts);
  double worst = 0.0;
  const BasisPtr basis = build_basis(ModelDomain::interval(1.0), 12, 64);
  for (double s : {0.25, 0.5, 0.75}) {
    const double Cs = trace_constant_Cs(s);
    for (double eps : {1.0, 0.37}) {
      const FracParams P{eps, s};
      const std::vector<double> ygrid = default_extension_ygrid(*basis, P);
      for (int k = 1; k <= 10; ++k) {
        SpectralField u = zero_field(basis);
        u.coeffs[std::size_t(k)] = 1.0;
        const ExtensionField U = extend_with_profile(u, P, ygrid, prof);
        const double got = cylinder_energy(U, P, false);
        const double want = 0.5 * Cs * frac_power(P, basis->lambda(k));
        worst = std::max(worst, std::abs(got - want) / want);
      }
    }
  }
  c.detail << " max rel err " << detail::num(worst) << " (tol " << detail::num(tol) << ");";
  c.require(worst <= tol, "cylinder energy misses (C_s/2)(eps lambda)^s");
  return {2, "extension-energy-identity", c.ok, 0.0, 10.0, c.detail.str()};
}

// 3. Order-1/2 closed forms: rho = exp(-t), c_{1/2} = C_{1/2} = 1. The
//    kernel evaluator and the energy quadrature must hit them on their
//    generic code paths.
inline CriterionResult criterion_3(const Options& opts) {
  detail::Check c;
  const detail::ProfileFn prof = detail::pick_profile(opts);
  double worst_rho = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double t = 20.0 * i / 2000.0;
    worst_rho = std::max(worst_rho, std::abs(prof(t, 0.5) - std::exp(-t)));
  }
  const double cs_err = std::abs(cs_constant(0.5) - 1.0);
  const double Cs_err = std::abs(trace_constant_Cs(0.5) - 1.0);
  c.detail << " max|rho-exp(-t)| " << detail::num(worst_rho) << " (tol 1e-10), |c-1| "
           << detail::num(cs_err) << " (tol 1e-8), |C-1| " << detail::num(Cs_err) << " (tol 1e-8);";
  c.require(worst_rho <= 1e-10, "rho(t; 1/2) deviates from exp(-t)");
  c.require(cs_err <= 1e-8, "c_{1/2} deviates from 1");
  c.require(Cs_err <= 1e-8, "C_{1/2} deviates from 1");
  return {3, "half-order-closed-forms", c.ok, 0.0, 1.0, c.detail.str()};
}

// 4. Series/asymptotic kernel vs the shooting ODE integrator, two routes
//    that share no code.
inline CriterionResult criterion_4(const Options& opts) {
  detail::Check c;
  const detail::ProfileFn prof = detail::pick_profile(opts);
  double worst_abs = 0.0, worst_rel = 0.0;
  for (double s : {0.25, 0.75}) {
    std::vector<double> ts;
    for (int i = 0; i < 80; ++i) ts.push_back(0.05 * std::pow(15.0 / 0.05, i / 79.0));
    for (double t = 0.5; t <= 15.0 + 1e-12; t += 0.25) ts.push_back(t);
    const OdeProfileResult oracle = rho_ode_oracle(s, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double a = prof(ts[i], s);
      const double b = oracle.values[i];
      worst_abs = std::max(worst_abs, std::abs(a - b));
      if (ts[i] <= 10.0) worst_rel = std::max(worst_rel, std::abs(a - b) / std::abs(b));
    }
  }
  c.detail << " max abs err " << detail::num(worst_abs) << ", max rel err (t<=10) "
           << detail::num(worst_rel) << " (tol 1e-6);";
  c.require(worst_abs <= 1e-6, "kernel routes disagree in absolute terms");
  c.require(worst_rel <= 1e-6, "kernel routes disagree in relative terms");
  return {4, "profile-route-cross-validation", c.ok, 0.0, 5.0, c.detail.str()};
}

// 5. Energy gradient vs central finite differences along random directions.
inline CriterionResult criterion_5(const Options&) {
  detail::Check c;
  const double tol = 1e-5;
  double worst = 0.0;
  std::mt19937_64 rng(991);
  int done = 0;
  const std::vector<BasisPtr> bases{build_basis(ModelDomain::interval(1.0), 20, 48),
                                    build_basis(ModelDomain::rectangle(1.0, 0.8), 16, 32)};
  for (const BasisPtr& basis : bases) {
    const int n = basis->domain().dimension();
    for (double s : {0.3, 0.7}) {
      // Stay strictly below the critical exponent on each domain.
      const double plimit = (n > 2.0 * s) ? (n + 2.0 * s) / (n - 2.0 * s)
                                          : std::numeric_limits<double>::infinity();
      for (double pbase : {2.0, 3.0}) {
        const double p = pbase < plimit ? pbase : 1.0 + 0.8 * (plimit - 1.0);
        for (double eps : {0.4, 1.0, 2.5}) {
          SemilinearProblem prob(basis, FracParams{eps, s}, p);
          SpectralField u = constant_field(basis, 1.2);
          SpectralField v = zero_field(basis);
          for (int k = 0; k < basis->size(); ++k) {
            u.coeffs[std::size_t(k)] += (uniform01(rng()) - 0.5) * 2.0 / (1.0 + k);
            v.coeffs[std::size_t(k)] = (uniform01(rng()) - 0.5) * 2.0;
          }
          const double h = 1e-5;
          const double jp = energy(axpy(h, v, u), prob);
          const double jm = energy(axpy(-h, v, u), prob);
          const double fd = (jp - jm) / (2.0 * h);
          const SpectralField g = gradient(u, prob);
          double dotgv = kahan_dot(g.coeffs, v.coeffs);
          const double scale = std::max(std::abs(dotgv), 1e-8 * l2_norm_coeffs(g) * l2_norm_coeffs(v));
          worst = std::max(worst, std::abs(fd - dotgv) / scale);
          ++done;
        }
      }
    }
  }
  c.detail << " " << done << " directional checks, max rel err " << detail::num(worst) << " (tol "
           << detail::num(tol) << ");";
  c.require(done >= 20, "fewer than 20 directional checks ran");
  c.require(worst <= tol, "gradient disagrees with finite differences");
  return {5, "gradient-finite-difference", c.ok, 0.0, 5.0, c.detail.str()};
}

// 6. The constant states solve the equation to near machine precision, and
//    Newton in the large-diffusion regime returns to u = 1.
inline CriterionResult criterion_6(const Options&) {
  detail::Check c;
  double worst = 0.0;
  const std::vector<BasisPtr> bases{build_basis(ModelDomain::interval(1.0), 32, 64),
                                    build_basis(ModelDomain::rectangle(1.0, 1.0), 16, 32)};
  for (const BasisPtr& basis : bases) {
    const int n = basis->domain().dimension();
    for (double eps : {0.1, 1.0, 10.0, 100.0}) {
      for (double s : {0.25, 0.5, 0.75}) {
        // Stay strictly below the critical exponent on each domain.
        const double plimit = (n > 2.0 * s) ? (n + 2.0 * s) / (n - 2.0 * s)
                                            : std::numeric_limits<double>::infinity();
        for (double pbase : {2.0, 3.0}) {
          const double p = pbase < plimit ? pbase : 1.0 + 0.8 * (plimit - 1.0);
          SemilinearProblem prob(basis, FracParams{eps, s}, p);
          worst = std::max(worst, residual_norm(constant_field(basis, 1.0), prob));
          worst = std::max(worst, residual_norm(zero_field(basis), prob));
        }
      }
    }
  }
  c.detail << " max constant-state residual " << detail::num(worst) << " (tol 1e-13);";
  c.require(worst <= 1e-13, "constant state residual too large");

  const BasisPtr basis = build_basis(ModelDomain::interval(1.0), 32, 64);
  SemilinearProblem prob(basis, FracParams{100.0, 0.5}, 2.0);
  SpectralField start = constant_field(basis, 1.0);
  start.coeffs[1] += 1e-3;
  const SolutionReport rep = solve_newton(prob, start);
  SpectralField diff = axpy(-1.0, constant_field(basis, 1.0), rep.solution);
  const double dist = l2_norm_coeffs(diff);
  c.detail << " newton-return distance " << detail::num(dist) << " (tol 1e-10);";
  c.require(rep.converged, "newton did not converge from the perturbed constant");
  c.require(dist <= 1e-10, "newton limit is not the constant state");
  return {6, "constant-states", c.ok, 0.0, 5.0, c.detail.str()};
}

// 7. Small-diffusion existence: every sweep solve converges to a nonconstant
//    positive state and the energy scales like eps^(1/2).
inline CriterionResult criterion_7(const Options& opts, detail::SweepCache& cache) {
  detail::Check c;
  const SweepResult* sw = detail::shared_sweep(opts, cache, c);
  if (sw) {
    int bad = 0;
    for (const SweepRow& r : sw->rows) {
      if (!(r.converged && r.classification == Classification::nonconstant && r.positive)) {
        ++bad;
        c.detail << " [eps " << detail::num(r.eps) << ": conv " << r.converged << ", "
                 << (r.classification == Classification::constant ? "constant" : "nonconstant")
                 << ", positive " << r.positive << "]";
      }
    }
    c.detail << " rows " << sw->rows.size() - std::size_t(bad) << "/" << sw->rows.size()
             << " converged nonconstant positive;";
    const ScalingFit fit = fit_scaling(sw->rows);
    c.detail << " energy slope " << detail::num(fit.energy_slope) << " (want 0.5 +- 0.1);";
    c.require(bad == 0, std::to_string(bad) + " rows missed converged+nonconstant+positive");
    c.require(std::abs(fit.energy_slope - 0.5) <= 0.1, "energy slope outside 0.5 +- 0.1");
  }
  return {7, "spike-existence-energy-scaling", c.ok, 0.0, 120.0, c.detail.str()};
}

// 8. Large diffusion: from every admissible start the solver lands on u = 1.
inline CriterionResult criterion_8(const Options& opts) {
  detail::Check c;
  const BasisPtr basis = build_basis(ModelDomain::interval(1.0), 256, 512);
  const SpectralField one = constant_field(basis, 1.0);
  int converged_runs = 0, total_runs = 0;
  double worst = 0.0;
  SolverConfig cfg;
  cfg.seed = 77001;
  // Descent only needs to reach Newton's basin; in the collapse regime the
  // constant is the global attractor, so a short descent leg suffices.
  cfg.descent_max_iter = 200;
  (void)opts;
  for (double eps : {10.0, 100.0, 1000.0}) {
    SemilinearProblem prob(basis, FracParams{eps, 0.5}, 2.0);
    const auto starts = mountain_pass_starts(prob, cfg);
    c.require(starts.size() == 5, "expected 5 multistarts");
    int converged_here = 0;
    for (const auto& [start, label] : starts) {
      ++total_runs;
      SolutionReport rep;
      try {
        rep = solve_from_start(prob, start, cfg);
      } catch (const std::invalid_argument&) {
        continue;
      }
      if (!rep.converged) continue;
      ++converged_runs;
      ++converged_here;
      const double dist = l2_norm_coeffs(axpy(-1.0, one, rep.solution));
      worst = std::max(worst, dist);
      c.require(rep.classification == Classification::constant,
                "nonconstant limit at eps " + detail::num(eps) + " from " + label);
      c.require(dist <= 1e-7, "limit differs from u=1 at eps " + detail::num(eps) + " from " + label);
    }
    c.require(converged_here > 0, "no start converged at eps " + detail::num(eps));
  }
  c.detail << " " << converged_runs << "/" << total_runs << " runs converged, max |u-1| "
           << detail::num(worst) << " (tol 1e-7);";
  return {8, "large-diffusion-collapse", c.ok, 0.0, 60.0, c.detail.str()};
}

// 9. Uniform sup bound across the existence sweep.
inline CriterionResult criterion_9(const Options& opts, detail::SweepCache& cache) {
  detail::Check c;
  const SweepResult* sw = detail::shared_sweep(opts, cache, c);
  if (sw) {
    const double ratio = sup_ratio(sw->rows);
    c.detail << " max/median sup " << detail::num(ratio) << " (tol 10);";
    c.require(ratio <= 10.0, "sup norms spread beyond 10x median");
  }
  return {9, "uniform-sup-bound", c.ok, 0.0, 125.0, c.detail.str()};
}

// 10. Mass observables scale like eps^(1/2); the integral identity
//     int u = int u_+^p holds row by row.
inline CriterionResult criterion_10(const Options& opts, detail::SweepCache& cache) {
  detail::Check c;
  const SweepResult* sw = detail::shared_sweep(opts, cache, c);
  if (sw) {
    const ScalingFit fit = fit_scaling(sw->rows);
    c.detail << " slopes l1 " << detail::num(fit.l1_slope) << ", l2sq " << detail::num(fit.l2sq_slope)
             << ", nonlinear " << detail::num(fit.nonlinear_slope) << " (want 0.5 +- 0.1);";
    c.require(std::abs(fit.l1_slope - 0.5) <= 0.1, "mass slope outside 0.5 +- 0.1");
    c.require(std::abs(fit.l2sq_slope - 0.5) <= 0.1, "l2^2 slope outside 0.5 +- 0.1");
    c.require(std::abs(fit.nonlinear_slope - 0.5) <= 0.1, "nonlinear mass slope outside 0.5 +- 0.1");
    double gap = 0.0;
    for (const SweepRow& r : sw->rows) gap = std::max(gap, r.mean_gap);
    c.detail << " max identity gap " << detail::num(gap) << " (tol 1e-8);";
    c.require(gap <= 1e-8, "integral identity gap exceeds 1e-8");
  }
  return {10, "mass-scaling-identity", c.ok, 0.0, 125.0, c.detail.str()};
}

// 11. Concentration: cube-cover counts stay in a 3x band and near-max sets
//     fit inside the covered region.
inline CriterionResult criterion_11(const Options& opts, detail::SweepCache& cache) {
  detail::Check c;
  const SweepResult* sw = detail::shared_sweep(opts, cache, c);
  if (sw) {
    int mmin = std::numeric_limits<int>::max(), mmax = 0;
    bool cluster_ok = true;
    const double dim = 1.0;  // the sweep runs on an interval
    for (const SweepRow& r : sw->rows) {
      mmin = std::min(mmin, r.cube_count);
      mmax = std::max(mmax, r.cube_count);
      if (r.cluster_diameter > std::sqrt(dim) * std::sqrt(r.eps) * r.cube_count) cluster_ok = false;
    }
    c.detail << " cube counts [" << mmin << "," << mmax << "] (max/min tol 3);";
    c.require(mmin >= 1, "a sweep row has an empty cube cover");
    c.require(mmax <= 3 * mmin, "cube counts spread beyond 3x");
    c.require(cluster_ok, "near-max cluster exceeds sqrt(eps) x cube count");
  }
  return {11, "cube-concentration", c.ok, 0.0, 130.0, c.detail.str()};
}

// 12. Interior oscillation control: sup/inf ratios on sqrt(n eps) balls stay
//     in a 3x band across the sweep.
inline CriterionResult criterion_12(const Options& opts, detail::SweepCache& cache) {
  detail::Check c;
  const SweepResult* sw = detail::shared_sweep(opts, cache, c);
  if (sw) {
    double hmin = std::numeric_limits<double>::infinity(), hmax = 0.0;
    bool all_finite = true;
    for (const SweepRow& r : sw->rows) {
      if (!std::isfinite(r.harnack)) {
        all_finite = false;
        c.detail << " [eps " << detail::num(r.eps) << ": no ball ratio]";
        continue;
      }
      hmin = std::min(hmin, r.harnack);
      hmax = std::max(hmax, r.harnack);
    }
    c.require(all_finite, "a sweep row has no ball ratio (solution not positive)");
    if (all_finite) {
      c.detail << " ball ratios [" << detail::num(hmin) << "," << detail::num(hmax)
               << "] (max/min tol 3);";
      c.require(hmax <= 3.0 * hmin, "ball ratios spread beyond 3x");
    }
  }
  return {12, "ball-oscillation-stability", c.ok, 0.0, 150.0, c.detail.str()};
}

// 13. Semigroup algebra: composition law, L2 contraction, and the L2 -> Linf
//     smoothing ratio stay bounded on t in [0.01, 10].
inline CriterionResult criterion_13(const Options&) {
  detail::Check c;
  const BasisPtr basis = build_basis(ModelDomain::interval(1.0), 32, 64);
  const FracParams P{1.0, 0.5};
  SpectralField u = zero_field(basis);
  for (int k = 0; k < basis->size(); ++k) u.coeffs[std::size_t(k)] = 1.0 / (1.0 + k);

  double law_err = 0.0;
  for (auto [t1, t2] : std::vector<std::pair<double, double>>{{0.13, 0.57}, {1.0, 2.5}, {0.01, 9.0}}) {
    const SpectralField a = heat_semigroup(heat_semigroup(u, t1, P), t2, P);
    const SpectralField b = heat_semigroup(u, t1 + t2, P);
    for (std::size_t k = 0; k < a.coeffs.size(); ++k) {
      const double scale = std::max(std::abs(b.coeffs[k]), 1e-300);
      law_err = std::max(law_err, std::abs(a.coeffs[k] - b.coeffs[k]) / scale);
    }
  }
  c.detail << " composition rel err " << detail::num(law_err) << " (tol 1e-13);";
  c.require(law_err <= 1e-13, "semigroup composition law violated");

  const double base = l2_norm_coeffs(u);
  double contraction = 0.0;
  for (double t : {0.01, 0.1, 1.0, 10.0}) {
    contraction = std::max(contraction, l2_norm_coeffs(heat_semigroup(u, t, P)) / base);
  }
  c.detail << " max L2 growth " << detail::num(contraction) << " (tol 1);";
  c.require(contraction <= 1.0 + 1e-15, "semigroup expands in L2");

  std::vector<double> times;
  for (int i = 0; i < 25; ++i) times.push_back(0.01 * std::pow(10.0 / 0.01, i / 24.0));
  SpectralField mode1 = zero_field(basis);
  mode1.coeffs[1] = 1.0;
  const double ratio1 = ultracontractivity_check(mode1, P, times, 2.0, std::numeric_limits<double>::infinity());
  const double ratio2 = ultracontractivity_check(u, P, times, 2.0, std::numeric_limits<double>::infinity());
  const double ratio = std::max(ratio1, ratio2);
  c.detail << " smoothing ratio " << detail::num(ratio) << " (tol 10);";
  c.require(ratio <= 10.0, "L2->Linf smoothing ratio exceeds bound");
  return {13, "semigroup-smoothing", c.ok, 0.0, 5.0, c.detail.str()};
}

// 14. Bitwise reproducibility of the sweep artifacts under a fixed config.
inline CriterionResult criterion_14(const Options& opts) {
  detail::Check c;
  namespace fs = std::filesystem;
  RunConfig cfg;
  cfg.domain_spec = "interval:1";
  cfg.num_modes = 32;
  cfg.grid_size = 64;
  cfg.s = 0.5;
  cfg.p = 2.0;
  cfg.eps_min = 1e-3;
  cfg.eps_max = 1e-2;
  cfg.eps_count = 4;
  cfg.threads = std::min(detail::resolve_threads(opts), 2);
  cfg.seed = 4242;
  cfg.out_dir = (fs::path(opts.scratch_dir) / "determinism").string();
  std::ostringstream log, err;
  const int rc1 = cmd_sweep(cfg, log, err);
  c.require(rc1 == exit_ok, "first sweep run failed: " + err.str());
  if (c.ok) {
    const std::string csv1 = read_file(fs::path(cfg.out_dir) / "sweep.csv");
    const std::string json1 = read_file(fs::path(cfg.out_dir) / "sweep_summary.json");
    const int rc2 = cmd_sweep(cfg, log, err);
    c.require(rc2 == exit_ok, "second sweep run failed: " + err.str());
    if (c.ok) {
      const std::string csv2 = read_file(fs::path(cfg.out_dir) / "sweep.csv");
      const std::string json2 = read_file(fs::path(cfg.out_dir) / "sweep_summary.json");
      c.detail << " csv " << csv1.size() << " bytes, json " << json1.size() << " bytes;";
      c.require(csv1 == csv2, "sweep.csv differs between identical runs");
      c.require(json1 == json2, "sweep_summary.json differs between identical runs");
    }
  }
  return {14, "deterministic-artifacts", c.ok, 0.0, 60.0, c.detail.str()};
}

inline std::vector<CriterionResult> run(const Options& opts, const std::vector<int>& ids) {
  detail::SweepCache cache;
  std::vector<CriterionResult> out;
  for (int id : ids) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      switch (id) {
        case 1: r = criterion_1(opts); break;
        case 2: r = criterion_2(opts); break;
        case 3: r = criterion_3(opts); break;
        case 4: r = criterion_4(opts); break;
        case 5: r = criterion_5(opts); break;
        case 6: r = criterion_6(opts); break;
        case 7: r = criterion_7(opts, cache); break;
        case 8: r = criterion_8(opts); break;
        case 9: r = criterion_9(opts, cache); break;
        case 10: r = criterion_10(opts, cache); break;
        case 11: r = criterion_11(opts, cache); break;
        case 12: r = criterion_12(opts, cache); break;
        case 13: r = criterion_13(opts); break;
        case 14: r = criterion_14(opts); break;
        default: throw std::invalid_argument("acceptance::run: unknown criterion id " + std::to_string(id));
      }
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion-" + std::to_string(id);
      r.pass = false;
      r.budget = std::numeric_limits<double>::infinity();
      r.detail = std::string(" uncaught exception: ") + e.what() + ";";
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds >= r.budget) {
      r.pass = false;
      r.detail += " OVER BUDGET (" + detail::num(r.seconds) + " s >= " + detail::num(r.budget) + " s);";
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<CriterionResult> run_all(const Options& opts) {
  std::vector<int> ids;
  for (int i = 1; i <= 14; ++i) ids.push_back(i);
  return run(opts, ids);
}

inline bool report(const std::vector<CriterionResult>& results, std::ostream& os) {
  bool all = true;
  for (const CriterionResult& r : results) {
    char head[64];
    std::snprintf(head, sizeof head, "[%2d] %s %7.2fs  ", r.id, r.pass ? "PASS" : "FAIL", r.seconds);
    os << head << r.name << " --" << r.detail << "\n";
    all = all && r.pass;
  }
  os << (all ? "ACCEPTANCE: ALL PASS" : "ACCEPTANCE: FAILURES PRESENT") << "\n";
  return all;
}

}  // namespace fracneumann::acceptance
