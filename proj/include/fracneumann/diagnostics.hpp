#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fracneumann/basis.hpp"
#include "fracneumann/fractional.hpp"
#include "fracneumann/math_util.hpp"
#include "fracneumann/solver.hpp"

namespace fracneumann {

// Number of axis-aligned cubes of side sqrt(eps), anchored at the lattice
// sqrt(eps) * Z^n, that touch the superlevel set {u > eta} (sampled on the
// grid of u). Bounded cube counts as eps -> 0 witness concentration.
inline int cube_cover(const GridField& u, double eps, double eta) {
  detail::check_grid(u, "cube_cover");
  if (!(eps > 0.0)) throw std::invalid_argument("cube_cover: eps must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("cube_cover: threshold eta must be positive");
  const BasisSpec& b = *u.basis;
  const double h = std::sqrt(eps);
  std::set<std::pair<long, long>> cells;
  for (int i = 0; i < b.node_count(); ++i) {
    if (u.values[std::size_t(i)] > eta) {
      cells.emplace(long(std::floor(b.node_x(i) / h)), long(std::floor(b.node_y(i) / h)));
    }
  }
  return int(cells.size());
}

// Diameter (bounding-box diagonal) of the set {u >= frac * max u}.
inline double max_cluster_diameter(const GridField& u, double frac = 0.5) {
  detail::check_grid(u, "max_cluster_diameter");
  if (!(frac > 0.0 && frac <= 1.0)) throw std::invalid_argument("max_cluster_diameter: frac must lie in (0, 1]");
  const BasisSpec& b = *u.basis;
  double umax = -std::numeric_limits<double>::infinity();
  for (double v : u.values) umax = std::max(umax, v);
  if (!(umax > 0.0)) throw std::invalid_argument("max_cluster_diameter: field has no positive values");
  const double cut = frac * umax;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (int i = 0; i < b.node_count(); ++i) {
    if (u.values[std::size_t(i)] >= cut) {
      x_lo = std::min(x_lo, b.node_x(i));
      x_hi = std::max(x_hi, b.node_x(i));
      y_lo = std::min(y_lo, b.node_y(i));
      y_hi = std::max(y_hi, b.node_y(i));
    }
  }
  const double dx = x_hi - x_lo;
  const double dy = b.domain().kind == ModelDomain::Kind::rectangle ? y_hi - y_lo : 0.0;
  return std::sqrt(dx * dx + dy * dy);
}

// Max over a few balls of radius R = sqrt(n * eps) around the peak of the
// ratio sup/inf of u on the ball. Positive solutions obey a uniform bound.
inline double harnack_ratio(const GridField& u, double eps) {
  detail::check_grid(u, "harnack_ratio");
  if (!(eps > 0.0)) throw std::invalid_argument("harnack_ratio: eps must be positive");
  const BasisSpec& b = *u.basis;
  const ModelDomain& dom = b.domain();
  const double R = std::sqrt(dom.dimension() * eps);
  const double h = std::max(dom.lx, dom.kind == ModelDomain::Kind::rectangle ? dom.ly : 0.0) / b.grid_size();
  if (h > 0.25 * R) {
    throw std::invalid_argument("harnack_ratio: grid spacing exceeds R/4; refine the measurement grid");
  }
  int peak = 0;
  for (int i = 1; i < b.node_count(); ++i) {
    if (u.values[std::size_t(i)] > u.values[std::size_t(peak)]) peak = i;
  }
  std::vector<std::array<double, 2>> centers{{b.node_x(peak), b.node_y(peak)}};
  for (double sign : {-1.0, 1.0}) {
    const double cx = b.node_x(peak) + sign * R;
    if (cx >= 0.0 && cx <= dom.lx) centers.push_back({cx, b.node_y(peak)});
    if (dom.kind == ModelDomain::Kind::rectangle) {
      const double cy = b.node_y(peak) + sign * R;
      if (cy >= 0.0 && cy <= dom.ly) centers.push_back({b.node_x(peak), cy});
    }
  }
  double worst = 1.0;
  for (const auto& c : centers) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < b.node_count(); ++i) {
      const double dx = b.node_x(i) - c[0];
      const double dy = b.node_y(i) - c[1];
      if (dx * dx + dy * dy <= R * R) {
        lo = std::min(lo, u.values[std::size_t(i)]);
        hi = std::max(hi, u.values[std::size_t(i)]);
      }
    }
    if (!(lo > 0.0)) throw std::invalid_argument("harnack_ratio: field is not positive on a probe ball");
    worst = std::max(worst, hi / lo);
  }
  return worst;
}

// Max over t of ||S_t u||_q / (e^(c t) t^(-(n/2s)(1/p - 1/q)) ||u||_p) with
// c = 1/p - 1/q. The smoothing estimate for the spectral semigroup makes
// this ratio bounded; the constant stays O(1) for the flows probed here.
inline double ultracontractivity_check(const SpectralField& u, const FracParams& P,
                                       const std::vector<double>& times, double p, double q,
                                       SemigroupForm form = SemigroupForm::standard) {
  detail::check_spectral(u, "ultracontractivity_check");
  if (!(p >= 1.0 && q > p)) throw std::invalid_argument("ultracontractivity_check: need 1 <= p < q");
  if (times.empty()) throw std::invalid_argument("ultracontractivity_check: no probe times");
  const double n = u.basis->domain().dimension();
  const double drop = (n / (2.0 * P.s)) * (1.0 / p - 1.0 / q);
  const double growth = 1.0 / p - 1.0 / q;
  const double base = lp_norm(synthesize(u), p);
  if (!(base > 0.0)) throw std::invalid_argument("ultracontractivity_check: zero input field");
  double worst = 0.0;
  for (double t : times) {
    if (!(t > 0.0)) throw std::invalid_argument("ultracontractivity_check: probe times must be positive");
    const SpectralField ut = heat_semigroup(u, t, P, form);
    const double num = lp_norm(synthesize(ut), q);
    const double den = std::exp(growth * t) * std::pow(t, -drop) * base;
    worst = std::max(worst, num / den);
  }
  return worst;
}

struct SweepRow {
  double eps = 0.0, s = 0.0, p = 0.0;
  bool converged = false;
  Classification classification = Classification::constant;
  bool positive = false;
  double energy = 0.0;
  double l1 = 0.0, l2 = 0.0, lp1 = 0.0, linf = 0.0;
  int cube_count = 0;
  double harnack = std::numeric_limits<double>::quiet_NaN();
  double residual = 0.0;
  int iterations = 0;
  double cluster_diameter = 0.0;
  double mean_gap = 0.0;
  std::string start_label;
};

struct SweepConfig {
  ModelDomain domain = ModelDomain::interval(1.0);
  int num_modes = 128;
  int grid_size = 0;  // 0: 2 * num_modes, the minimum exact quadrature grid
  double s = 0.5;
  double p = 2.0;
  std::vector<double> eps_list;
  double eta_rel = 0.5;        // cube threshold, relative to the sup at the largest eps
  double cluster_frac = 0.5;
  int fine_grid = 0;           // 0: resolve sqrt(n * eps_min) with >= 8 nodes
  int threads = 1;
  SolverConfig solver;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double eta = 0.0;
  int fine_grid = 0;
};

// Measurement basis: same modes on a grid fine enough that concentration
// balls of radius sqrt(n * eps) hold at least eight nodes per axis.
inline BasisPtr measurement_basis(const BasisPtr& basis, double eps_min, int fine_grid = 0) {
  const ModelDomain& dom = basis->domain();
  int m = fine_grid;
  if (m <= 0) {
    if (!(eps_min > 0.0)) throw std::invalid_argument("measurement_basis: eps_min must be positive");
    const double ball = std::sqrt(dom.dimension() * eps_min);
    const double span = std::max(dom.lx, dom.kind == ModelDomain::Kind::rectangle ? dom.ly : 0.0);
    m = int(std::ceil(8.0 * span / ball));
    m = std::min(m, 1 << 15);
  }
  m = std::max(m, basis->grid_size());
  return build_basis(dom, basis->size(), m);
}

// Solves the model across eps_list (ascending) and measures each solution on
// a shared fine grid. Rows land in preassigned slots, so the output does not
// depend on the thread count.
inline SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.eps_list.empty()) throw std::invalid_argument("run_sweep: empty eps list");
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
    if (!(cfg.eps_list[i] > 0.0)) throw std::invalid_argument("run_sweep: eps values must be positive");
    if (i > 0 && !(cfg.eps_list[i] > cfg.eps_list[i - 1])) {
      throw std::invalid_argument("run_sweep: eps list must be strictly increasing");
    }
  }
  const int grid = cfg.grid_size > 0 ? cfg.grid_size : 2 * cfg.num_modes;
  const BasisPtr basis = build_basis(cfg.domain, cfg.num_modes, grid);
  const int factor = cfg.solver.oversample > 0 ? cfg.solver.oversample : (cfg.p <= 2.0 ? 2 : 3);
  const auto table = make_quad_table(basis, factor);

  const std::size_t n_rows = cfg.eps_list.size();
  std::vector<SolutionReport> reports(n_rows);
  std::vector<std::string> failures(n_rows);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < n_rows; i = next.fetch_add(1)) {
      SolverConfig sc = cfg.solver;
      sc.oversample = factor;
      sc.seed = cfg.solver.seed + 7919 * std::uint64_t(i);
      try {
        SemilinearProblem prob(basis, FracParams{cfg.eps_list[i], cfg.s}, cfg.p, factor, table);
        reports[i] = solve_mountain_pass(prob, sc);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  const int threads = std::max(1, cfg.threads);
  if (threads == 1 || n_rows == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<int>(threads, int(n_rows)); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (!failures[i].empty()) throw std::runtime_error("run_sweep: eps = " + std::to_string(cfg.eps_list[i]) + ": " + failures[i]);
  }

  SweepResult out;
  const BasisPtr fine = measurement_basis(basis, cfg.eps_list.front(), cfg.fine_grid);
  out.fine_grid = fine->grid_size();
  std::vector<GridField> fine_fields;
  fine_fields.reserve(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    fine_fields.push_back(resample(reports[i].solution, fine));
  }
  out.eta = cfg.eta_rel * lp_norm(fine_fields.back(), std::numeric_limits<double>::infinity());

  out.rows.resize(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const double eps = cfg.eps_list[i];
    const SolutionReport& rep = reports[i];
    const GridField& g = fine_fields[i];
    SweepRow& row = out.rows[i];
    row.eps = eps;
    row.s = cfg.s;
    row.p = cfg.p;
    row.converged = rep.converged;
    row.classification = rep.classification;
    row.energy = rep.energy_value;
    row.residual = rep.residual;
    row.iterations = rep.iterations;
    row.start_label = rep.start_label;
    row.l1 = lp_norm(g, 1.0);
    row.l2 = lp_norm(g, 2.0);
    row.lp1 = lp_norm(g, cfg.p + 1.0);
    row.linf = lp_norm(g, std::numeric_limits<double>::infinity());
    double gmin = std::numeric_limits<double>::infinity();
    for (double v : g.values) gmin = std::min(gmin, v);
    row.positive = gmin > 0.0;
    row.cube_count = out.eta > 0.0 ? cube_cover(g, eps, out.eta) : 0;
    row.cluster_diameter = row.linf > 0.0 ? max_cluster_diameter(g, cfg.cluster_frac) : 0.0;
    if (row.positive) {
      try {
        row.harnack = harnack_ratio(g, eps);
      } catch (const std::invalid_argument&) {
        row.harnack = std::numeric_limits<double>::quiet_NaN();
      }
    }
    SemilinearProblem prob(basis, FracParams{eps, cfg.s}, cfg.p, factor, table);
    row.mean_gap = std::abs(mean_identity_gap(rep.solution, prob));
  }
  return out;
}

struct ScalingFit {
  double energy_slope = 0.0;
  double l1_slope = 0.0;
  double l2sq_slope = 0.0;
  double nonlinear_slope = 0.0;  // slope of int u^(p+1)
  int rows_used = 0;
};

// log-log slopes against eps of the concentration observables. Spike
// solutions carry mass eps^(n/2), so every slope here approaches n/2.
inline ScalingFit fit_scaling(const std::vector<SweepRow>& rows) {
  std::vector<double> le, j, m1, m2, mp;
  for (const SweepRow& r : rows) {
    if (!r.converged || r.classification != Classification::nonconstant) continue;
    if (!(r.energy > 0.0 && r.l1 > 0.0 && r.l2 > 0.0 && r.lp1 > 0.0)) continue;
    le.push_back(std::log(r.eps));
    j.push_back(std::log(r.energy));
    m1.push_back(std::log(r.l1));
    m2.push_back(2.0 * std::log(r.l2));
    mp.push_back((r.p + 1.0) * std::log(r.lp1));
  }
  if (le.size() < 4) throw std::invalid_argument("fit_scaling: need at least 4 converged nonconstant rows");
  ScalingFit fit;
  fit.rows_used = int(le.size());
  fit.energy_slope = least_squares_slope(le, j);
  fit.l1_slope = least_squares_slope(le, m1);
  fit.l2sq_slope = least_squares_slope(le, m2);
  fit.nonlinear_slope = least_squares_slope(le, mp);
  return fit;
}

// max / median of the sup norms across converged nonconstant rows; a uniform
// L-infinity bound keeps this ratio O(1) as eps -> 0.
inline double sup_ratio(const std::vector<SweepRow>& rows) {
  std::vector<double> sups;
  for (const SweepRow& r : rows) {
    if (r.converged && r.classification == Classification::nonconstant) sups.push_back(r.linf);
  }
  if (sups.size() < 2) throw std::invalid_argument("sup_ratio: need at least 2 converged nonconstant rows");
  std::sort(sups.begin(), sups.end());
  const double median = sups[sups.size() / 2];
  return sups.back() / median;
}

}  // namespace fracneumann
