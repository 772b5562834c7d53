#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracneumann/basis.hpp"
#include "fracneumann/fractional.hpp"
#include "fracneumann/math_util.hpp"

namespace fracneumann {

// Dealiased evaluation grid for the nonlinearity: a finer midpoint grid over
// the same domain plus the mode values there.
struct QuadTable {
  int factor = 2;
  int nodes = 0;
  double weight = 0.0;
  std::vector<double> x, y;
  std::vector<double> phi;  // K x nodes, mode-major
};

inline std::shared_ptr<const QuadTable> make_quad_table(const BasisPtr& basis, int factor) {
  if (factor < 2) throw std::invalid_argument("make_quad_table: oversampling factor must be >= 2");
  const BasisSpec& b = *basis;
  const ModelDomain& dom = b.domain();
  auto table = std::make_shared<QuadTable>();
  table->factor = factor;
  const int m = b.grid_size() * factor;
  if (dom.kind == ModelDomain::Kind::interval) {
    table->nodes = m;
    table->weight = dom.lx / m;
    table->x.resize(m);
    for (int i = 0; i < m; ++i) table->x[i] = (i + 0.5) * dom.lx / m;
  } else {
    table->nodes = m * m;
    table->weight = dom.lx * dom.ly / (double(m) * m);
    table->x.resize(std::size_t(m) * m);
    table->y.resize(std::size_t(m) * m);
    for (int iy = 0; iy < m; ++iy) {
      for (int ix = 0; ix < m; ++ix) {
        table->x[std::size_t(iy) * m + ix] = (ix + 0.5) * dom.lx / m;
        table->y[std::size_t(iy) * m + ix] = (iy + 0.5) * dom.ly / m;
      }
    }
  }
  table->phi.resize(std::size_t(b.size()) * table->nodes);
  for (int k = 0; k < b.size(); ++k) {
    for (int i = 0; i < table->nodes; ++i) {
      table->phi[std::size_t(k) * table->nodes + i] =
          b.eval_mode(k, table->x[i], table->y.empty() ? 0.0 : table->y[i]);
    }
  }
  return table;
}

// Semilinear problem (-eps Laplacian_N)^s u + u = u_+^p posed on a basis.
// Subcritical exponents only: p < (n + 2s)/(n - 2s) whenever n > 2s.
struct SemilinearProblem {
  BasisPtr basis;
  FracParams P;
  double p = 2.0;
  std::shared_ptr<const QuadTable> nl;
  std::vector<double> mu;  // (eps lambda_k)^s

  SemilinearProblem(BasisPtr basis_, FracParams P_, double p_, int oversample = 0,
                    std::shared_ptr<const QuadTable> table = nullptr)
      : basis(std::move(basis_)), P(P_), p(p_) {
    if (!basis) throw std::invalid_argument("SemilinearProblem: no basis");
    if (!(p > 1.0)) throw std::invalid_argument("SemilinearProblem: exponent p must exceed 1");
    const double n = basis->domain().dimension();
    if (n > 2.0 * P.s) {
      const double p_crit = (n + 2.0 * P.s) / (n - 2.0 * P.s);
      if (!(p < p_crit)) {
        throw std::invalid_argument("SemilinearProblem: p = " + std::to_string(p) +
                                    " is not subcritical (limit " + std::to_string(p_crit) + ")");
      }
    }
    const int factor = oversample > 0 ? oversample : (p <= 2.0 ? 2 : 3);
    if (factor < 2) throw std::invalid_argument("SemilinearProblem: oversampling factor must be >= 2");
    nl = table && table->factor == factor ? table : make_quad_table(basis, factor);
    mu.resize(std::size_t(basis->size()));
    for (int k = 0; k < basis->size(); ++k) mu[std::size_t(k)] = frac_power(P, basis->lambda(k));
  }
};

namespace detail {

inline void check_problem_field(const SemilinearProblem& prob, const SpectralField& u, const char* where) {
  check_spectral(u, where);
  if (u.basis != prob.basis) throw std::invalid_argument(std::string(where) + ": field basis differs from problem basis");
}

// u on the dealiased grid.
inline std::vector<double> synth_dealiased(const SemilinearProblem& prob, const SpectralField& u) {
  const QuadTable& t = *prob.nl;
  std::vector<double> v(std::size_t(t.nodes), 0.0);
  for (int k = 0; k < prob.basis->size(); ++k) {
    const double c = u.coeffs[std::size_t(k)];
    if (c == 0.0) continue;
    const double* row = t.phi.data() + std::size_t(k) * t.nodes;
    for (int i = 0; i < t.nodes; ++i) v[std::size_t(i)] += c * row[i];
  }
  return v;
}

inline double positive_part_integral(const SemilinearProblem& prob, const std::vector<double>& v, double power) {
  KahanAccumulator acc;
  for (double x : v) {
    if (x > 0.0) acc.add(std::pow(x, power));
  }
  return prob.nl->weight * acc.value();
}

}  // namespace detail

// J(u) = 1/2 sum (eps lambda_k)^s u_k^2 + 1/2 ||u||_2^2 - 1/(p+1) int u_+^(p+1)
inline double energy(const SpectralField& u, const SemilinearProblem& prob) {
  detail::check_problem_field(prob, u, "energy");
  KahanAccumulator quad;
  for (std::size_t k = 0; k < u.coeffs.size(); ++k) quad.add((prob.mu[k] + 1.0) * u.coeffs[k] * u.coeffs[k]);
  const auto v = detail::synth_dealiased(prob, u);
  const double nl = detail::positive_part_integral(prob, v, prob.p + 1.0);
  return 0.5 * quad.value() - nl / (prob.p + 1.0);
}

// ||u||_eps^2 = sum ((eps lambda_k)^s + 1) u_k^2
inline double eps_norm_sq(const SpectralField& u, const SemilinearProblem& prob) {
  detail::check_problem_field(prob, u, "eps_norm_sq");
  KahanAccumulator acc;
  for (std::size_t k = 0; k < u.coeffs.size(); ++k) acc.add((prob.mu[k] + 1.0) * u.coeffs[k] * u.coeffs[k]);
  return acc.value();
}

// Coefficients of J'(u): ((eps lambda_k)^s + 1) u_k - <u_+^p, phi_k>
inline SpectralField gradient(const SpectralField& u, const SemilinearProblem& prob) {
  detail::check_problem_field(prob, u, "gradient");
  const QuadTable& t = *prob.nl;
  auto v = detail::synth_dealiased(prob, u);
  for (double& x : v) x = x > 0.0 ? std::pow(x, prob.p) : 0.0;
  SpectralField g{u.basis, std::vector<double>(u.coeffs.size())};
  for (int k = 0; k < prob.basis->size(); ++k) {
    KahanAccumulator acc;
    const double* row = t.phi.data() + std::size_t(k) * t.nodes;
    for (int i = 0; i < t.nodes; ++i) acc.add(row[i] * v[std::size_t(i)]);
    g.coeffs[std::size_t(k)] = (prob.mu[std::size_t(k)] + 1.0) * u.coeffs[std::size_t(k)] - t.weight * acc.value();
  }
  return g;
}

inline double residual_norm(const SpectralField& u, const SemilinearProblem& prob) {
  return l2_norm_coeffs(gradient(u, prob));
}

// int u dx - int u_+^p dx; vanishes at critical points (constants test the
// equation).
inline double mean_identity_gap(const SpectralField& u, const SemilinearProblem& prob) {
  detail::check_problem_field(prob, u, "mean_identity_gap");
  auto v = detail::synth_dealiased(prob, u);
  const double nonlinear = detail::positive_part_integral(prob, v, prob.p);
  const double mean = u.coeffs[0] * std::sqrt(prob.basis->domain().measure());
  return mean - nonlinear;
}

// Tent of height eps^(-n/2) supported on the ball |x - center| < sqrt(eps),
// sampled on the basis grid.
inline GridField tent_profile(const SemilinearProblem& prob, std::array<double, 2> center) {
  const BasisSpec& b = *prob.basis;
  const ModelDomain& dom = b.domain();
  if (center[0] < 0.0 || center[0] > dom.lx ||
      (dom.kind == ModelDomain::Kind::rectangle && (center[1] < 0.0 || center[1] > dom.ly))) {
    throw std::invalid_argument("tent_profile: center outside the domain closure");
  }
  const double r = std::sqrt(prob.P.eps);
  const double height = std::pow(prob.P.eps, -0.5 * dom.dimension());
  GridField g{prob.basis, std::vector<double>(std::size_t(b.node_count()), 0.0)};
  for (int i = 0; i < b.node_count(); ++i) {
    const double dx = b.node_x(i) - center[0];
    const double dy = dom.kind == ModelDomain::Kind::rectangle ? b.node_y(i) - center[1] : 0.0;
    const double dist = std::sqrt(dx * dx + dy * dy);
    if (dist < r) g.values[std::size_t(i)] = height * (1.0 - dist / r);
  }
  return g;
}

// Spectral projection of the tent; the standard concentration competitor.
inline SpectralField spike_competitor(const SemilinearProblem& prob, std::array<double, 2> center) {
  return analyze(tent_profile(prob, center));
}

inline SpectralField spike_competitor(const SemilinearProblem& prob) {
  const ModelDomain& dom = prob.basis->domain();
  return spike_competitor(prob, {0.25 * dom.lx, 0.25 * dom.ly});
}

// t* = (||u||_eps^2 / int u_+^(p+1))^(1/(p-1)); scales u onto the Nehari set.
inline double nehari_scale(const SpectralField& u, const SemilinearProblem& prob) {
  detail::check_problem_field(prob, u, "nehari_scale");
  const auto v = detail::synth_dealiased(prob, u);
  const double nl = detail::positive_part_integral(prob, v, prob.p + 1.0);
  if (!(nl > 0.0)) throw std::invalid_argument("nehari_scale: nonpositive nonlinear integral; scaling undefined");
  return std::pow(eps_norm_sq(u, prob) / nl, 1.0 / (prob.p - 1.0));
}

enum class Classification { constant, nonconstant };

inline const char* to_string(Classification c) {
  return c == Classification::constant ? "constant" : "nonconstant";
}

// Constant iff the nonconstant coefficient mass stays below tau * ||u||.
inline std::pair<Classification, bool> classify(const SpectralField& u, double tau = 1e-3) {
  detail::check_spectral(u, "classify");
  KahanAccumulator dev;
  for (std::size_t k = 1; k < u.coeffs.size(); ++k) dev.add(u.coeffs[k] * u.coeffs[k]);
  const double norm = l2_norm_coeffs(u);
  const bool nonconstant = norm > 0.0 && std::sqrt(dev.value()) > tau * norm;
  const GridField g = synthesize(u);
  double min_value = std::numeric_limits<double>::infinity();
  for (double v : g.values) min_value = std::min(min_value, v);
  return {nonconstant ? Classification::nonconstant : Classification::constant, min_value > 0.0};
}

struct SolverConfig {
  double tol = 1e-10;             // final residual target
  int newton_max_iter = 80;
  int descent_max_iter = 4000;
  double descent_tol = 1e-5;      // hand over to Newton below this residual
  double descent_step = 0.2;      // initial step, relative to ||u||
  int oversample = 0;             // 0: 2 for p <= 2, else 3
  double tau = 1e-3;              // classification threshold
  int multistart = 3;             // random perturbed-constant starts
  double perturb_amp = 1e-2;
  std::uint64_t seed = 12345;
  std::array<double, 2> spike_centers_rel = {0.25, 0.05};  // interior, near-boundary
};

struct SolutionReport {
  SpectralField solution;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  double energy_value = 0.0;
  Classification classification = Classification::constant;
  bool positive = false;
  double l1 = 0.0, l2 = 0.0, lp1 = 0.0, linf = 0.0;
  int hessian_fallbacks = 0;
  std::vector<double> residual_history;
  std::string start_label;
};

namespace detail {

inline void fill_report_metrics(SolutionReport& rep, const SemilinearProblem& prob, double tau) {
  const GridField g = synthesize(rep.solution);
  rep.l1 = lp_norm(g, 1.0);
  rep.l2 = lp_norm(g, 2.0);
  rep.lp1 = lp_norm(g, prob.p + 1.0);
  rep.linf = lp_norm(g, std::numeric_limits<double>::infinity());
  const auto [cls, pos] = classify(rep.solution, tau);
  rep.classification = cls;
  rep.positive = pos;
  rep.energy_value = energy(rep.solution, prob);
}

}  // namespace detail

// Energy descent along the Nehari set: scale onto the set, step against the
// gradient, rescale. On the set the radial gradient component vanishes, so
// the full residual is driven down until Newton can take over.
struct DescentResult {
  SpectralField u;
  int iterations = 0;
  double residual = 0.0;
};

inline DescentResult nehari_descent(const SemilinearProblem& prob, const SpectralField& start,
                                    const SolverConfig& cfg) {
  detail::check_problem_field(prob, start, "nehari_descent");
  SpectralField u = scaled(start, nehari_scale(start, prob));  // throws on degenerate starts
  double J = energy(u, prob);
  DescentResult out{u, 0, residual_norm(u, prob)};
  for (int it = 0; it < cfg.descent_max_iter; ++it) {
    SpectralField g = gradient(u, prob);
    const double r = l2_norm_coeffs(g);
    out.iterations = it;
    out.residual = r;
    if (r <= cfg.descent_tol) break;
    const double unorm = l2_norm_coeffs(u);
    double step = cfg.descent_step * unorm;
    bool accepted = false;
    for (int bt = 0; bt < 40 && !accepted; ++bt) {
      SpectralField trial = axpy(-step / r, g, u);
      double tstar;
      try {
        tstar = nehari_scale(trial, prob);
      } catch (const std::invalid_argument&) {
        step *= 0.5;
        continue;
      }
      trial = scaled(trial, tstar);
      const double Jt = energy(trial, prob);
      if (Jt < J - 1e-15 * std::abs(J)) {
        u = std::move(trial);
        J = Jt;
        accepted = true;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) {
      out.u = u;
      out.residual = residual_norm(u, prob);
      return out;  // stalled; caller polishes with Newton
    }
  }
  out.u = u;
  out.residual = residual_norm(u, prob);
  return out;
}

namespace detail {

inline Eigen::MatrixXd hessian(const SemilinearProblem& prob, const SpectralField& u) {
  const QuadTable& t = *prob.nl;
  const int K = prob.basis->size();
  auto v = synth_dealiased(prob, u);
  Eigen::VectorXd d(t.nodes);
  for (int i = 0; i < t.nodes; ++i) {
    const double x = v[std::size_t(i)];
    d[i] = x > 0.0 ? t.weight * std::pow(x, prob.p - 1.0) : 0.0;
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> phi(t.phi.data(), K,
                                                                                               t.nodes);
  Eigen::MatrixXd H = -prob.p * (phi * d.asDiagonal() * phi.transpose());
  for (int k = 0; k < K; ++k) H(k, k) += prob.mu[std::size_t(k)] + 1.0;
  return H;
}

}  // namespace detail

// Damped Newton iteration on J'(u) = 0. A singular or useless Hessian step
// falls back to a safeguarded gradient step and is counted in the report.
inline SolutionReport solve_newton(const SemilinearProblem& prob, const SpectralField& start,
                                   const SolverConfig& cfg = {}) {
  detail::check_problem_field(prob, start, "solve_newton");
  SolutionReport rep;
  rep.solution = start;
  SpectralField u = start;
  const int K = prob.basis->size();
  for (int it = 0; it <= cfg.newton_max_iter; ++it) {
    SpectralField g = gradient(u, prob);
    const double r = l2_norm_coeffs(g);
    rep.residual_history.push_back(r);
    rep.iterations = it;
    rep.residual = r;
    if (r <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (it == cfg.newton_max_iter) break;

    Eigen::Map<const Eigen::VectorXd> gv(g.coeffs.data(), K);
    Eigen::MatrixXd H = detail::hessian(prob, u);
    Eigen::VectorXd delta = H.partialPivLu().solve(-gv);
    bool useful = delta.allFinite();
    if (useful) {
      const double hdg = (H * delta + gv).norm();
      useful = hdg <= 1e-8 * (gv.norm() + 1.0);
    }
    if (!useful) {
      ++rep.hessian_fallbacks;
      delta = -gv;  // gradient direction, scaled by the line search below
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 50; ++bt) {
      SpectralField trial = u;
      for (int k = 0; k < K; ++k) trial.coeffs[std::size_t(k)] += alpha * delta[k];
      if (residual_norm(trial, prob) < r * (1.0 - 1e-4 * alpha)) {
        u = std::move(trial);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // no progress; report the last residual
  }
  rep.solution = u;
  detail::fill_report_metrics(rep, prob, cfg.tau);
  return rep;
}

// Spike tents at the configured centers plus random small perturbations of
// the constant state; the standard start set for the mountain-pass search.
inline std::vector<std::pair<SpectralField, std::string>> mountain_pass_starts(const SemilinearProblem& prob,
                                                                               const SolverConfig& cfg = {}) {
  const ModelDomain& dom = prob.basis->domain();
  const int K = prob.basis->size();
  std::vector<std::pair<SpectralField, std::string>> starts;
  for (double rel : cfg.spike_centers_rel) {
    starts.emplace_back(spike_competitor(prob, {rel * dom.lx, rel * dom.ly}),
                        "spike@" + std::to_string(rel));
  }
  for (int i = 0; i < cfg.multistart; ++i) {
    std::mt19937_64 rng(cfg.seed + std::uint64_t(i));
    SpectralField u = constant_field(prob.basis, 1.0);
    for (int k = 1; k < std::min(K, 9); ++k) {
      u.coeffs[std::size_t(k)] += cfg.perturb_amp * (2.0 * uniform01(rng()) - 1.0);
    }
    starts.emplace_back(std::move(u), "perturbed-constant#" + std::to_string(i));
  }
  return starts;
}

// Nehari descent followed by Newton polish from a single start.
inline SolutionReport solve_from_start(const SemilinearProblem& prob, const SpectralField& start,
                                       const SolverConfig& cfg = {}) {
  const DescentResult d = nehari_descent(prob, start, cfg);
  SolutionReport rep = solve_newton(prob, d.u, cfg);
  rep.iterations += d.iterations;
  return rep;
}

// Mountain-pass search: Nehari descent from spike and perturbed-constant
// starts, Newton polish, lowest-energy converged candidate wins. Divergence
// is reported through the converged flag, never silently.
inline SolutionReport solve_mountain_pass(const SemilinearProblem& prob, const SolverConfig& cfg = {}) {
  SolutionReport best;
  bool have_best = false;
  for (auto& [start, label] : mountain_pass_starts(prob, cfg)) {
    SolutionReport cand;
    try {
      cand = solve_from_start(prob, start, cfg);
      cand.start_label = label;
    } catch (const std::invalid_argument&) {
      continue;  // degenerate start
    }
    if (!have_best) {
      best = cand;
      have_best = true;
      continue;
    }
    const bool better = cand.converged != best.converged
                            ? cand.converged
                            : (cand.converged ? cand.energy_value < best.energy_value
                                              : cand.residual < best.residual);
    if (better) best = cand;
  }
  if (!have_best) throw std::invalid_argument("solve_mountain_pass: no admissible start");
  return best;
}

}  // namespace fracneumann
