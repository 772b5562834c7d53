#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "fracneumann/solver.hpp"

using namespace fracneumann;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("trace energy and residual match hand values on constants") {
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 16, 32);
  SemilinearProblem prob(b, FracParams{0.42, 0.5}, 2.0);

  // J(c) = c^2/2 - c^3/3 on the unit interval; the fractional part vanishes.
  CHECK(energy(constant_field(b, 1.0), prob) == Catch::Approx(1.0 / 6.0).margin(1e-14));
  CHECK(energy(constant_field(b, 2.0), prob) == Catch::Approx(2.0 - 8.0 / 3.0).margin(1e-13));
  CHECK(energy(zero_field(b), prob) == 0.0);

  // J'(c) projects to c - c^2 on the mean mode: residual |2 - 4| = 2.
  CHECK(residual_norm(constant_field(b, 2.0), prob) == Catch::Approx(2.0).margin(1e-13));
  CHECK(residual_norm(constant_field(b, 1.0), prob) <= 1e-14);
  CHECK(mean_identity_gap(constant_field(b, 2.0), prob) == Catch::Approx(-2.0).margin(1e-13));
}

TEST_CASE("negative states carry no nonlinear term") {
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 8, 16);
  SemilinearProblem prob(b, FracParams{1.0, 0.5}, 2.0);
  const SpectralField u = constant_field(b, -3.0);
  CHECK(energy(u, prob) == Catch::Approx(4.5).margin(1e-14));
  // Gradient reduces to the linear part.
  const SpectralField g = gradient(u, prob);
  CHECK(g.coeffs[0] == Catch::Approx(-3.0).margin(1e-14));
  CHECK_THROWS_AS(nehari_scale(u, prob), std::invalid_argument);
}

TEST_CASE("problem construction enforces subcriticality and exponent bounds") {
  const BasisPtr line = build_basis(ModelDomain::interval(1.0), 8, 16);
  const BasisPtr square = build_basis(ModelDomain::rectangle(1.0, 1.0), 8, 16);
  CHECK_THROWS_AS(SemilinearProblem(line, FracParams{1.0, 0.5}, 1.0), std::invalid_argument);
  // n = 2, s = 1/2: critical exponent (n+2s)/(n-2s) = 3.
  CHECK_THROWS_AS(SemilinearProblem(square, FracParams{1.0, 0.5}, 3.0), std::invalid_argument);
  CHECK_NOTHROW(SemilinearProblem(square, FracParams{1.0, 0.5}, 2.9));
  // n = 1, s = 1/2: no subcritical ceiling (n = 2s).
  CHECK_NOTHROW(SemilinearProblem(line, FracParams{1.0, 0.5}, 6.0));
}

TEST_CASE("gradient agrees with finite differences of the energy") {
  std::mt19937_64 rng(5);
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 12, 24);
  for (double p : {2.0, 3.4}) {
    SemilinearProblem prob(b, FracParams{0.7, 0.45}, p);
    SpectralField u = constant_field(b, 1.1);
    SpectralField v = zero_field(b);
    for (int k = 0; k < b->size(); ++k) {
      u.coeffs[std::size_t(k)] += (uniform01(rng()) - 0.5) / (1.0 + k);
      v.coeffs[std::size_t(k)] = uniform01(rng()) - 0.5;
    }
    const double h = 1e-6;
    const double fd = (energy(axpy(h, v, u), prob) - energy(axpy(-h, v, u), prob)) / (2.0 * h);
    CHECK(fd == Catch::Approx(kahan_dot(gradient(u, prob).coeffs, v.coeffs)).epsilon(1e-6));
  }
}

TEST_CASE("nehari scaling: fixed point at the constant state and ray homogeneity") {
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 12, 24);
  SemilinearProblem prob(b, FracParams{0.5, 0.5}, 2.0);
  const SpectralField one = constant_field(b, 1.0);
  CHECK(nehari_scale(one, prob) == Catch::Approx(1.0).epsilon(1e-13));
  // t*(alpha u) = t*(u) / alpha for p = 2.
  CHECK(nehari_scale(scaled(one, 4.0), prob) == Catch::Approx(0.25).epsilon(1e-13));

  // After projection the radial derivative of the energy vanishes.
  SpectralField u = one;
  u.coeffs[2] = 0.35;
  u.coeffs[5] = -0.15;
  const SpectralField star = scaled(u, nehari_scale(u, prob));
  const double radial = kahan_dot(gradient(star, prob).coeffs, star.coeffs);
  CHECK(std::abs(radial) <= 1e-12 * eps_norm_sq(star, prob));
}

TEST_CASE("spike competitor is admissible and concentrated") {
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 64, 128);
  SemilinearProblem prob(b, FracParams{1e-3, 0.5}, 2.0);
  const GridField tent = tent_profile(prob, {0.25, 0.0});
  double mass = 0.0, peak = 0.0;
  for (double v : tent.values) {
    REQUIRE(v >= 0.0);
    mass += v;
    peak = std::max(peak, v);
  }
  // Grid sampling sits below the apex by at most the node spacing over the
  // support radius.
  CHECK(peak == Catch::Approx(std::pow(prob.P.eps, -0.5)).epsilon(0.3));
  CHECK(peak > 0.5 * std::pow(prob.P.eps, -0.5));
  CHECK(mass > 0.0);
  // Support radius sqrt(eps): nothing beyond 0.25 +- 0.04.
  for (int i = 0; i < b->node_count(); ++i) {
    if (std::abs(b->node_x(i) - 0.25) > 0.04) REQUIRE(tent.values[std::size_t(i)] == 0.0);
  }
  CHECK_THROWS_AS(tent_profile(prob, {1.5, 0.0}), std::invalid_argument);
}

TEST_CASE("newton converges quadratically near the large-diffusion constant") {
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 24, 48);
  SemilinearProblem prob(b, FracParams{60.0, 0.5}, 2.0);
  std::mt19937_64 rng(17);
  SpectralField start = constant_field(b, 1.0);
  for (int k = 1; k < b->size(); ++k) start.coeffs[std::size_t(k)] = 1e-3 * (uniform01(rng()) - 0.5);
  const SolutionReport rep = solve_newton(prob, start);
  REQUIRE(rep.converged);
  CHECK(rep.iterations <= 8);
  CHECK(rep.hessian_fallbacks == 0);
  for (std::size_t i = 1; i < rep.residual_history.size(); ++i) {
    CHECK(rep.residual_history[i] < rep.residual_history[i - 1]);
  }
  // Quadratic tail: once below 1e-4 the next step lands near the square.
  for (std::size_t i = 1; i + 1 < rep.residual_history.size(); ++i) {
    const double r = rep.residual_history[i];
    if (r < 1e-4 && r > 0.0) {
      CHECK(rep.residual_history[i + 1] <= 50.0 * r * r + 1e-14);
    }
  }
  const double dist = l2_norm_coeffs(axpy(-1.0, constant_field(b, 1.0), rep.solution));
  CHECK(dist <= 1e-10);
}

TEST_CASE("already-converged input returns immediately") {
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 8, 16);
  SemilinearProblem prob(b, FracParams{1.0, 0.5}, 2.0);
  const SolutionReport rep = solve_newton(prob, constant_field(b, 1.0));
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(rep.residual <= 1e-13);
}

TEST_CASE("small diffusion mountain pass finds the soliton-shaped ground state") {
  // At s = 1/2, p = 2 on a shrinking scale the stretched profile is
  // 2 / (1 + z^2). The least-energy state anchors at an endpoint (the even
  // reflection makes a boundary half-spike cheaper than an interior one), so
  // the domain carries half of every whole-line integral: peak 2, mass
  // pi sqrt(eps), squared mass pi sqrt(eps), cubic integral (3 pi/2)
  // sqrt(eps), and energy (pi/4) sqrt(eps).
  const double eps = 4e-4;
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 128, 256);
  SemilinearProblem prob(b, FracParams{eps, 0.5}, 2.0);
  SolverConfig cfg;
  cfg.seed = 99;
  const SolutionReport rep = solve_mountain_pass(prob, cfg);
  REQUIRE(rep.converged);
  CHECK(rep.classification == Classification::nonconstant);
  CHECK(rep.positive);
  CHECK(rep.residual <= cfg.tol);

  const double root_eps = std::sqrt(eps);
  CHECK(rep.linf == Catch::Approx(2.0).epsilon(0.05));
  CHECK(rep.l1 == Catch::Approx(pi * root_eps).epsilon(0.05));
  CHECK(rep.l2 * rep.l2 == Catch::Approx(pi * root_eps).epsilon(0.05));
  CHECK(rep.energy_value == Catch::Approx(0.25 * pi * root_eps).epsilon(0.05));
  CHECK(std::pow(rep.lp1, 3.0) == Catch::Approx(1.5 * pi * root_eps).epsilon(0.05));
  CHECK(mean_identity_gap(rep.solution, prob) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("large diffusion mountain pass collapses to the constant state") {
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 32, 64);
  SemilinearProblem prob(b, FracParams{50.0, 0.5}, 2.0);
  const SolutionReport rep = solve_mountain_pass(prob);
  REQUIRE(rep.converged);
  CHECK(rep.classification == Classification::constant);
  CHECK(rep.positive);
  CHECK(l2_norm_coeffs(axpy(-1.0, constant_field(b, 1.0), rep.solution)) <= 1e-8);
}

TEST_CASE("mountain pass is deterministic for a fixed seed") {
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 48, 96);
  SemilinearProblem prob(b, FracParams{2e-3, 0.5}, 2.0);
  SolverConfig cfg;
  cfg.seed = 1234;
  const SolutionReport a = solve_mountain_pass(prob, cfg);
  const SolutionReport c = solve_mountain_pass(prob, cfg);
  REQUIRE(a.solution.coeffs.size() == c.solution.coeffs.size());
  REQUIRE(std::memcmp(a.solution.coeffs.data(), c.solution.coeffs.data(),
                      a.solution.coeffs.size() * sizeof(double)) == 0);
  CHECK(a.start_label == c.start_label);
  CHECK(a.iterations == c.iterations);
}

TEST_CASE("classification separates constants from structured states") {
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 8, 16);
  const auto [c1, p1] = classify(constant_field(b, 2.0));
  CHECK(c1 == Classification::constant);
  CHECK(p1);
  SpectralField mode = zero_field(b);
  mode.coeffs[1] = 1.0;
  const auto [c2, p2] = classify(mode);
  CHECK(c2 == Classification::nonconstant);
  CHECK_FALSE(p2);
}

TEST_CASE("planar mountain pass produces a positive concentrated state") {
  // Enough modes that a width-sqrt(eps) bump is resolved per axis; the
  // least-energy state anchors at a corner of the square. Tighter eps needs
  // more modes before the truncation ringing stops crossing zero.
  const BasisPtr b = build_basis(ModelDomain::rectangle(1.0, 1.0), 256, 80);
  SemilinearProblem prob(b, FracParams{2e-2, 0.5}, 2.0);
  SolverConfig cfg;
  cfg.descent_max_iter = 2000;
  const SolutionReport rep = solve_mountain_pass(prob, cfg);
  REQUIRE(rep.converged);
  CHECK(rep.classification == Classification::nonconstant);
  CHECK(rep.positive);
  CHECK(rep.energy_value > 0.0);
  CHECK(rep.linf > 1.0);
}
