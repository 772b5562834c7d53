#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "fracneumann/basis.hpp"
#include "fracneumann/math_util.hpp"

using namespace fracneumann;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("interval eigenpairs match the closed forms") {
  const double L = 2.5;
  const BasisPtr b = build_basis(ModelDomain::interval(L), 12, 32);
  REQUIRE(b->lambda(0) == 0.0);
  for (int k = 1; k < b->size(); ++k) {
    const double want = (k * pi / L) * (k * pi / L);
    CHECK(b->lambda(k) == Catch::Approx(want).epsilon(1e-15));
    CHECK(b->lambda(k) > b->lambda(k - 1));
  }
  // Mode 0 is the normalized constant; mode k has sup sqrt(2/L).
  CHECK(b->mode_value(0, 3) == Catch::Approx(1.0 / std::sqrt(L)).epsilon(1e-15));
  CHECK(b->eval_mode(1, 0.0, 0.0) == Catch::Approx(std::sqrt(2.0 / L)).epsilon(1e-15));
}

TEST_CASE("midpoint quadrature reproduces the identity Gram matrix") {
  for (const ModelDomain& dom : {ModelDomain::interval(1.0), ModelDomain::interval(0.7),
                                 ModelDomain::rectangle(1.0, 1.3)}) {
    const BasisPtr b = build_basis(dom, 16, 40);
    double worst = 0.0;
    for (int j = 0; j < b->size(); ++j) {
      for (int k = j; k < b->size(); ++k) {
        KahanAccumulator acc;
        for (int i = 0; i < b->node_count(); ++i) acc.add(b->mode_value(j, i) * b->mode_value(k, i));
        const double g = b->node_weight() * acc.value();
        worst = std::max(worst, std::abs(g - (j == k ? 1.0 : 0.0)));
      }
    }
    INFO("domain lx " << dom.lx);
    CHECK(worst <= 1e-14);
  }
}

TEST_CASE("grids too coarse for exact mode quadrature are rejected") {
  // K modes on an interval reach axis index K-1 and need 2K midpoint nodes.
  CHECK_THROWS_AS(build_basis(ModelDomain::interval(1.0), 8, 15), std::invalid_argument);
  CHECK_NOTHROW(build_basis(ModelDomain::interval(1.0), 8, 16));
}

TEST_CASE("rectangle modes come sorted by eigenvalue with lexicographic ties") {
  const BasisPtr b = build_basis(ModelDomain::rectangle(1.0, 1.0), 8, 16);
  // Unit square: lambda = pi^2 (kx^2 + ky^2); ties resolved by (kx, ky).
  const std::vector<std::pair<int, int>> want{{0, 0}, {0, 1}, {1, 0}, {1, 1},
                                              {0, 2}, {2, 0}, {1, 2}, {2, 1}};
  for (int k = 0; k < b->size(); ++k) {
    CHECK(b->mode(k).kx == want[std::size_t(k)].first);
    CHECK(b->mode(k).ky == want[std::size_t(k)].second);
    if (k > 0) CHECK(b->lambda(k) >= b->lambda(k - 1));
    const auto [kx, ky] = want[std::size_t(k)];
    CHECK(b->lambda(k) == Catch::Approx(pi * pi * (kx * kx + ky * ky)).margin(1e-12));
  }
}

TEST_CASE("analyze inverts synthesize on the quadrature grid") {
  std::mt19937_64 rng(7);
  for (const ModelDomain& dom : {ModelDomain::interval(1.0), ModelDomain::rectangle(0.8, 1.1)}) {
    const BasisPtr b = build_basis(dom, 14, 32);
    SpectralField u = zero_field(b);
    for (double& c : u.coeffs) c = 2.0 * uniform01(rng()) - 1.0;
    const SpectralField back = analyze(synthesize(u));
    for (int k = 0; k < b->size(); ++k) {
      CHECK(back.coeffs[std::size_t(k)] == Catch::Approx(u.coeffs[std::size_t(k)]).margin(1e-14));
    }
  }
}

TEST_CASE("grid L2 norm agrees with the coefficient norm") {
  // Squares of a degree K-1 expansion stay exactly integrable on a 2K grid.
  std::mt19937_64 rng(11);
  const BasisPtr b = build_basis(ModelDomain::interval(1.4), 20, 40);
  SpectralField u = zero_field(b);
  for (double& c : u.coeffs) c = 2.0 * uniform01(rng()) - 1.0;
  CHECK(lp_norm(synthesize(u), 2.0) == Catch::Approx(l2_norm_coeffs(u)).epsilon(1e-13));
}

TEST_CASE("constant_field carries the right mean and norms") {
  const BasisPtr b = build_basis(ModelDomain::rectangle(2.0, 0.5), 10, 24);
  const SpectralField u = constant_field(b, 3.0);
  CHECK(u.coeffs[0] == Catch::Approx(3.0 * std::sqrt(b->domain().measure())).epsilon(1e-15));
  const GridField g = synthesize(u);
  for (double v : g.values) REQUIRE(v == Catch::Approx(3.0).epsilon(1e-14));
  CHECK(lp_norm(g, 1.0) == Catch::Approx(3.0 * b->domain().measure()).epsilon(1e-13));
}

TEST_CASE("resample preserves coefficients on a finer grid") {
  std::mt19937_64 rng(23);
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 12, 24);
  const BasisPtr fine = build_basis(ModelDomain::interval(1.0), 12, 96);
  SpectralField u = zero_field(b);
  for (double& c : u.coeffs) c = 2.0 * uniform01(rng()) - 1.0;
  const GridField g = resample(u, fine);
  REQUIRE(g.basis == fine);
  const SpectralField back = analyze(g);
  for (int k = 0; k < b->size(); ++k) {
    CHECK(back.coeffs[std::size_t(k)] == Catch::Approx(u.coeffs[std::size_t(k)]).margin(1e-13));
  }
  const BasisPtr other = build_basis(ModelDomain::interval(2.0), 12, 96);
  CHECK_THROWS_AS(resample(u, other), std::invalid_argument);
}

TEST_CASE("domain and basis constructors validate their inputs") {
  CHECK_THROWS_AS(ModelDomain::interval(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelDomain::rectangle(1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(ModelDomain::interval(1.0), 0, 8), std::invalid_argument);
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 4, 8);
  CHECK_THROWS_AS(lp_norm(synthesize(constant_field(b, 1.0)), 0.5), std::invalid_argument);
}
