#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fracneumann/basis.hpp"
#include "fracneumann/fractional.hpp"

using namespace fracneumann;

TEST_CASE("fractional symbol matches pow and kills the kernel mode") {
  CHECK(frac_power(FracParams{1.0, 0.5}, 0.0) == 0.0);
  CHECK(frac_power(FracParams{1e-9, 0.3}, 0.0) == 0.0);
  for (double eps : {1e-6, 0.37, 1.0, 250.0}) {
    for (double s : {0.1, 0.5, 0.9}) {
      for (double lam : {1e-8, 1.0, 9.8696, 1e7}) {
        CHECK(frac_power(FracParams{eps, s}, lam) ==
              Catch::Approx(std::pow(eps * lam, s)).epsilon(1e-14));
      }
    }
  }
  CHECK_THROWS_AS(FracParams(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(FracParams(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FracParams(0.0, 0.5), std::invalid_argument);
}

TEST_CASE("resolvent solves the shifted linear equation") {
  std::mt19937_64 rng(41);
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 16, 32);
  const FracParams P{0.8, 0.6};
  SpectralField f = zero_field(b);
  for (double& c : f.coeffs) c = 2.0 * uniform01(rng()) - 1.0;
  const SpectralField u = resolvent(f, P);
  // (eps L)^s u + u must give back f, coefficient by coefficient.
  const SpectralField lhs = axpy(1.0, apply_frac(u, P), u);
  for (int k = 0; k < b->size(); ++k) {
    CHECK(lhs.coeffs[std::size_t(k)] == Catch::Approx(f.coeffs[std::size_t(k)]).epsilon(1e-14));
  }
  // The mean passes through untouched: the symbol vanishes at lambda = 0.
  CHECK(u.coeffs[0] == f.coeffs[0]);
}

TEST_CASE("seminorm is the spectral quadratic form") {
  const BasisPtr b = build_basis(ModelDomain::interval(2.0), 8, 16);
  const FracParams P{2.0, 0.25};
  SpectralField u = zero_field(b);
  u.coeffs[0] = 5.0;  // no contribution
  u.coeffs[3] = 2.0;
  u.coeffs[5] = -1.0;
  const double want = std::pow(P.eps * b->lambda(3), P.s) * 4.0 + std::pow(P.eps * b->lambda(5), P.s);
  CHECK(frac_seminorm_sq(u, P) == Catch::Approx(want).epsilon(1e-14));
}

TEST_CASE("heat semigroup: identity at t=0, composition, decay") {
  std::mt19937_64 rng(43);
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 12, 24);
  const FracParams P{1.3, 0.4};
  SpectralField u = zero_field(b);
  for (double& c : u.coeffs) c = 2.0 * uniform01(rng()) - 1.0;

  const SpectralField u0 = heat_semigroup(u, 0.0, P);
  for (std::size_t k = 0; k < u.coeffs.size(); ++k) CHECK(u0.coeffs[k] == u.coeffs[k]);

  const SpectralField two_step = heat_semigroup(heat_semigroup(u, 0.3, P), 1.1, P);
  const SpectralField one_step = heat_semigroup(u, 1.4, P);
  for (std::size_t k = 0; k < u.coeffs.size(); ++k) {
    CHECK(two_step.coeffs[k] == Catch::Approx(one_step.coeffs[k]).epsilon(1e-13).margin(1e-300));
  }

  double prev = frac_seminorm_sq(u, P);
  for (double t : {0.1, 1.0, 10.0}) {
    const double cur = frac_seminorm_sq(heat_semigroup(u, t, P), P);
    CHECK(cur <= prev * (1.0 + 1e-15));
    prev = cur;
  }
  CHECK_THROWS_AS(heat_semigroup(u, -0.1, P), std::invalid_argument);
}

TEST_CASE("quadratic-time flow equals the standard flow at squared time and breaks the law") {
  const BasisPtr b = build_basis(ModelDomain::interval(1.0), 8, 16);
  const FracParams P{1.0, 0.5};
  SpectralField u = zero_field(b);
  for (int k = 0; k < b->size(); ++k) u.coeffs[std::size_t(k)] = 1.0 / (1.0 + k);

  const double t = 0.7;
  const SpectralField quad = heat_semigroup(u, t, P, SemigroupForm::quadratic_time);
  const SpectralField std_sq = heat_semigroup(u, t * t, P, SemigroupForm::standard);
  for (std::size_t k = 0; k < u.coeffs.size(); ++k) {
    CHECK(quad.coeffs[k] == Catch::Approx(std_sq.coeffs[k]).epsilon(1e-14));
  }

  // The alternative time parametrization is not a semigroup: composing two
  // quadratic-time steps does not match a single combined step.
  const SpectralField comp =
      heat_semigroup(heat_semigroup(u, 0.3, P, SemigroupForm::quadratic_time), 0.4, P,
                     SemigroupForm::quadratic_time);
  const SpectralField once = heat_semigroup(u, 0.7, P, SemigroupForm::quadratic_time);
  double diff = 0.0;
  for (std::size_t k = 0; k < u.coeffs.size(); ++k) diff = std::max(diff, std::abs(comp.coeffs[k] - once.coeffs[k]));
  CHECK(diff > 1e-3);
}
