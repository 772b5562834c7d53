#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fracneumann/extension.hpp"
#include "fracneumann/profile.hpp"

using namespace fracneumann;

namespace {

BasisPtr small_basis() { return build_basis(ModelDomain::interval(1.0), 12, 64); }

}  // namespace

TEST_CASE("extension trace equals the boundary field and modes damp by the kernel") {
  const BasisPtr b = small_basis();
  const FracParams P{0.5, 0.35};
  SpectralField u = zero_field(b);
  u.coeffs[2] = 1.5;
  u.coeffs[7] = -0.4;
  const std::vector<double> ygrid = default_extension_ygrid(*b, P, 120);
  const ExtensionField U = extend(u, P, ygrid);

  const GridField trace = synthesize(u);
  for (int i = 0; i < b->node_count(); ++i) {
    REQUIRE(U.values[std::size_t(i)] == trace.values[std::size_t(i)]);
  }

  // Row at depth y_j: each mode multiplied by rho(sqrt(eps lambda_k) y_j).
  const std::size_t j = ygrid.size() / 3;
  for (int i = 0; i < b->node_count(); ++i) {
    const double want =
        1.5 * rho_eval(std::sqrt(P.eps * b->lambda(2)) * ygrid[j], P.s) * b->mode_value(2, i) +
        -0.4 * rho_eval(std::sqrt(P.eps * b->lambda(7)) * ygrid[j], P.s) * b->mode_value(7, i);
    CHECK(U.values[j * std::size_t(b->node_count()) + std::size_t(i)] ==
          Catch::Approx(want).margin(1e-13));
  }

  // The constant mode never decays.
  const SpectralField c = constant_field(b, 2.0);
  const ExtensionField Uc = extend(c, P, ygrid);
  for (double v : Uc.values) REQUIRE(v == Catch::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("default extension grid is geometric, starts at zero, reaches the slow-mode scale") {
  const BasisPtr b = small_basis();
  const FracParams P{0.3, 0.6};
  const std::vector<double> y = default_extension_ygrid(*b, P, 200);
  REQUIRE(y.size() == 200);
  REQUIRE(y.front() == 0.0);
  for (std::size_t i = 1; i < y.size(); ++i) REQUIRE(y[i] > y[i - 1]);
  CHECK(y.back() == Catch::Approx(20.0 / std::sqrt(P.eps * b->lambda(1))).epsilon(1e-12));
  CHECK_THROWS_AS(default_extension_ygrid(*b, P, 4), std::invalid_argument);
}

TEST_CASE("flux map scales the fractional action by the derivative-limit constant") {
  const BasisPtr b = small_basis();
  const FracParams P{2.0, 0.7};
  SpectralField u = zero_field(b);
  for (int k = 0; k < b->size(); ++k) u.coeffs[std::size_t(k)] = 1.0 / (1.0 + k * k);
  const SpectralField flux = dtn_map(u, P);
  const double cs = cs_constant(P.s);
  for (int k = 0; k < b->size(); ++k) {
    const double want = cs * frac_power(P, b->lambda(k)) * u.coeffs[std::size_t(k)];
    CHECK(flux.coeffs[std::size_t(k)] == Catch::Approx(want).margin(1e-15));
  }
}

TEST_CASE("weighted normal derivative of the extension recovers the flux coefficients") {
  // -y^a d/dy of a single-mode extension, evaluated near y = 0, approaches
  // c_s (eps lambda_k)^s; the indicial correction decays like (my)^(2-2s).
  const BasisPtr b = small_basis();
  for (double s : {0.4, 0.75}) {
    const FracParams P{1.0, s};
    const int k = 3;
    const double m = std::sqrt(P.eps * b->lambda(k));
    const double t1 = 1e-4, t2 = 2e-4;  // kernel arguments near the boundary
    // (rho(t2) - rho(t1)) / (y2 - y1) with the weight at the midpoint in t^a.
    const double y1 = t1 / m, y2 = t2 / m;
    const double slope = (rho_eval(t2, s) - rho_eval(t1, s)) / (y2 - y1);
    // For rho ~ 1 - kappa t^(2s), the weighted derivative uses the exact
    // moment of t^(2s-1): average value over [t1, t2] matches mid^a scaling.
    const double tm = 0.5 * (t1 + t2);
    const double flux_est = -std::pow(tm / m, P.weight_exponent()) * slope;
    const double want = cs_constant(s) * frac_power(P, b->lambda(k));
    CHECK(flux_est == Catch::Approx(want).epsilon(0.05));
  }
}

TEST_CASE("cylinder energy matches the spectral trace energy for single modes") {
  const BasisPtr b = small_basis();
  for (double s : {0.3, 0.5, 0.8}) {
    const FracParams P{1.0, s};
    const double Cs = trace_constant_Cs(s);
    for (int k : {1, 4, 9}) {
      SpectralField u = zero_field(b);
      u.coeffs[std::size_t(k)] = 1.0;
      const ExtensionField U = extend(u, P);
      const double got = cylinder_energy(U, P, false);
      const double want = 0.5 * Cs * frac_power(P, b->lambda(k));
      INFO("s " << s << " mode " << k);
      CHECK(got == Catch::Approx(want).epsilon(1e-4));
    }
  }
}

TEST_CASE("the kernel profile minimizes the cylinder energy over damping profiles") {
  const BasisPtr b = small_basis();
  const FracParams P{1.0, 0.4};
  SpectralField u = zero_field(b);
  u.coeffs[1] = 1.0;
  u.coeffs[5] = 0.5;
  const std::vector<double> ygrid = default_extension_ygrid(*b, P, 300);
  const double best = cylinder_energy(extend(u, P, ygrid), P, false);
  // Any profile with the same trace must cost more; perturbations vanish at
  // t = 0 so the boundary data is unchanged.
  for (double amp : {0.05, 0.2}) {
    const auto perturbed = [amp](double t, double s) {
      return rho_eval(t, s) * (1.0 + amp * t * std::exp(-t));
    };
    const double cost = cylinder_energy(extend_with_profile(u, P, ygrid, perturbed), P, false);
    CHECK(cost > best);
  }
}

TEST_CASE("tail fraction is negligible on the default grid and grows when truncated") {
  const BasisPtr b = small_basis();
  const FracParams P{1.0, 0.45};
  const std::vector<double> y = default_extension_ygrid(*b, P);
  const double full = extension_tail_fraction(*b, P, y.back());
  CHECK(full < 1e-6);
  const double cut = extension_tail_fraction(*b, P, y.back() / 8.0);
  CHECK(cut > 100.0 * full);
}

TEST_CASE("extension validation rejects malformed grids") {
  const BasisPtr b = small_basis();
  const FracParams P{1.0, 0.5};
  const SpectralField u = constant_field(b, 1.0);
  CHECK_THROWS_AS(extend(u, P, {0.0, 0.1, 0.05, 0.2, 0.3, 0.4, 0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(extend(u, P, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}), std::invalid_argument);
}
