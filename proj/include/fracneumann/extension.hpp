#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fracneumann/basis.hpp"
#include "fracneumann/fractional.hpp"
#include "fracneumann/profile.hpp"

namespace fracneumann {

// Degenerate-weight extension of a trace field to the half cylinder
// Omega x (0, inf): mode k is damped in y by rho(sqrt(eps lambda_k) y); the
// mean mode stays constant in y. Values are stored row-major in y.
struct ExtensionField {
  BasisPtr basis;
  std::vector<double> y;       // ascending, y.front() == 0
  std::vector<double> values;  // values[j * node_count + i] = U(x_i, y_j)
};

namespace detail {

inline void check_ygrid(const std::vector<double>& y, const char* where) {
  if (y.size() < 8) throw std::invalid_argument(std::string(where) + ": y grid needs at least 8 nodes");
  if (y.front() != 0.0) throw std::invalid_argument(std::string(where) + ": y grid must start at 0");
  for (std::size_t j = 1; j < y.size(); ++j) {
    if (!(y[j] > y[j - 1])) throw std::invalid_argument(std::string(where) + ": y grid must be strictly increasing");
  }
}

}  // namespace detail

// Geometric y grid from 0 out to 20 decay lengths of the slowest nonconstant
// mode; the first positive node sits well inside the profile's small-t range.
inline std::vector<double> default_extension_ygrid(const BasisSpec& basis, const FracParams& P, int nodes = 400) {
  if (nodes < 8) throw std::invalid_argument("default_extension_ygrid: need at least 8 nodes");
  const double lam1 = basis.lambda_first_positive();
  const double scale = lam1 > 0.0 ? std::sqrt(P.eps * lam1) : 1.0;
  const double y_max = 20.0 / scale;
  const double y_min = y_max * 5e-5;
  std::vector<double> y(static_cast<std::size_t>(nodes));
  y[0] = 0.0;
  const double ratio = std::pow(y_max / y_min, 1.0 / double(nodes - 2));
  double v = y_min;
  for (int j = 1; j < nodes; ++j) {
    y[j] = v;
    v *= ratio;
  }
  y.back() = y_max;
  return y;
}

// Extension with a caller-supplied damping profile (t, s) -> value; the
// default profile is rho_eval. Exposed so perturbed profiles can be pushed
// through the same energy checks.
inline ExtensionField extend_with_profile(const SpectralField& u, const FracParams& P,
                                          const std::vector<double>& ygrid,
                                          const std::function<double(double, double)>& profile) {
  detail::check_spectral(u, "extend");
  detail::check_ygrid(ygrid, "extend");
  const BasisSpec& b = *u.basis;
  const std::size_t n = std::size_t(b.node_count());
  ExtensionField U{u.basis, ygrid, std::vector<double>(ygrid.size() * n, 0.0)};

  // Trace row is the plain synthesis; deeper rows damp each mode.
  GridField trace = synthesize(u);
  std::copy(trace.values.begin(), trace.values.end(), U.values.begin());

  std::vector<double> damped(b.size());
  for (std::size_t j = 1; j < ygrid.size(); ++j) {
    for (int k = 0; k < b.size(); ++k) {
      const double lam = b.lambda(k);
      damped[k] = lam == 0.0 ? u.coeffs[k] : u.coeffs[k] * profile(std::sqrt(P.eps * lam) * ygrid[j], P.s);
    }
    double* row = U.values.data() + j * n;
    for (int k = 0; k < b.size(); ++k) {
      const double c = damped[k];
      if (c == 0.0) continue;
      const double* phi = b.mode_row(k);
      for (std::size_t i = 0; i < n; ++i) row[i] += c * phi[i];
    }
  }
  return U;
}

inline ExtensionField extend(const SpectralField& u, const FracParams& P, const std::vector<double>& ygrid) {
  return extend_with_profile(u, P, ygrid, [](double t, double s) { return rho_eval(t, s); });
}

inline ExtensionField extend(const SpectralField& u, const FracParams& P) {
  return extend(u, P, default_extension_ygrid(*u.basis, P));
}

// Dirichlet-to-Neumann map of the extension: coefficients c_s (eps lambda_k)^s u_k.
inline SpectralField dtn_map(const SpectralField& u, const FracParams& P) {
  SpectralField out = apply_frac(u, P);
  const double c = cs_constant(P.s);
  for (double& v : out.coeffs) v *= c;
  return out;
}

// Fraction of the slowest mode's weighted profile energy beyond y_max;
// everything faster truncates less.
inline double extension_tail_fraction(const BasisSpec& basis, const FracParams& P, double y_max) {
  const double lam1 = basis.lambda_first_positive();
  if (lam1 <= 0.0) return 0.0;
  const double T = std::sqrt(P.eps * lam1) * y_max;
  const double a = P.weight_exponent();
  auto density = [&](double t) {
    const double r = rho_eval(t, P.s);
    const double d = rho_deriv(t, P.s);
    return (r * r + d * d) * std::pow(t, a);
  };
  // Composite midpoint on [T, T+40]; the integrand decays like exp(-2t).
  const int n = 4000;
  const double h = 40.0 / n;
  KahanAccumulator acc;
  for (int i = 0; i < n; ++i) {
    const double v = density(T + (i + 0.5) * h);
    if (std::isfinite(v)) acc.add(v);
  }
  const double tail = h * acc.value();
  return tail / trace_constant_Cs(P.s, 1e-9);
}

// Weighted quadrature energy (1/2) iint (eps |grad_x U|^2 + |U_y|^2) y^a.
//
// Each y row is analyzed back to coefficients, x derivatives are spectral
// (Parseval with the mode eigenvalues), y derivatives are finite differences.
// Cells integrate the piecewise model exactly against the weight y^a; the
// first cell uses the indicial model U ~ A + D (y/y_1)^(2s), which carries
// the profile's cusp, instead of a linear segment.
inline double cylinder_energy(const ExtensionField& U, const FracParams& P, bool warn_tail = true) {
  if (!U.basis) throw std::invalid_argument("cylinder_energy: field has no basis");
  detail::check_ygrid(U.y, "cylinder_energy");
  const BasisSpec& b = *U.basis;
  const std::size_t n = std::size_t(b.node_count());
  if (U.values.size() != U.y.size() * n) {
    throw std::invalid_argument("cylinder_energy: value storage does not match grid");
  }
  const int K = b.size();
  const std::size_t ny = U.y.size();
  const double a = P.weight_exponent();
  const double s = P.s;

  // Row-by-row analysis: coef[j*K + k].
  std::vector<double> coef(ny * std::size_t(K));
  const double w = b.node_weight();
  for (std::size_t j = 0; j < ny; ++j) {
    const double* row = U.values.data() + j * n;
    for (int k = 0; k < K; ++k) {
      KahanAccumulator acc;
      const double* phi = b.mode_row(k);
      for (std::size_t i = 0; i < n; ++i) acc.add(phi[i] * row[i]);
      coef[j * std::size_t(K) + k] = w * acc.value();
    }
  }

  KahanAccumulator energy;
  // First cell [0, y1] with the indicial model per mode. With z = (y/y1)^(2s):
  //   int y^a dy = y1^(2-2s)/(2-2s),   int z y^a dy = y1^(2-2s)/2,
  //   int z^2 y^a dy = y1^(2-2s)/(2+2s),   int (dz/dy)^2 y^a dy = 2s y1^(-2s).
  {
    const double y1 = U.y[1];
    const double common = std::pow(y1, 2.0 - 2.0 * s);
    const double m0 = common / (2.0 - 2.0 * s);
    const double int_z = common / 2.0;
    const double int_z2 = common / (2.0 + 2.0 * s);
    const double grad_z = 2.0 * s * std::pow(y1, -2.0 * s);
    for (int k = 0; k < K; ++k) {
      const double A = coef[k];
      const double D = coef[std::size_t(K) + k] - A;
      const double lam = b.lambda(k);
      if (lam == 0.0) continue;  // mean mode: constant in y, no energy
      const double val_sq = A * A * m0 + 2.0 * A * D * int_z + D * D * int_z2;
      energy.add(P.eps * lam * val_sq + grad_z * D * D);
    }
  }
  // Remaining cells: linear-in-y model, weight integrated exactly.
  for (std::size_t j = 1; j + 1 < ny; ++j) {
    const double ya = U.y[j], yb = U.y[j + 1];
    const double dy = yb - ya;
    const double m0 = (std::pow(yb, 1.0 + a) - std::pow(ya, 1.0 + a)) / (1.0 + a);
    const double m1 = (std::pow(yb, 2.0 + a) - std::pow(ya, 2.0 + a)) / (2.0 + a);
    const double m2 = (std::pow(yb, 3.0 + a) - std::pow(ya, 3.0 + a)) / (3.0 + a);
    for (int k = 0; k < K; ++k) {
      const double ua = coef[j * std::size_t(K) + k];
      const double ub = coef[(j + 1) * std::size_t(K) + k];
      const double lam = b.lambda(k);
      if (lam == 0.0) continue;
      const double slope = (ub - ua) / dy;
      const double A = ua - slope * ya;  // u(y) = A + slope * y on the cell
      const double val_sq = A * A * m0 + 2.0 * A * slope * m1 + slope * slope * m2;
      energy.add(P.eps * lam * val_sq + slope * slope * m0);
    }
  }

  if (warn_tail) {
    const double frac = extension_tail_fraction(b, P, U.y.back());
    if (frac > 1e-6) {
      std::fprintf(stderr, "cylinder_energy: y grid truncates %.3e of the slowest mode's profile energy\n", frac);
    }
  }
  return 0.5 * energy.value();
}

}  // namespace fracneumann
