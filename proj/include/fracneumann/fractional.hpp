#pragma once

#include <cmath>
#include <stdexcept>

#include "fracneumann/basis.hpp"

namespace fracneumann {

// Parameters of the spectral fractional operator (-eps Laplacian_N)^s.
struct FracParams {
  double eps = 1.0;
  double s = 0.5;

  FracParams() = default;
  FracParams(double eps_, double s_) : eps(eps_), s(s_) {
    if (!(eps > 0.0)) throw std::invalid_argument("FracParams: eps must be positive");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("FracParams: s must lie in (0, 1)");
  }

  // Degenerate weight exponent of the extension problem, a = 1 - 2s.
  double weight_exponent() const { return 1.0 - 2.0 * s; }
};

// (eps * lambda)^s with the zero mode pinned to exactly 0.
inline double frac_power(const FracParams& P, double lambda) {
  if (lambda == 0.0) return 0.0;
  return std::exp(P.s * std::log(P.eps * lambda));
}

inline SpectralField apply_frac(const SpectralField& u, const FracParams& P) {
  detail::check_spectral(u, "apply_frac");
  SpectralField out = u;
  for (int k = 0; k < u.basis->size(); ++k) out.coeffs[k] *= frac_power(P, u.basis->lambda(k));
  return out;
}

// sum_{k >= 1} (eps lambda_k)^s u_k^2
inline double frac_seminorm_sq(const SpectralField& u, const FracParams& P) {
  detail::check_spectral(u, "frac_seminorm_sq");
  KahanAccumulator acc;
  for (int k = 0; k < u.basis->size(); ++k) {
    acc.add(frac_power(P, u.basis->lambda(k)) * u.coeffs[k] * u.coeffs[k]);
  }
  return acc.value();
}

// Solve ((-eps Laplacian_N)^s + I) u = f mode by mode; the constant mode is
// divided by exactly 1.
inline SpectralField resolvent(const SpectralField& f, const FracParams& P) {
  detail::check_spectral(f, "resolvent");
  SpectralField out = f;
  for (int k = 0; k < f.basis->size(); ++k) out.coeffs[k] /= 1.0 + frac_power(P, f.basis->lambda(k));
  return out;
}

enum class SemigroupForm {
  standard,        // exp(-t (eps lambda_k)^s)
  quadratic_time,  // exp(-t^2 (eps lambda_k)^s), kept as an experiment switch
};

inline SpectralField heat_semigroup(const SpectralField& u, double t, const FracParams& P,
                                    SemigroupForm form = SemigroupForm::standard) {
  detail::check_spectral(u, "heat_semigroup");
  if (!(t >= 0.0)) throw std::invalid_argument("heat_semigroup: time must be nonnegative");
  const double tt = form == SemigroupForm::standard ? t : t * t;
  SpectralField out = u;
  for (int k = 0; k < u.basis->size(); ++k) {
    out.coeffs[k] *= std::exp(-tt * frac_power(P, u.basis->lambda(k)));
  }
  return out;
}

}  // namespace fracneumann
