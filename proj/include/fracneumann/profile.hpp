#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fracneumann/math_util.hpp"

namespace fracneumann {

// Scalar extension profile rho(t; s) = (2^(1-s)/Gamma(s)) t^s K_s(t),
// normalized so rho(0) = 1. It is the decaying solution of
//   rho'' + ((1-2s)/t) rho' = rho,  rho(0) = 1,
// and carries the two constants of the degenerate extension:
//   c_s = -lim_{t->0} t^(1-2s) rho'(t) = 2^(1-2s) Gamma(1-s)/Gamma(s)
//   C_s = int_0^inf (rho^2 + rho'^2) t^(1-2s) dt   (computed by quadrature).

inline void check_profile_order(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("profile: s must lie in (0, 1)");
}

// Small-t coefficient of the series representation; exactly 1 at s = 1/2.
inline double cs_constant(double s) {
  check_profile_order(s);
  return std::exp((1.0 - 2.0 * s) * std::numbers::ln2 + std::lgamma(1.0 - s) - std::lgamma(s));
}

namespace detail {

// Series / quadrature crossover for the Bessel evaluation of rho. The
// reflection series loses roughly e^{2t} in relative accuracy to
// cancellation, so it is kept below t = 4 (absolute error ~1e-13 there);
// the integral representation takes over above.
inline constexpr double kRhoCrossover = 4.0;

struct ProfilePoint {
  double value = 0.0;
  double deriv = 0.0;
};

// Reflection series, valid below the crossover:
//   rho(t)  = G(t) - kappa t^(2s) H(t)
//   G = sum tau_m,  tau_0 = 1, tau_{m+1} = tau_m q / ((m+1)(m+1-s))
//   H = sum sig_m,  sig_0 = 1, sig_{m+1} = sig_m q / ((m+1)(m+1+s))
// with q = t^2/4 and kappa = c_s / (2s).
inline ProfilePoint rho_series(double t, double s) {
  const double q = 0.25 * t * t;
  double tau = 1.0, g = 1.0, gp = 0.0;
  double sig = 1.0, hsum = 1.0, hp = 0.0;
  for (int m = 1; m <= 300; ++m) {
    tau *= q / (m * (m - s));
    sig *= q / (m * (m + s));
    g += tau;
    gp += 2.0 * m * tau;
    hsum += sig;
    hp += 2.0 * m * sig;
    if (tau < 1e-18 * std::abs(g) && sig < 1e-18 * hsum) break;
  }
  const double kappa = cs_constant(s) / (2.0 * s);
  const double t2s = std::pow(t, 2.0 * s);
  ProfilePoint out;
  out.value = g - kappa * t2s * hsum;
  // gp, hp accumulated sum 2m tau_m; divide by t once.
  out.deriv = gp / t - kappa * std::pow(t, 2.0 * s - 1.0) * (2.0 * s * hsum + hp);
  return out;
}

// e^t K_nu(t) through the integral representation
//   e^t K_nu(t) = \int_0^inf exp(-2 t sinh^2(theta/2)) cosh(nu theta) dtheta,
// pushed through the doubly exponential map. The truncated large-argument
// series stalls near e^{-2t} relative error, which is not enough just above
// the crossover; the quadrature reaches machine precision for every t >= 1.
inline double bessel_k_scaled(double nu, double t) {
  const auto integrand = [nu, t](double theta) {
    const double sh = std::sinh(0.5 * theta);
    const double expo = 2.0 * t * sh * sh;
    if (expo > 700.0) return 0.0;
    return std::exp(-expo) * std::cosh(nu * theta);
  };
  return integrate_zero_to_inf(integrand, 1e-14, 12).value;
}

// Above the crossover: rho = (2^(1-s)/Gamma(s)) t^s K_s(t) and
// rho' = -(2^(1-s)/Gamma(s)) t^s K_{1-s}(t).
inline ProfilePoint rho_bessel(double t, double s) {
  const double logpref = (1.0 - s) * std::numbers::ln2 - std::lgamma(s) + s * std::log(t) - t;
  const double pref = std::exp(logpref);
  ProfilePoint out;
  out.value = pref * bessel_k_scaled(s, t);
  out.deriv = -pref * bessel_k_scaled(1.0 - s, t);
  return out;
}

inline ProfilePoint rho_point(double t, double s) {
  return t < kRhoCrossover ? rho_series(t, s) : rho_bessel(t, s);
}

}  // namespace detail

inline double rho_eval(double t, double s) {
  check_profile_order(s);
  if (!(t >= 0.0)) throw std::invalid_argument("rho_eval: argument must be nonnegative");
  if (t == 0.0) return 1.0;
  return detail::rho_point(t, s).value;
}

inline double rho_deriv(double t, double s) {
  check_profile_order(s);
  if (!(t >= 0.0)) throw std::invalid_argument("rho_deriv: argument must be nonnegative");
  if (t == 0.0) {
    // t^(2s-1) limit of the singular term.
    if (s > 0.5) return 0.0;
    if (s == 0.5) return -cs_constant(s);
    return -std::numeric_limits<double>::infinity();
  }
  return detail::rho_point(t, s).deriv;
}

// C_s by exp-sinh quadrature of the weighted energy density; kept on the
// quadrature route for every s so the s = 1/2 closed form stays a real check
// of the integration machinery.
inline double trace_constant_Cs(double s, double rel_tol = 1e-11) {
  check_profile_order(s);
  const double a = 1.0 - 2.0 * s;
  auto density = [s, a](double t) {
    const auto p = detail::rho_point(t, s);
    return (p.value * p.value + p.deriv * p.deriv) * std::pow(t, a);
  };
  const QuadratureResult q = integrate_zero_to_inf(density, rel_tol);
  if (!q.converged) throw std::runtime_error("trace_constant_Cs: quadrature did not converge");
  return q.value;
}

struct RhoProfile {
  double s = 0.5;
  double cs = 1.0;
  double Cs = 1.0;

  double operator()(double t) const { return rho_eval(t, s); }
  double deriv(double t) const { return rho_deriv(t, s); }
};

inline RhoProfile make_rho_profile(double s) {
  check_profile_order(s);
  return {s, cs_constant(s), trace_constant_Cs(s)};
}

}  // namespace fracneumann
