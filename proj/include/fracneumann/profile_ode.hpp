#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fracneumann {

// Independent route to the extension profile: integrate
//   rho'' + ((1-2s)/t) rho' = rho
// directly. The local solution basis at 0 is the Frobenius pair
//   u1 = sum c_m t^(2m),        c_0 = 1, c_m = c_{m-1} / (4 m (m - s))
//   u2 = t^(2s) sum d_m t^(2m), d_0 = 1, d_m = d_{m-1} / (4 m (m + s))
// and the decaying branch is u1 + B u2 for a single B < 0, found here by
// bisection on the sign of the solution far out (shooting). Shares no code
// with the series/asymptotic Bessel evaluation; used to cross-check it.

struct OdeProfileResult {
  std::vector<double> values;  // profile at the requested points
  double shooting_coefficient = 0.0;
  double cs = 0.0;  // -2 s B*, the small-t flux coefficient of the branch
};

namespace detail {

struct FrobeniusState {
  double u = 0.0, du = 0.0;
};

// Both series are entire, so the launch point need not be small.
inline FrobeniusState frobenius_pair(double s, double t, double B) {
  double c = 1.0, u1 = 1.0, du1 = 0.0;
  double d = 1.0, h = 1.0, dh = 0.0;
  const double t2 = t * t;
  for (int m = 1; m <= 200; ++m) {
    c *= t2 / (4.0 * m * (m - s));
    d *= t2 / (4.0 * m * (m + s));
    u1 += c;
    du1 += 2.0 * m * c;
    h += d;
    dh += 2.0 * m * d;
    if (std::abs(c) < 1e-19 * std::abs(u1) && std::abs(d) < 1e-19 * std::abs(h)) break;
  }
  du1 /= t;
  dh /= t;
  const double base = std::pow(t, 2.0 * s);
  const double u2 = base * h;
  const double du2 = base * (2.0 * s * h / t + dh);
  return {u1 + B * u2, du1 + B * du2};
}

inline void rho_ode_rhs(double s, double t, double u, double du, double& fu, double& fdu) {
  fu = du;
  fdu = u - (1.0 - 2.0 * s) / t * du;
}

inline void rk4_step(double s, double& t, double& u, double& du, double h) {
  double k1u, k1d, k2u, k2d, k3u, k3d, k4u, k4d;
  rho_ode_rhs(s, t, u, du, k1u, k1d);
  rho_ode_rhs(s, t + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1d, k2u, k2d);
  rho_ode_rhs(s, t + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2d, k3u, k3d);
  rho_ode_rhs(s, t + h, u + h * k3u, du + h * k3d, k4u, k4d);
  u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  du += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
  t += h;
}

// Integrate from t0 with coefficient B; record values at the sorted targets
// that lie in (t0, t_end]; return the end value.
inline double integrate_branch(double s, double t0, double B, double t_end, double h_base,
                               const std::vector<double>* targets, std::vector<double>* out) {
  FrobeniusState y = frobenius_pair(s, t0, B);
  double t = t0, u = y.u, du = y.du;
  std::size_t idx = 0;
  if (targets) {
    while (idx < targets->size() && (*targets)[idx] <= t0) ++idx;
  }
  while (t < t_end - 1e-14) {
    double h = std::min(h_base, t_end - t);
    if (targets && idx < targets->size() && t + h >= (*targets)[idx] - 1e-14) {
      h = (*targets)[idx] - t;
      if (h > 1e-14) rk4_step(s, t, u, du, h);
      out->at(idx) = u;
      ++idx;
      continue;
    }
    rk4_step(s, t, u, du, h);
  }
  return u;
}

}  // namespace detail

inline OdeProfileResult rho_ode_oracle(double s, std::vector<double> t_points, double t_launch = 0.5,
                                       double t_shoot = 30.0, double step = 1e-3) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("rho_ode_oracle: s must lie in (0, 1)");
  for (double t : t_points) {
    if (!(t > 0.0)) throw std::invalid_argument("rho_ode_oracle: points must be positive");
  }
  std::vector<double> sorted = t_points;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.back() > t_shoot - 5.0) {
    throw std::invalid_argument("rho_ode_oracle: points too close to the shooting horizon");
  }

  // Bracket the decaying branch: B = 0 blows up to +inf, very negative B to -inf.
  double lo = -20.0, hi = 0.0;
  const double f_lo = detail::integrate_branch(s, t_launch, lo, t_shoot, step, nullptr, nullptr);
  const double f_hi = detail::integrate_branch(s, t_launch, hi, t_shoot, step, nullptr, nullptr);
  if (!(f_lo < 0.0 && f_hi > 0.0)) throw std::runtime_error("rho_ode_oracle: shooting bracket failed");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double f = detail::integrate_branch(s, t_launch, mid, t_shoot, step, nullptr, nullptr);
    if (f > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double B = 0.5 * (lo + hi);

  OdeProfileResult res;
  res.shooting_coefficient = B;
  res.cs = -2.0 * s * B;
  res.values.assign(sorted.size(), 0.0);
  std::vector<double> sorted_vals(sorted.size(), 0.0);
  // Points at or below the launch come straight from the local series.
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] <= t_launch) sorted_vals[i] = detail::frobenius_pair(s, sorted[i], B).u;
  }
  detail::integrate_branch(s, t_launch, B, t_shoot, step, &sorted, &sorted_vals);
  // Map back to the caller's ordering.
  for (std::size_t i = 0; i < t_points.size(); ++i) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), t_points[i]);
    res.values[i] = sorted_vals[std::size_t(it - sorted.begin())];
  }
  return res;
}

}  // namespace fracneumann
