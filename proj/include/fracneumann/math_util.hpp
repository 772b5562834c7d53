#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace fracneumann {

// Compensated summation. Quadrature sums cancel heavily (inner products of
// oscillatory modes), and several downstream residual checks sit close to
// machine precision, so plain left-to-right accumulation is not good enough.
class KahanAccumulator {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double kahan_sum(std::span<const double> a) {
  KahanAccumulator acc;
  for (double x : a) acc.add(x);
  return acc.value();
}

inline double kahan_dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("kahan_dot: length mismatch");
  KahanAccumulator acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

struct QuadratureResult {
  double value = 0.0;
  bool converged = false;
  int levels = 0;
};

// exp-sinh quadrature on (0, inf): t = exp((pi/2) sinh(u)) turns an endpoint
// power singularity at 0 plus exponential decay at infinity into a doubly
// exponentially decaying trapezoid sum in u. Levels halve the step until two
// consecutive values agree to rel_tol.
template <class F>
QuadratureResult integrate_zero_to_inf(F&& f, double rel_tol = 1e-12, int max_level = 10) {
  constexpr double pi_half = 1.5707963267948966;
  auto term = [&](double u) -> double {
    const double sh = pi_half * std::sinh(u);
    if (sh > 700.0 || sh < -700.0) return 0.0;
    const double t = std::exp(sh);
    const double w = t * pi_half * std::cosh(u);
    const double v = f(t) * w;
    return std::isfinite(v) ? v : 0.0;
  };
  // Sum one side of the trapezoid comb, starting at u0, stepping by du.
  auto sweep = [&](double u0, double du) -> double {
    KahanAccumulator acc;
    int quiet = 0;
    for (int j = 0; j < 100000; ++j) {
      const double u = u0 + j * du;
      if (std::abs(u) > 7.0) break;
      const double v = term(u);
      acc.add(v);
      const double scale = std::abs(acc.value()) + 1e-300;
      if (std::abs(v) < 1e-18 * scale) {
        if (++quiet >= 3) break;
      } else {
        quiet = 0;
      }
    }
    return acc.value();
  };

  double h = 0.5;
  double total = h * (term(0.0) + sweep(h, h) + sweep(-h, -h));
  QuadratureResult out{total, false, 1};
  for (int level = 1; level <= max_level; ++level) {
    const double hh = h / 2.0;
    const double odd = sweep(hh, h) + sweep(-hh, -h);
    const double refined = total / 2.0 + hh * odd;
    out.levels = level + 1;
    const double diff = std::abs(refined - total);
    total = refined;
    out.value = total;
    if (diff <= rel_tol * std::abs(total) + 1e-300) {
      out.converged = true;
      break;
    }
    h = hh;
  }
  return out;
}

inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("least_squares_slope: need >= 2 paired samples");
  }
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares_slope: degenerate abscissae");
  return sxy / sxx;
}

// Deterministic uniform double in [0, 1) from a 64-bit word; keeps output
// independent of the standard library's distribution implementations.
inline double uniform01(std::uint64_t r) { return double(r >> 11) * 0x1.0p-53; }

}  // namespace fracneumann
