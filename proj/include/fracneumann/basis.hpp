#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracneumann/domain.hpp"
#include "fracneumann/math_util.hpp"

namespace fracneumann {

struct BasisMode {
  double lambda = 0.0;  // Neumann eigenvalue
  int kx = 0;           // per-axis cosine indices
  int ky = 0;
};

namespace detail {

inline double axis_mode_value(int k, double x, double length) {
  if (k == 0) return std::sqrt(1.0 / length);
  return std::sqrt(2.0 / length) * std::cos(k * std::numbers::pi * x / length);
}

inline double axis_eigenvalue(int k, double length) {
  const double w = k * std::numbers::pi / length;
  return w * w;
}

}  // namespace detail

// Orthonormal Neumann cosine basis on a midpoint quadrature grid.
//
// Mode 0 is the constant |domain|^(-1/2) with eigenvalue exactly 0. On a
// rectangle, modes are tensor products sorted by eigenvalue sum with a
// lexicographic (kx, ky) tie-break. The uniform midpoint rule integrates
// cosine products below the grid's Nyquist index exactly, so the Gram matrix
// of the retained modes is the identity to rounding; construction rejects
// grids too coarse for that to hold.
class BasisSpec {
 public:
  BasisSpec(const ModelDomain& domain, int num_modes, int grid_size) : domain_(domain), grid_size_(grid_size) {
    if (num_modes < 1) throw std::invalid_argument("build_basis: need at least one mode");
    if (grid_size < 1) throw std::invalid_argument("build_basis: grid_size must be positive");

    if (domain.kind == ModelDomain::Kind::interval) {
      modes_.reserve(num_modes);
      for (int k = 0; k < num_modes; ++k) {
        modes_.push_back({detail::axis_eigenvalue(k, domain.lx), k, 0});
      }
    } else {
      // kx, ky < num_modes always covers the lowest num_modes eigenvalue sums.
      std::vector<BasisMode> candidates;
      candidates.reserve(std::size_t(num_modes) * num_modes);
      for (int kx = 0; kx < num_modes; ++kx) {
        for (int ky = 0; ky < num_modes; ++ky) {
          candidates.push_back(
              {detail::axis_eigenvalue(kx, domain.lx) + detail::axis_eigenvalue(ky, domain.ly), kx, ky});
        }
      }
      std::sort(candidates.begin(), candidates.end(), [](const BasisMode& a, const BasisMode& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        if (a.kx != b.kx) return a.kx < b.kx;
        return a.ky < b.ky;
      });
      candidates.resize(num_modes);
      modes_ = std::move(candidates);
    }

    int max_axis_index = 0;
    for (const auto& m : modes_) max_axis_index = std::max({max_axis_index, m.kx, m.ky});
    if (grid_size < 2 * (max_axis_index + 1)) {
      throw std::invalid_argument("build_basis: grid_size " + std::to_string(grid_size) +
                                  " cannot resolve mode index " + std::to_string(max_axis_index) +
                                  "; need at least " + std::to_string(2 * (max_axis_index + 1)) +
                                  " nodes per axis");
    }

    const int m = grid_size;
    if (domain.kind == ModelDomain::Kind::interval) {
      nodes_x_.resize(m);
      for (int i = 0; i < m; ++i) nodes_x_[i] = (i + 0.5) * domain.lx / m;
      node_weight_ = domain.lx / m;
    } else {
      nodes_x_.resize(std::size_t(m) * m);
      nodes_y_.resize(std::size_t(m) * m);
      for (int iy = 0; iy < m; ++iy) {
        for (int ix = 0; ix < m; ++ix) {
          nodes_x_[std::size_t(iy) * m + ix] = (ix + 0.5) * domain.lx / m;
          nodes_y_[std::size_t(iy) * m + ix] = (iy + 0.5) * domain.ly / m;
        }
      }
      node_weight_ = domain.lx * domain.ly / (double(m) * m);
    }

    // Mode values at the nodes, built from per-axis tables.
    const std::size_t n = nodes_x_.size();
    phi_.resize(modes_.size() * n);
    if (domain.kind == ModelDomain::Kind::interval) {
      for (std::size_t k = 0; k < modes_.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          phi_[k * n + i] = detail::axis_mode_value(modes_[k].kx, nodes_x_[i], domain.lx);
        }
      }
    } else {
      std::vector<double> ax(std::size_t(max_axis_index + 1) * m), ay(std::size_t(max_axis_index + 1) * m);
      for (int k = 0; k <= max_axis_index; ++k) {
        for (int i = 0; i < m; ++i) {
          ax[std::size_t(k) * m + i] = detail::axis_mode_value(k, (i + 0.5) * domain.lx / m, domain.lx);
          ay[std::size_t(k) * m + i] = detail::axis_mode_value(k, (i + 0.5) * domain.ly / m, domain.ly);
        }
      }
      for (std::size_t k = 0; k < modes_.size(); ++k) {
        const auto& mode = modes_[k];
        for (int iy = 0; iy < m; ++iy) {
          for (int ix = 0; ix < m; ++ix) {
            phi_[k * n + std::size_t(iy) * m + ix] =
                ax[std::size_t(mode.kx) * m + ix] * ay[std::size_t(mode.ky) * m + iy];
          }
        }
      }
    }
  }

  const ModelDomain& domain() const { return domain_; }
  int size() const { return int(modes_.size()); }
  int grid_size() const { return grid_size_; }
  int node_count() const { return int(nodes_x_.size()); }

  double lambda(int k) const { return modes_[k].lambda; }
  const BasisMode& mode(int k) const { return modes_[k]; }
  // Smallest positive eigenvalue; 0 if the basis holds only the constant.
  double lambda_first_positive() const {
    for (const auto& m : modes_) {
      if (m.lambda > 0.0) return m.lambda;
    }
    return 0.0;
  }

  double node_x(int i) const { return nodes_x_[i]; }
  double node_y(int i) const { return nodes_y_.empty() ? 0.0 : nodes_y_[i]; }
  double node_weight() const { return node_weight_; }

  double mode_value(int k, int i) const { return phi_[std::size_t(k) * nodes_x_.size() + i]; }
  const double* mode_row(int k) const { return phi_.data() + std::size_t(k) * nodes_x_.size(); }

  // Closed-form mode evaluation at an arbitrary point.
  double eval_mode(int k, double x, double y = 0.0) const {
    const auto& m = modes_[k];
    double v = detail::axis_mode_value(m.kx, x, domain_.lx);
    if (domain_.kind == ModelDomain::Kind::rectangle) v *= detail::axis_mode_value(m.ky, y, domain_.ly);
    return v;
  }

 private:
  ModelDomain domain_;
  int grid_size_ = 0;
  std::vector<BasisMode> modes_;
  std::vector<double> nodes_x_, nodes_y_;
  double node_weight_ = 0.0;
  std::vector<double> phi_;  // size() x node_count(), mode-major
};

using BasisPtr = std::shared_ptr<const BasisSpec>;

inline BasisPtr build_basis(const ModelDomain& domain, int num_modes, int grid_size) {
  return std::make_shared<BasisSpec>(domain, num_modes, grid_size);
}

struct SpectralField {
  BasisPtr basis;
  std::vector<double> coeffs;
};

struct GridField {
  BasisPtr basis;
  std::vector<double> values;
};

namespace detail {

inline void check_spectral(const SpectralField& u, const char* where) {
  if (!u.basis) throw std::invalid_argument(std::string(where) + ": field has no basis");
  if (int(u.coeffs.size()) != u.basis->size()) {
    throw std::invalid_argument(std::string(where) + ": coefficient length does not match basis");
  }
}

inline void check_grid(const GridField& g, const char* where) {
  if (!g.basis) throw std::invalid_argument(std::string(where) + ": field has no basis");
  if (int(g.values.size()) != g.basis->node_count()) {
    throw std::invalid_argument(std::string(where) + ": value length does not match basis grid");
  }
}

}  // namespace detail

inline SpectralField make_spectral(BasisPtr basis, std::vector<double> coeffs) {
  SpectralField u{std::move(basis), std::move(coeffs)};
  detail::check_spectral(u, "make_spectral");
  return u;
}

inline SpectralField zero_field(const BasisPtr& basis) {
  return {basis, std::vector<double>(std::size_t(basis->size()), 0.0)};
}

// Constant field with pointwise value c (coefficient on mode 0 only).
inline SpectralField constant_field(const BasisPtr& basis, double c) {
  SpectralField u = zero_field(basis);
  u.coeffs[0] = c * std::sqrt(basis->domain().measure());
  return u;
}

inline SpectralField analyze(const GridField& g) {
  detail::check_grid(g, "analyze");
  const BasisSpec& b = *g.basis;
  SpectralField u{g.basis, std::vector<double>(std::size_t(b.size()))};
  const double w = b.node_weight();
  for (int k = 0; k < b.size(); ++k) {
    KahanAccumulator acc;
    const double* row = b.mode_row(k);
    for (int i = 0; i < b.node_count(); ++i) acc.add(row[i] * g.values[i]);
    u.coeffs[k] = w * acc.value();
  }
  return u;
}

inline GridField synthesize(const SpectralField& u) {
  detail::check_spectral(u, "synthesize");
  const BasisSpec& b = *u.basis;
  GridField g{u.basis, std::vector<double>(std::size_t(b.node_count()), 0.0)};
  for (int k = 0; k < b.size(); ++k) {
    const double c = u.coeffs[k];
    if (c == 0.0) continue;
    const double* row = b.mode_row(k);
    for (int i = 0; i < b.node_count(); ++i) g.values[i] += c * row[i];
  }
  return g;
}

// Evaluate the same coefficients on another basis built over the same domain
// with the same modes (typically a finer measurement grid).
inline GridField resample(const SpectralField& u, const BasisPtr& target) {
  detail::check_spectral(u, "resample");
  if (!target) throw std::invalid_argument("resample: no target basis");
  if (!(target->domain() == u.basis->domain()) || target->size() != u.basis->size()) {
    throw std::invalid_argument("resample: target basis has different domain or mode set");
  }
  for (int k = 0; k < target->size(); ++k) {
    if (target->mode(k).kx != u.basis->mode(k).kx || target->mode(k).ky != u.basis->mode(k).ky) {
      throw std::invalid_argument("resample: target basis mode ordering differs");
    }
  }
  SpectralField shifted{target, u.coeffs};
  return synthesize(shifted);
}

inline double lp_norm(const GridField& g, double q) {
  detail::check_grid(g, "lp_norm");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : g.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(q >= 1.0)) throw std::invalid_argument("lp_norm: exponent must satisfy q >= 1");
  KahanAccumulator acc;
  for (double v : g.values) acc.add(std::pow(std::abs(v), q));
  return std::pow(g.basis->node_weight() * acc.value(), 1.0 / q);
}

inline double l2_norm_coeffs(const SpectralField& u) {
  detail::check_spectral(u, "l2_norm_coeffs");
  KahanAccumulator acc;
  for (double c : u.coeffs) acc.add(c * c);
  return std::sqrt(acc.value());
}

inline SpectralField axpy(double alpha, const SpectralField& x, const SpectralField& y) {
  detail::check_spectral(x, "axpy");
  detail::check_spectral(y, "axpy");
  if (x.basis != y.basis) throw std::invalid_argument("axpy: fields use different bases");
  SpectralField out = y;
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] += alpha * x.coeffs[k];
  return out;
}

inline SpectralField scaled(const SpectralField& x, double alpha) {
  detail::check_spectral(x, "scaled");
  SpectralField out = x;
  for (double& c : out.coeffs) c *= alpha;
  return out;
}

}  // namespace fracneumann
