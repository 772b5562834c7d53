#pragma once

#include <stdexcept>

namespace fracneumann {

// Product domains with homogeneous Neumann boundary: an interval (0, L) or a
// rectangle (0, Lx) x (0, Ly).
struct ModelDomain {
  enum class Kind { interval, rectangle };

  Kind kind = Kind::interval;
  double lx = 1.0;
  double ly = 0.0;  // unused for intervals

  static ModelDomain interval(double length) {
    if (!(length > 0.0)) throw std::invalid_argument("ModelDomain: interval length must be positive");
    return {Kind::interval, length, 0.0};
  }

  static ModelDomain rectangle(double lx, double ly) {
    if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("ModelDomain: rectangle sides must be positive");
    return {Kind::rectangle, lx, ly};
  }

  int dimension() const { return kind == Kind::interval ? 1 : 2; }
  double measure() const { return kind == Kind::interval ? lx : lx * ly; }

  bool operator==(const ModelDomain&) const = default;
};

}  // namespace fracneumann
