#pragma once

#include <numbers>

namespace viscowave {

/// Uniform tensor grid on [0, length] x [0, T], endpoints included.
struct Grid {
  int nx = 201;
  int nt = 2001;
  double length = std::numbers::pi;
  double T = 10.0;

  double dx() const noexcept { return length / (nx - 1); }
  double dt() const noexcept { return nt > 1 ? T / (nt - 1) : 0.0; }
  double x(int i) const noexcept { return i == nx - 1 ? length : i * dx(); }
  double t(int k) const noexcept { return k == nt - 1 ? T : k * dt(); }

  /// nx >= 3, nt >= 2, positive extents.
  void validate() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

}  // namespace viscowave
