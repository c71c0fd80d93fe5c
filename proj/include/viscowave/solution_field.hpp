#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "viscowave/grid.hpp"
#include "viscowave/medium.hpp"

namespace viscowave {

enum class Provenance { SpectralEps, SpectralLimit, Oracle };

std::string_view to_string(Provenance p) noexcept;

/// Cosine-mode coefficients of a spectral solution at every output time:
/// u(x, t_k) = sum_{n=0}^{modes} coeff(k, n) cos(n x). Lets a spectral field be
/// evaluated off the spatial grid.
struct ModalHistory {
  int modes = 0;
  std::vector<double> coeffs;  ///< nt rows of (modes + 1)

  double coeff(int k, int n) const { return coeffs[static_cast<std::size_t>(k) * (modes + 1) + n]; }
  double evaluate(int k, double x) const;
  double evaluate_dx(int k, double x) const;
};

/// Samples u(x_i, t_k) on a tensor grid, row-major in time. The provenance,
/// parameters and truncation snapshot are fixed at construction.
class SolutionField {
 public:
  SolutionField(Grid grid, std::vector<double> values, Provenance provenance,
                MediumParams params, int modes);

  const Grid& grid() const noexcept { return grid_; }
  Provenance provenance() const noexcept { return provenance_; }
  const MediumParams& params() const noexcept { return params_; }
  int modes() const noexcept { return modes_; }
  /// Viscosity seen by the field's equation: eps for perturbed and oracle
  /// fields solving the third-order problem, 0 for the limit problem.
  double equation_eps() const noexcept { return equation_eps_; }

  double at(int i, int k) const { return values_[static_cast<std::size_t>(k) * grid_.nx + i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> slice(int k) const {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(k) * grid_.nx, grid_.nx);
  }

  const std::optional<std::vector<double>>& initial_velocity() const noexcept { return initial_velocity_; }
  const std::optional<ModalHistory>& modal() const noexcept { return modal_; }

  SolutionField with_initial_velocity(std::vector<double> v) const;
  SolutionField with_modal(ModalHistory m) const;
  SolutionField with_values(std::vector<double> values) const;
  SolutionField with_equation_eps(double eps) const;

 private:
  Grid grid_;
  std::vector<double> values_;
  Provenance provenance_;
  MediumParams params_;
  int modes_;
  double equation_eps_;
  std::optional<std::vector<double>> initial_velocity_;
  std::optional<ModalHistory> modal_;
};

}  // namespace viscowave
