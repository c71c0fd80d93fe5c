#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "viscowave/grid.hpp"
#include "viscowave/medium.hpp"
#include "viscowave/presets.hpp"
#include "viscowave/solution_field.hpp"

namespace viscowave {

/// Endpoint-slope tolerance for the compatibility hypotheses on F0 and F1.
inline constexpr double kCompatibilityTol = 1e-8;

/// Samples of a spatial field on a uniform grid over [0, length]. A preset tag
/// records the closed-form generator the samples came from.
struct SpaceField {
  std::vector<double> values;
  double length = 0.0;
  std::optional<SpacePreset> preset;

  int nx() const noexcept { return static_cast<int>(values.size()); }
  double x(int i) const noexcept { return i == nx() - 1 ? length : i * (length / (nx() - 1)); }

  static SpaceField sample(const SpacePreset& preset, int nx, double length);
  static SpaceField from_samples(std::vector<double> values, double length);

  /// Throws ValidationError if a preset-tagged field no longer matches its
  /// generator to 1e-12, or if nx < 3.
  void verify() const;
};

/// Samples F(x_i, t_k) on a uniform space-time grid, row-major in t.
struct SpaceTimeField {
  std::vector<double> values;
  int nx = 0;
  int nt = 0;
  double length = 0.0;
  double T = 0.0;
  std::optional<SpaceTimePreset> preset;

  double at(int i, int k) const { return values[static_cast<std::size_t>(k) * nx + i]; }

  static SpaceTimeField sample(const SpaceTimePreset& preset, const Grid& grid);
  static SpaceTimeField from_samples(std::vector<double> values, const Grid& grid);
  static SpaceTimeField zeros(const Grid& grid);

  void verify() const;
};

/// One side of the boundary data: u_x = g(t), sampled with its first two
/// time derivatives on the time grid.
struct FluxSide {
  std::vector<double> value;
  std::vector<double> d1;
  std::vector<double> d2;
  std::optional<FluxPreset> preset;

  bool is_zero() const;
  /// Exact for presets; linear interpolation of the samples otherwise.
  double at_time(double t, double T, int order = 0) const;
};

/// Boundary fluxes phi(t) = u_x(0, t) and psi(t) = u_x(L, t).
struct BoundaryFlux {
  FluxSide phi;
  FluxSide psi;
  int nt = 0;
  double T = 0.0;

  bool is_zero() const { return phi.is_zero() && psi.is_zero(); }

  static BoundaryFlux zero(int nt, double T);
  static BoundaryFlux from_presets(const FluxPreset& phi, const FluxPreset& psi, int nt, double T);
  /// Derivatives by 4th-order central differences with one-sided closures.
  static BoundaryFlux from_samples(std::vector<double> phi, std::vector<double> psi, double T);
};

struct EndpointSlopes {
  double left = 0.0;
  double right = 0.0;
  bool analytic = false;
};

/// Endpoint slopes of F: analytic for preset-tagged fields, one-sided
/// finite differences otherwise.
EndpointSlopes endpoint_slopes(const SpaceField& f);

enum class SourceMode { OperatorApplied, PaperFormula };

std::string_view to_string(SourceMode m) noexcept;
SourceMode parse_source_mode(std::string_view s);

/// Neumann problem for eps u_xxt + u_xx - u_tt - a u_t = f on [0, L] x [0, T].
struct NeumannProblem {
  MediumParams params;
  Grid grid;
  SpaceField f0;
  SpaceField f1;
  SpaceTimeField f;
  BoundaryFlux flux;
  EndpointSlopes f0_slopes;
  EndpointSlopes f1_slopes;
  bool homogeneous = true;
  std::optional<SourceMode> source_mode;  ///< set by homogenize()

  /// Consistent sampling, homogeneous flag, grid agreement.
  void validate() const;

  /// One warning per endpoint slope of F0/F1 exceeding kCompatibilityTol
  /// (homogeneous problems only).
  std::vector<std::string> compatibility_warnings() const;
};

/// Builds a problem by sampling preset expressions on `grid`.
NeumannProblem make_problem(const MediumParams& params, const Grid& grid,
                            const ProblemPreset& preset);

/// Spatial rescaling factor c = pi / L together with the map it induces.
struct ScaleRecord {
  double c = 1.0;
  double original_length = 0.0;
  double original_T = 0.0;
};

/// Maps a problem on [0, L] to [0, pi] via x' = c x, t' = c t, c = pi / L.
/// The equation keeps its form with a' = a / c, eps' = c eps; sources,
/// velocities and fluxes are rescaled accordingly. Throws ValidationError if
/// the rescaled parameters leave (0, 1).
std::pair<NeumannProblem, ScaleRecord> rescale_to_pi(const NeumannProblem& problem);

/// Maps a field solved on [0, pi] back to the original [0, L] x [0, T].
SolutionField rescale_from_pi(const SolutionField& field, const ScaleRecord& scale,
                              const MediumParams& original_params);

/// w(x, t) = (x / 2 pi) [(2 pi - x) phi + x psi]; w_x(0) = phi, w_x(pi) = psi.
double lifting_value(double phi, double psi, double x);
double lifting_field(const BoundaryFlux& flux, double x, double t);

/// Subtracts the lifting field so the fluxes vanish. The new source is
/// f - L_eps(w) (OperatorApplied) or the printed closed-form expression with
/// the undefined coefficient read as the damping a (PaperFormula). Requires a
/// problem on [0, pi].
NeumannProblem homogenize(const NeumannProblem& problem,
                          SourceMode mode = SourceMode::OperatorApplied);

/// sup over the grid of |F_operator - F_printed| for the given flux data.
double source_mode_discrepancy(const NeumannProblem& problem);

/// u = u_bar + w on the grid of `u_bar`.
SolutionField dehomogenize(const SolutionField& u_bar, const BoundaryFlux& flux);

}  // namespace viscowave
