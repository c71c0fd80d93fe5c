#pragma once

#include <span>
#include <string>
#include <vector>

#include "viscowave/grid.hpp"
#include "viscowave/medium.hpp"
#include "viscowave/problem.hpp"
#include "viscowave/solution_field.hpp"
#include "viscowave/spectral_kernel.hpp"

namespace viscowave {

/// f(x) ~ mean + sum_{n=1}^{N} coeffs[n-1] cos(n x) on [0, pi].
struct CosineSpectrum {
  double mean = 0.0;
  std::vector<double> coeffs;

  int modes() const noexcept { return static_cast<int>(coeffs.size()); }
  double coeff(int n) const { return n == 0 ? mean : coeffs[n - 1]; }
  double synthesize(double x) const;
};

/// mean = (1/pi) int f, c_n = (2/pi) int f cos(n x), by composite Simpson
/// quadrature on the uniform samples over [0, pi] (Simpson 3/8 closes an odd
/// interval count). Throws ValidationError unless values.size() >= 2N + 1.
CosineSpectrum cosine_analysis(std::span<const double> values, int modes);
CosineSpectrum cosine_analysis(const SpaceField& field, int modes);

/// Cosine spectra of every time slice of a space-time field:
/// coeff(k, n) for n = 0..modes (n = 0 is the mean).
struct SourceSpectrum {
  int modes = 0;
  int nt = 0;
  std::vector<double> coeffs;

  double coeff(int k, int n) const { return coeffs[static_cast<std::size_t>(k) * (modes + 1) + n]; }
  bool is_zero() const;
};

SourceSpectrum source_analysis(const SpaceTimeField& field, int modes, int threads = 1);

struct SolveOptions {
  GreenKind kind = GreenKind::Perturbed;
  Truncation trunc;
  int threads = 1;
};

/// Side information gathered while solving.
struct SolveDiagnostics {
  int modes = 0;
  /// Largest |c_n| among the upper tenth of retained data modes; a
  /// resolution indicator for the cosine expansion of the data.
  double spectral_tail = 0.0;
  std::vector<std::string> warnings;
};

/// Number of modes a solve on `grid` uses: min(max_modes, (nx - 1) / 2).
int solver_modes(const Grid& grid, const Truncation& trunc);

/// Response to the initial velocity: Z(t) mean + sum c_n K_n(t) cos(n x).
SolutionField solve_u1(const CosineSpectrum& f1, const MediumParams& params, const Grid& grid,
                       const SolveOptions& opts = {});

/// Response to the initial displacement:
/// mean + sum c_n [K_n' + (a + eps n^2) K_n] cos(n x) (eps = 0 for the limit).
SolutionField solve_ustar(const CosineSpectrum& f0, const MediumParams& params, const Grid& grid,
                          const SolveOptions& opts = {});

/// Forced response -int_0^t K_n(t - s) F_n(s) ds per mode (and the zero mode
/// with Z), by the composite trapezoid rule on the time grid.
SolutionField solve_uF(const SourceSpectrum& f, const MediumParams& params, const Grid& grid,
                       const SolveOptions& opts = {}, SolveDiagnostics* diag = nullptr);

/// u = u* + u1 + uF for a homogeneous problem on [0, pi], assembled mode by
/// mode. The field carries its modal history and analytic initial velocity.
SolutionField solve_full(const NeumannProblem& problem, const SolveOptions& opts = {},
                         SolveDiagnostics* diag = nullptr);

namespace detail {

/// Trapezoid Duhamel sum -dt [K_k F_0 / 2 + sum_{j=1}^{k-1} K_{k-j} F_j] for
/// every k, through the two-step recurrence of the kernel. O(nt).
std::vector<double> duhamel_recurrence(const StepRecurrence& rec, std::span<const double> forcing,
                                       double dt);

}  // namespace detail

struct ResidualReport {
  std::vector<double> values;  ///< nx * nt, zero on boundary rows and columns
  double sup = 0.0;
};

/// eps u_xxt + u_xx - u_tt - a u_t - F at interior nodes by central
/// differences, with eps = field.equation_eps(). Needs >= 5 nodes per axis.
ResidualReport pde_residual(const SolutionField& field, const SpaceTimeField& source);

/// Neumann flux u_x at x = 0 and x = pi by 4th-order one-sided differences
/// with step `h`, evaluated off-grid through the modal history. Returns the
/// largest magnitude over all output times.
double boundary_flux_sup(const SolutionField& field, double h = 1e-3);

}  // namespace viscowave
