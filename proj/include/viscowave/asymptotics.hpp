#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "viscowave/grid.hpp"
#include "viscowave/medium.hpp"
#include "viscowave/problem.hpp"
#include "viscowave/solution_field.hpp"
#include "viscowave/spectral_kernel.hpp"

namespace viscowave {

/// Exponents of the shape bounds. Each must lie in its open interval:
/// gamma in (1/2, 1), delta in (0, 2), eta in (0, 1), k in (0, 1/2).
struct BoundExponents {
  double gamma = 0.75;
  double delta = 1.0;
  double eta = 0.5;
  double k = 0.25;

  void validate() const;
  /// m = min(1 - gamma, 1 - eta, 1/2 - k)
  double m() const;
};

enum class Theorem { T31, T32, T33, T41 };

std::string_view to_string(Theorem t) noexcept;
Theorem parse_theorem(std::string_view s);

enum class TimeRegime { Slow, Fast, Boundary };

std::string_view to_string(TimeRegime r) noexcept;

/// slow if eps t < 1 - band, fast if eps t > 1 + band, boundary otherwise.
TimeRegime regime_classify(double eps, double t, double band = 0.05);

/// |sum_n [G_n^eps(t) - e^{-eps t/2} G_n^0(t)] g_n / n^2| (order 0) or the
/// absolute t-derivative of the bracketed series (order 1), with
/// g_n = (2/pi) cos(n xi) cos(n x). The slowly converging part of the limit
/// series is summed in closed form; tail_bound bounds what is omitted.
SeriesValue kernel_gap(const MediumParams& params, double x, double xi, double t,
                       const Truncation& trunc = {}, int order = 0);

/// eps |G(x, xi, t)| for the series part of the viscous Green function.
SeriesValue scaled_green_norm(const MediumParams& params, double x, double xi, double t,
                              const Truncation& trunc = {});

/// Constants and data norms entering the T41 right-hand side.
struct BoundConstants {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double K0 = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double K3 = 0.0;
  double H = 0.0;
  double H1 = 0.0;
  std::string provenance = "fitted";
};

/// Sup-norms of the data: |F0|, |F1|, |F0''|, |F1''|, |F_xx| and
/// |int_0^t F| (sup over x and t in [0, T]).
struct DataNorms {
  double f0 = 0.0;
  double f1 = 0.0;
  double f0_xx = 0.0;
  double f1_xx = 0.0;
  double f_int = 0.0;
  double f_xx = 0.0;
};

DataNorms data_norms(const NeumannProblem& problem);

/// Fills K0..K3, H, H1 from A, B (already set in `c`) and the data norms.
BoundConstants assemble_constants(const MediumParams& params, const BoundExponents& e,
                                  const DataNorms& norms, double A, double B, double C);

/// r(t) = 1 + t + t^{1-gamma} + t^{2-delta}
double shape_r(const BoundExponents& e, double t);
/// p(t) = 2t + t^{1-gamma} + 3
double shape_p(const BoundExponents& e, double t);
/// k(t) = (2/a)^{2-gamma} Gamma(2-gamma, ta/2) + (2/a)^{3-delta} Gamma(3-delta, ta/2)
double shape_k(const BoundExponents& e, double a, double t);

/// Right-hand shape of each theorem without its leading constant:
///   T31: eps^{1-gamma} r(t) e^{-at/2} + eps e^{-theta/4}
///   T32: eps^m (e^{-theta/2} + p(t) e^{-at/2})
///   T33: (1+t) eps^{1/2-k} e^{-at/2} + eps^{1-eta} e^{-theta/4}
///   T41: the full right side with the constants in `aux` (required).
/// theta = t / eps.
double bound_shape(Theorem theorem, const MediumParams& params, const BoundExponents& e, double t,
                   const BoundConstants* aux = nullptr);

/// |u - e^{-eps t/2} U| at every node and its sup over x per time slice.
struct GapField {
  std::vector<double> values;
  std::vector<double> slice_sup;
  std::vector<int> slice_argmax;  ///< x index of the slice maximum
};

GapField solution_gap(const SolutionField& u, const SolutionField& U, double eps);

/// Sweep over eps x t x (x, xi). For T41 the (x, xi) lists are ignored: the
/// left side is the x-sup of the solution gap on the solver grid.
struct SweepDomain {
  double a = 0.5;
  std::vector<double> eps;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> xi;
  BoundExponents exponents;
  Truncation trunc;
  int threads = 1;
  /// T31/T32: also sample the times t = +-x +- xi + 2 pi k at which the
  /// limit-kernel series has kinks, so the sup is not missed between grid
  /// points.
  bool wavefronts = true;
  // T41 only.
  std::string preset = "smooth";
  int nx = 201;
  double dt = 0.005;
  double T = 50.0;
};

/// eps in {0.1, 0.05, 0.02, 0.01, 0.005}, t log-spaced over [1e-2, 50],
/// (x, xi) on {0, pi/4, pi/2, 3pi/4, pi}^2, up to 16384 modes per series.
SweepDomain default_sweep_domain(int t_points = 120);

std::vector<double> log_spaced(double lo, double hi, int count);
/// The t list of a T31/T32 sweep: d.t merged with the wavefront times inside
/// [min t, max t] when d.wavefronts is set, sorted and without duplicates.
std::vector<double> sweep_times(const SweepDomain& d);

struct SweepRow {
  Theorem theorem = Theorem::T31;
  double eps = 0.0;
  double t = 0.0;
  double x = 0.0;
  std::optional<double> xi;
  double lhs = 0.0;
  double shape = 0.0;
  double ratio = 0.0;
  TimeRegime regime = TimeRegime::Slow;
};

struct EpsSummary {
  double eps = 0.0;
  double max_ratio = 0.0;
  double max_lhs = 0.0;
  double t_at_max = 0.0;
};

struct SweepReport {
  Theorem theorem = Theorem::T31;
  std::vector<SweepRow> rows;
  std::vector<EpsSummary> per_eps;  ///< ordered as the eps list
  double fitted = 0.0;              ///< max ratio over the domain
  int excluded = 0;                 ///< rows whose shape underflowed
  int unconverged = 0;              ///< cells whose series tail exceeded tail_tol
  double max_tail = 0.0;
  /// max / min of the per-eps maxima (1 when all agree; inf if a max is 0).
  double spread = 0.0;
  /// Largest factor by which the per-eps maximum grows from one eps to the
  /// next smaller one (<= 1 means no growth).
  double max_growth = 0.0;
  /// Least-squares slope of log(max ratio) against log(eps).
  double trend_slope = 0.0;
  std::optional<BoundConstants> constants;  ///< T41 only
};

/// Fits the constant of one theorem: the maximum of lhs / shape over the
/// domain, with per-eps maxima for the eps-uniformity check. For T41 the
/// constants A, B, C are fitted first from T31, T32, T33 on the same domain
/// unless supplied.
SweepReport fit_constants(Theorem theorem, const SweepDomain& domain,
                          const std::optional<BoundConstants>& abc = std::nullopt);

/// Recomputes spread, growth and slope from per_eps.
void summarize(SweepReport& report);

/// Proof-internal quantities for the diagnostics table.
struct BoundDiagnostics {
  int n1 = 0;
  int n2 = 0;
  int n_c = 0;       ///< integer part of (1 + sqrt(1 - a eps c)) / (eps sqrt(c))
  double c = 0.5;
  double rho = 0.0;  ///< 1 - a + 2 sqrt(1 - a)
  double g0 = 0.0;   ///< sqrt(1 - a^2/4)
  double g1 = 0.0;   ///< (a + 1/2) / 2
  double s = 0.0;
  double q = 0.0;
  double ell = 0.0;  ///< min(s, q)
  double g2 = 0.0;
  double phi = 0.0;  ///< sqrt(eps) h_n / omega_n at n = N2 + 1
  double beta = 0.0;
  double zeta2 = 0.0;
};

BoundDiagnostics bound_diagnostics(const MediumParams& params, double c = 0.5);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// sup_x |u(x, t_k) - mean_x u(x, t_k)| for every slice (trapezoid mean).
std::vector<double> oscillation_sup(const SolutionField& u);

/// Log-linear slope of `values` against the grid times in [t_lo, t_hi].
double log_linear_slope(const Grid& grid, std::span<const double> values, double t_lo, double t_hi);

}  // namespace viscowave
