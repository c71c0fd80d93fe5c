#pragma once

#include <cmath>
#include <string_view>
#include <vector>

#include "viscowave/medium.hpp"

namespace viscowave {

/// Width of the band |h_n^2 - n^2| <= kDegeneracyTol inside which the modal
/// kernel is evaluated through its Taylor expansion.
inline constexpr double kDegeneracyTol = 1e-9;

enum class Regime { ZeroMode, Trigonometric, Degenerate, Hyperbolic };

std::string_view to_string(Regime r) noexcept;

/// Per-mode data of the viscous modal equation
///   T'' + (a + eps n^2) T' + n^2 T = 0.
struct ModeKernel {
  int n = 0;
  double h = 0.0;         ///< (a + eps n^2) / 2
  double omega_sq = 0.0;  ///< h^2 - n^2, signed
  Regime regime = Regime::ZeroMode;
};

ModeKernel classify(const MediumParams& params, int n);

struct ModeThresholds {
  int n1 = 0;           ///< smallest integer strictly above `lower`
  int n2 = 0;           ///< largest integer strictly below `upper`
  double lower = 0.0;   ///< (1 - sqrt(1 - a eps)) / eps
  double upper = 0.0;   ///< (1 + sqrt(1 - a eps)) / eps
};

/// Modes 1..n2 oscillate (trigonometric kernel), modes above n2 are
/// overdamped (hyperbolic kernel).
ModeThresholds mode_thresholds(const MediumParams& params);

/// Viscous modal kernel G_n^eps(t) = e^{-h t} sinh(omega t) / omega and its
/// first two time derivatives (order 0, 1, 2). Requires n >= 1 and t >= 0.
double eval_kernel_eps(const MediumParams& params, int n, double t, int order = 0);

/// Damped-wave modal kernel G_n^0(t) = e^{-a t / 2} sin(omega_0 t) / omega_0
/// with omega_0 = sqrt(n^2 - a^2 / 4); order 0, 1 or 2.
double eval_kernel_zero(const MediumParams& params, int n, double t, int order = 0);

/// Response of the spatial mean, (1 - e^{-a t}) / a, or its derivatives.
double zero_mode_response(double a, double t, int order = 0);

/// beta = min{1/(eps + a), (a + eps)/2, a}: exponential decay rate of the
/// series part of the Green function.
double decay_rate_beta(const MediumParams& params);

/// Truncation policy for the cosine series. A series is summed up to the
/// first mode count at which its rigorous tail bound drops below `tail_tol`,
/// but never beyond `max_modes`.
struct Truncation {
  int max_modes = 2048;
  double tail_tol = 1e-10;

  void validate() const;
};

/// Truncated series value with the bound on the omitted tail.
struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  int modes = 0;
  double tail_tol = 0.0;

  bool converged() const noexcept { return tail_bound <= tail_tol; }
};

/// A cosine series (2/pi) sum_n c_n cos(n xi) cos(n x) split into explicitly
/// summed remainder coefficients and closed-form lattice sums:
///   cos2  * sum cos(n xi) cos(n x) / n^2      (likewise cos4, cos6)
///   sin1  * sum sin(n t) cos(n xi) cos(n x) / n
///   sin3  * sum sin(n t) cos(n xi) cos(n x) / n^3
///   ccos2 * sum cos(n t) cos(n xi) cos(n x) / n^2
/// The coefficients do not depend on (x, xi), so one expansion serves every
/// evaluation point at a fixed time.
struct ModalSeries {
  double t = 0.0;
  std::vector<double> coeffs;  ///< c_1 .. c_modes
  double cos2 = 0.0;
  double cos4 = 0.0;
  double cos6 = 0.0;
  double sin1 = 0.0;
  double sin3 = 0.0;
  double ccos2 = 0.0;
  double tail_bound = 0.0;     ///< bound on the omitted tail, (2/pi) included
  double tail_tol = 0.0;

  int modes() const noexcept { return static_cast<int>(coeffs.size()); }
  SeriesValue evaluate(double x, double xi) const;
};

enum class GreenKind { Perturbed, Limit };

std::string_view to_string(GreenKind k) noexcept;
GreenKind parse_green_kind(std::string_view s);

/// Full Neumann Green function
///   (1/pi)(1 - e^{-a t})/a + (2/pi) sum_n K_n(t) cos(n xi) cos(n x)
/// with K_n = G_n^eps (Perturbed) or G_n^0 (Limit). x, xi in [0, pi], t >= 0.
/// Non-convergence is reported through SeriesValue::converged(), not thrown.
SeriesValue green_function(const MediumParams& params, GreenKind kind, double x,
                           double xi, double t, const Truncation& trunc = {});

/// Expansion of the series part at time t, reusable across (x, xi).
ModalSeries green_modal_series(const MediumParams& params, GreenKind kind, double t,
                               const Truncation& trunc = {});

/// The series part alone (zero mode excluded).
SeriesValue green_series(const MediumParams& params, GreenKind kind, double x,
                         double xi, double t, const Truncation& trunc = {});

namespace detail {

/// e^{-h t} phi(t) and derivatives, where phi'' = omega_sq phi, phi(0) = 0,
/// phi'(0) = 1. Shared by every regime; exposed for testing the degenerate
/// band.
double modal_kernel(double h, double omega_sq, double t, int order);

/// Same, always through the 4-term Taylor expansion of sinh(z)/z.
double modal_kernel_taylor(double h, double omega_sq, double t, int order);

/// Coefficients of the exact two-step recurrence K(t + dt) = c1 K(t) + c2 K(t - dt)
/// obeyed by every modal kernel.
struct StepRecurrence {
  double c1 = 0.0;
  double c2 = 0.0;
  double k1 = 0.0;  ///< K(dt)
};
StepRecurrence step_recurrence(double h, double omega_sq, double dt);

/// Smallest mode from which the analytic tail estimates of the viscous
/// kernel hold: ceil(4 / eps).
int asymptotic_mode_floor(double eps);

/// Expansion of the overdamped branch of the viscous kernel in s = 1/n^2.
/// For n at or above the asymptotic floor and n > N2:
///   |G_n  - s (f0 + f1 s)| <= slow_g s^3 + fast_g s e^{-q n^2}
///   |G_n' - s (g0 + g1 s)| <= slow_d s^3 + fast_d e^{-q n^2}
struct SlowBranch {
  double f0 = 0.0;
  double f1 = 0.0;
  double g0 = 0.0;
  double g1 = 0.0;
  double slow_g = 0.0;
  double slow_d = 0.0;
  double fast_g = 0.0;
  double fast_d = 0.0;
  double q = 0.0;  ///< eps t / 2
};
SlowBranch slow_branch(const MediumParams& params, double t);

/// Upper bound on sum_{n>N} e^{-q n^2} / n^p (infinite for q = 0).
double gaussian_tail(double q, int big_n, int power);
/// Upper bound on sum_{n>N} 1 / n^p, p >= 2.
double power_tail(int big_n, int power);

struct ModeChoice {
  int modes = 0;
  double tail = 0.0;
};

/// Picks the smallest N in [floor_mode, max_modes] whose analytic tail bound
/// tail(N) is within tol. If max_modes < floor_mode the terms in between are
/// bounded by summing |term(n)| explicitly on top of tail(floor_mode).
/// tail must be non-increasing in N.
template <typename Tail, typename Term>
ModeChoice choose_modes(int floor_mode, const Truncation& trunc, Tail tail, Term term) {
  ModeChoice c;
  if (trunc.max_modes >= floor_mode) {
    int lo = floor_mode;
    int hi = trunc.max_modes;
    if (tail(hi) <= trunc.tail_tol) {
      while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (tail(mid) <= trunc.tail_tol) hi = mid; else lo = mid + 1;
      }
    }
    c.modes = hi;
    c.tail = tail(hi);
    return c;
  }
  double explicit_tail = 0.0;
  for (int n = trunc.max_modes + 1; n <= floor_mode; ++n) explicit_tail += std::abs(term(n));
  c.modes = trunc.max_modes;
  c.tail = explicit_tail + tail(floor_mode);
  return c;
}

}  // namespace detail

}  // namespace viscowave
