#include "viscowave/spectral_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "viscowave/errors.hpp"
#include "viscowave/series.hpp"

namespace viscowave {

namespace {

constexpr double kPi = std::numbers::pi;

// Lower bound omega_n >= kOmegaFloor * eps * n^2, valid for n >= sqrt(8)/eps.
constexpr double kOmegaFloor = 0.35;

void check_order(int order, int max_order) {
  if (order < 0 || order > max_order) {
    throw DomainError("kernel derivative order must be in [0, " +
                      std::to_string(max_order) + "], got " + std::to_string(order));
  }
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("time must be finite and non-negative, got " + std::to_string(t));
  }
}

void check_position(double x, const char* name) {
  if (!(x >= 0.0 && x <= kPi)) {
    throw DomainError(std::string(name) + " must lie in [0, pi], got " + std::to_string(x));
  }
}

// e^{-h t} phi(t) with phi'' = w phi; `stiffness` is h^2 - w (n^2 for a mode).
double modal_kernel_impl(double h, double w, double stiffness, double t, int order) {
  if (std::abs(w) <= kDegeneracyTol) return detail::modal_kernel_taylor(h, w, t, order);
  if (w < 0.0) {
    const double wt = std::sqrt(-w);
    const double damp = std::exp(-h * t);
    const double phi = std::sin(wt * t) / wt;
    const double dphi = std::cos(wt * t);
    switch (order) {
      case 0: return damp * phi;
      case 1: return damp * (dphi - h * phi);
      default: return damp * ((w + h * h) * phi - 2.0 * h * dphi);
    }
  }
  // Overdamped: roots -lambda and -mu with lambda * mu = stiffness.
  const double omega = std::sqrt(w);
  const double mu = h + omega;
  const double lambda = stiffness / mu;
  const double two_omega = 2.0 * omega;
  if (two_omega * t < 1.0) {
    const double slow = std::exp(-lambda * t);
    const double em = std::expm1(-two_omega * t) / two_omega;  // -(1 - e^{-2wt}) / 2w
    switch (order) {
      case 0: return -slow * em;
      case 1: return slow * (1.0 + mu * em);
      default: return slow * (-2.0 * h - mu * mu * em);
    }
  }
  const double slow = std::exp(-lambda * t);
  const double fast = std::exp(-mu * t);
  switch (order) {
    case 0: return (slow - fast) / two_omega;
    case 1: return (-lambda * slow + mu * fast) / two_omega;
    default: return (lambda * lambda * slow - mu * mu * fast) / two_omega;
  }
}

}  // namespace

MediumParams::MediumParams(double a, double eps) : a_(a), eps_(eps) {
  if (!(a > 0.0 && a < 1.0)) {
    throw ValidationError("damping a must lie in (0, 1), got " + std::to_string(a));
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ValidationError("viscosity eps must lie in (0, 1), got " + std::to_string(eps));
  }
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::ZeroMode: return "zero_mode";
    case Regime::Trigonometric: return "trigonometric";
    case Regime::Degenerate: return "degenerate";
    case Regime::Hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

std::string_view to_string(GreenKind k) noexcept {
  return k == GreenKind::Perturbed ? "perturbed" : "limit";
}

GreenKind parse_green_kind(std::string_view s) {
  if (s == "perturbed") return GreenKind::Perturbed;
  if (s == "limit") return GreenKind::Limit;
  throw ValidationError("unknown Green function kind '" + std::string(s) +
                        "' (expected perturbed|limit)");
}

ModeKernel classify(const MediumParams& params, int n) {
  if (n < 0) throw DomainError("mode index must be non-negative");
  ModeKernel m;
  m.n = n;
  const double nn = static_cast<double>(n);
  m.h = 0.5 * (params.a() + params.eps() * nn * nn);
  m.omega_sq = (m.h - nn) * (m.h + nn);
  if (n == 0) {
    m.regime = Regime::ZeroMode;
  } else if (m.omega_sq < -kDegeneracyTol) {
    m.regime = Regime::Trigonometric;
  } else if (m.omega_sq > kDegeneracyTol) {
    m.regime = Regime::Hyperbolic;
  } else {
    m.regime = Regime::Degenerate;
  }
  return m;
}

ModeThresholds mode_thresholds(const MediumParams& params) {
  const double a = params.a();
  const double eps = params.eps();
  const double root = std::sqrt(1.0 - a * eps);
  ModeThresholds th;
  th.lower = a / (1.0 + root);  // == (1 - root) / eps without cancellation
  th.upper = (1.0 + root) / eps;
  th.n1 = static_cast<int>(std::floor(th.lower)) + 1;
  th.n2 = static_cast<int>(std::ceil(th.upper)) - 1;
  return th;
}

namespace detail {

double modal_kernel(double h, double omega_sq, double t, int order) {
  check_order(order, 2);
  check_time(t);
  return modal_kernel_impl(h, omega_sq, h * h - omega_sq, t, order);
}

double modal_kernel_taylor(double h, double omega_sq, double t, int order) {
  check_order(order, 2);
  const double s = omega_sq * t * t;
  const double phi = t * (1.0 + s / 6.0 + s * s / 120.0 + s * s * s / 5040.0);
  const double dphi = 1.0 + s / 2.0 + s * s / 24.0 + s * s * s / 720.0;
  const double damp = std::exp(-h * t);
  switch (order) {
    case 0: return damp * phi;
    case 1: return damp * (dphi - h * phi);
    default: return damp * ((omega_sq + h * h) * phi - 2.0 * h * dphi);
  }
}

StepRecurrence step_recurrence(double h, double omega_sq, double dt) {
  StepRecurrence r;
  const double stiffness = h * h - omega_sq;
  r.c2 = -std::exp(-2.0 * h * dt);
  if (std::abs(omega_sq) <= kDegeneracyTol) {
    const double s = omega_sq * dt * dt;
    r.c1 = 2.0 * std::exp(-h * dt) * (1.0 + s / 2.0 + s * s / 24.0 + s * s * s / 720.0);
  } else if (omega_sq < 0.0) {
    r.c1 = 2.0 * std::exp(-h * dt) * std::cos(std::sqrt(-omega_sq) * dt);
  } else {
    const double omega = std::sqrt(omega_sq);
    const double mu = h + omega;
    r.c1 = std::exp(-(stiffness / mu) * dt) + std::exp(-mu * dt);
  }
  r.k1 = modal_kernel_impl(h, omega_sq, stiffness, dt, 0);
  return r;
}

int asymptotic_mode_floor(double eps) { return static_cast<int>(std::ceil(4.0 / eps)); }

// In s = 1/n^2 the slow root is lambda(s) = 2 / (eps + a s + sqrt(D)), with
// D = (eps + a s)^2 - 4 s, and the slow branch of G_n is s f(s),
// f = e^{-lambda t} / sqrt(D). On the disc |s| <= R = eps^2/8:
//   Re D >= eps^2 d, d = 1/2 - a eps/4 - (a eps)^2/64,
//   |lambda - 1/eps| <= L,
// so |f| <= M = e^{-(1/eps - L) t} / (eps sqrt(d)) and Cauchy's estimate
// bounds the Taylor remainder past s^1 by 2 M (s/R)^2 for s <= R/2, i.e.
// n >= 4/eps.
SlowBranch slow_branch(const MediumParams& p, double t) {
  const double a = p.a();
  const double eps = p.eps();
  const double ae = a * eps;
  const double radius = eps * eps / 8.0;
  const double d = 0.5 - ae / 4.0 - ae * ae / 64.0;
  const double sd = std::sqrt(d);
  const double num = a * radius + radius * (4.0 + 2.0 * ae + a * a * radius) / (eps * (1.0 + sd));
  const double lip = num / (eps * eps * (1.0 - ae / 8.0 + sd));
  const double decay = std::exp(-t / eps);
  const double m_f = std::exp(-(1.0 / eps - lip) * t) / (eps * sd);
  const double m_g = (1.0 / eps + lip) * m_f;

  SlowBranch b;
  const double lambda1 = (1.0 - ae) / (eps * eps * eps);
  b.f0 = decay / eps;
  b.f1 = decay * ((2.0 - ae) / (eps * eps * eps) - t * lambda1 / eps);
  b.g0 = -b.f0 / eps;
  b.g1 = -(lambda1 * b.f0 + b.f1 / eps);
  b.slow_g = 2.0 * m_f / (radius * radius);
  b.slow_d = 2.0 * m_g / (radius * radius);
  b.fast_g = 1.0 / (2.0 * kOmegaFloor * eps);
  b.fast_d = (1.0 + ae / 16.0) / (2.0 * kOmegaFloor);
  b.q = 0.5 * eps * t;
  return b;
}

double gaussian_tail(double q, int big_n, int power) {
  if (!(q > 0.0)) return std::numeric_limits<double>::infinity();
  const double n1 = big_n + 1.0;
  return std::exp(-q * n1 * n1) * (1.0 + 1.0 / (2.0 * q * n1)) / std::pow(static_cast<double>(big_n), power);
}

double power_tail(int big_n, int power) {
  return 1.0 / ((power - 1) * std::pow(static_cast<double>(big_n), power - 1));
}

}  // namespace detail

double eval_kernel_eps(const MediumParams& params, int n, double t, int order) {
  if (n < 1) throw DomainError("eval_kernel_eps needs n >= 1; use zero_mode_response for n = 0");
  check_order(order, 2);
  check_time(t);
  const ModeKernel m = classify(params, n);
  const double nn = static_cast<double>(n);
  return modal_kernel_impl(m.h, m.omega_sq, nn * nn, t, order);
}

double eval_kernel_zero(const MediumParams& params, int n, double t, int order) {
  if (n < 1) throw DomainError("eval_kernel_zero needs n >= 1");
  check_order(order, 2);
  check_time(t);
  const double h = 0.5 * params.a();
  const double nn = static_cast<double>(n);
  return modal_kernel_impl(h, (h - nn) * (h + nn), nn * nn, t, order);
}

double zero_mode_response(double a, double t, int order) {
  if (!(a > 0.0)) throw DomainError("zero_mode_response needs a > 0");
  check_order(order, 2);
  check_time(t);
  switch (order) {
    case 0: return -std::expm1(-a * t) / a;
    case 1: return std::exp(-a * t);
    default: return -a * std::exp(-a * t);
  }
}

double decay_rate_beta(const MediumParams& params) {
  const double a = params.a();
  const double eps = params.eps();
  return std::min({1.0 / (eps + a), 0.5 * (a + eps), a});
}

void Truncation::validate() const {
  if (max_modes < 1) throw ValidationError("truncation max_modes must be >= 1");
  if (!(tail_tol >= 0.0) || !std::isfinite(tail_tol)) {
    throw ValidationError("truncation tail_tol must be finite and >= 0");
  }
}

namespace {

ModalSeries perturbed_modal_series(const MediumParams& p, double t, const Truncation& trunc) {
  ModalSeries out;
  out.t = t;
  out.tail_tol = trunc.tail_tol;
  if (t == 0.0) return out;

  const int floor_mode =
      std::max(detail::asymptotic_mode_floor(p.eps()), mode_thresholds(p).n2 + 1);
  const detail::SlowBranch b = detail::slow_branch(p, t);
  auto remainder = [&](int n) {
    const double s = 1.0 / (static_cast<double>(n) * n);
    return eval_kernel_eps(p, n, t, 0) - s * (b.f0 + b.f1 * s);
  };
  auto tail = [&](int n) {
    return b.slow_g * detail::power_tail(n, 6) + b.fast_g * detail::gaussian_tail(b.q, n, 2);
  };
  const auto choice = detail::choose_modes(floor_mode, trunc, tail, remainder);

  out.coeffs.resize(choice.modes);
  for (int n = 1; n <= choice.modes; ++n) out.coeffs[n - 1] = remainder(n);
  out.cos2 = b.f0;
  out.cos4 = b.f1;
  out.tail_bound = (2.0 / kPi) * choice.tail;
  return out;
}

ModalSeries limit_modal_series(const MediumParams& p, double t, const Truncation& trunc) {
  ModalSeries out;
  out.t = t;
  out.tail_tol = trunc.tail_tol;
  if (t == 0.0) return out;

  const double a = p.a();
  const double damp = std::exp(-0.5 * a * t);
  const double g0 = std::sqrt(1.0 - 0.25 * a * a);
  // sum_{n>N} |G_n^0 - damp sin(nt)/n| <= damp a^2 (t+1) / (4 g0 N)
  const double coeff = (2.0 / kPi) * damp * a * a * (t + 1.0) / (4.0 * g0);
  int modes = trunc.max_modes;
  if (trunc.tail_tol > 0.0) {
    const double need = std::ceil(coeff / trunc.tail_tol);
    if (need < static_cast<double>(modes)) modes = std::max(1, static_cast<int>(need));
  }
  out.coeffs.resize(modes);
  for (int n = 1; n <= modes; ++n) {
    out.coeffs[n - 1] = eval_kernel_zero(p, n, t, 0) - damp * std::sin(n * t) / n;
  }
  out.sin1 = damp;
  out.tail_bound = coeff / modes;
  return out;
}

}  // namespace

SeriesValue green_series(const MediumParams& params, GreenKind kind, double x, double xi,
                         double t, const Truncation& trunc) {
  trunc.validate();
  check_position(x, "x");
  check_position(xi, "xi");
  check_time(t);
  return green_modal_series(params, kind, t, trunc).evaluate(x, xi);
}

ModalSeries green_modal_series(const MediumParams& params, GreenKind kind, double t,
                               const Truncation& trunc) {
  trunc.validate();
  check_time(t);
  return kind == GreenKind::Perturbed ? perturbed_modal_series(params, t, trunc)
                                      : limit_modal_series(params, t, trunc);
}

SeriesValue ModalSeries::evaluate(double x, double xi) const {
  check_position(x, "x");
  check_position(xi, "xi");
  series::CompensatedSum sum;
  for (int n = 1; n <= modes(); ++n) sum += coeffs[n - 1] * std::cos(n * xi) * std::cos(n * x);
  if (cos2 != 0.0) sum += cos2 * series::cos_cos_p2(x, xi);
  if (cos4 != 0.0) sum += cos4 * series::cos_cos_p4(x, xi);
  if (cos6 != 0.0) sum += cos6 * series::cos_cos_p6(x, xi);
  if (sin1 != 0.0) sum += sin1 * series::sin_cos_cos(t, x, xi, series::sin_sum_p1);
  if (sin3 != 0.0) sum += sin3 * series::sin_cos_cos(t, x, xi, series::sin_sum_p3);
  if (ccos2 != 0.0) sum += ccos2 * series::cos_cos_cos_p2(t, x, xi);
  SeriesValue v;
  v.value = (2.0 / kPi) * sum.value();
  v.tail_bound = tail_bound;
  v.modes = modes();
  v.tail_tol = tail_tol;
  return v;
}

SeriesValue green_function(const MediumParams& params, GreenKind kind, double x, double xi,
                           double t, const Truncation& trunc) {
  SeriesValue s = green_series(params, kind, x, xi, t, trunc);
  s.value += zero_mode_response(params.a(), t) / kPi;
  return s;
}

}  // namespace viscowave
