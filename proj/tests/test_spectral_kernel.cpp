#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "viscowave/errors.hpp"
#include "viscowave/series.hpp"
#include "viscowave/spectral_kernel.hpp"

using namespace viscowave;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent long double evaluation of G_n^eps away from the degenerate band.
long double kernel_ld(long double a, long double eps, int n, long double t) {
  const long double nn = n;
  const long double h = (a + eps * nn * nn) / 2;
  const long double w = h * h - nn * nn;
  if (w < 0) {
    const long double om = std::sqrt(-w);
    return std::exp(-h * t) * std::sin(om * t) / om;
  }
  const long double om = std::sqrt(w);
  const long double mu = h + om;
  const long double lambda = nn * nn / mu;
  return (std::exp(-lambda * t) - std::exp(-mu * t)) / (2 * om);
}

long double cos_sum_p2_ld(long double theta) {
  const long double pi = std::numbers::pi_v<long double>;
  long double s = std::fmod(std::abs(theta), 2 * pi);
  return pi * pi / 6 - pi * s / 2 + s * s / 4;
}

// Green series with a one-term subtraction summed directly to `big_n`.
double green_series_reference(double a, double eps, double x, double xi, double t, int big_n) {
  const long double f0 = std::exp(-static_cast<long double>(t) / eps) / eps;
  long double s = 0.0L;
  for (int n = big_n; n >= 1; --n) {
    const long double nn = n;
    const long double g = std::cos(nn * x) * std::cos(nn * xi);
    s += (kernel_ld(a, eps, n, t) - f0 / (nn * nn)) * g;
  }
  s += f0 * 0.5L * (cos_sum_p2_ld(static_cast<long double>(x) - xi) + cos_sum_p2_ld(static_cast<long double>(x) + xi));
  return static_cast<double>(2 * s / std::numbers::pi_v<long double>);
}

double ode_residual(const MediumParams& p, int n, double t, double& scale) {
  const double g = eval_kernel_eps(p, n, t, 0);
  const double g1 = eval_kernel_eps(p, n, t, 1);
  const double g2 = eval_kernel_eps(p, n, t, 2);
  const double b = p.a() + p.eps() * n * n;
  const double c = static_cast<double>(n) * n;
  scale = std::abs(g2) + std::abs(b * g1) + std::abs(c * g);
  return g2 + b * g1 + c * g;
}

}  // namespace

TEST_CASE("parameters outside (0, 1) are rejected") {
  CHECK_THROWS_AS(MediumParams(0.0, 0.1), ValidationError);
  CHECK_THROWS_AS(MediumParams(0.5, 1.0), ValidationError);
  CHECK_THROWS_AS(MediumParams(1.2, 0.1), ValidationError);
  CHECK_NOTHROW(MediumParams(0.5, 0.1));
  const MediumParams p(0.5, 0.1);
  CHECK_THROWS_AS(eval_kernel_eps(p, 0, 1.0), DomainError);
  CHECK_THROWS_AS(eval_kernel_eps(p, 1, -1.0), DomainError);
  CHECK_THROWS_AS(eval_kernel_eps(p, 1, 1.0, 3), DomainError);
  CHECK_THROWS_AS(green_series(p, GreenKind::Perturbed, 4.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(parse_green_kind("viscous"), ValidationError);
  CHECK(parse_green_kind("limit") == GreenKind::Limit);
}

TEST_CASE("modal kernels solve the modal ODE with unit initial slope") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> ua(0.01, 0.99), ut(0.0, 20.0);
  std::uniform_int_distribution<int> un(1, 500);
  for (int i = 0; i < 500; ++i) {
    const MediumParams p(ua(rng), ua(rng));
    const int n = un(rng);
    const double t = ut(rng);
    double scale = 0.0;
    const double r = ode_residual(p, n, t, scale);
    CAPTURE(p.a());
    CAPTURE(p.eps());
    CAPTURE(n);
    CAPTURE(t);
    CHECK(std::abs(r) <= 1e-12 * std::max(scale, 1.0));
    CHECK(std::abs(r) < 1e-8);
  }
  const MediumParams p(0.3, 0.2);
  for (int n : {1, 5, 9, 10, 40}) {
    CHECK(eval_kernel_eps(p, n, 0.0, 0) == 0.0);
    CHECK(eval_kernel_eps(p, n, 0.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_kernel_eps(p, n, 0.0, 2) == doctest::Approx(-(p.a() + p.eps() * n * n)).epsilon(1e-14));
    CHECK(eval_kernel_zero(p, n, 0.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  }
  for (double t : {0.0, 0.5, 3.0}) {
    const double z = zero_mode_response(p.a(), t, 0);
    CHECK(zero_mode_response(p.a(), t, 2) + p.a() * zero_mode_response(p.a(), t, 1) == doctest::Approx(0.0));
    CHECK(z == doctest::Approx((1.0 - std::exp(-p.a() * t)) / p.a()));
  }
}

TEST_CASE("modal kernels agree with an RK4 integration of the modal ODE") {
  struct Case {
    double a, eps;
    int n;
    double t;
  };
  for (const Case c : {Case{0.5, 0.1, 3, 2.0}, Case{0.5, 0.1, 20, 1.5}, Case{0.2, 0.3, 6, 4.0},
                       Case{0.9, 0.05, 1, 7.0}}) {
    const MediumParams p(c.a, c.eps);
    const auto ref = testing::rk4_modal(c.a + c.eps * c.n * c.n, c.n * c.n, 0.0, 1.0, c.t, 40000);
    CHECK(eval_kernel_eps(p, c.n, c.t, 0) == doctest::Approx(ref[0]).epsilon(1e-9).scale(1e-3));
    CHECK(eval_kernel_eps(p, c.n, c.t, 1) == doctest::Approx(ref[1]).epsilon(1e-9).scale(1e-3));
    const auto ref0 = testing::rk4_modal(c.a, c.n * c.n, 0.0, 1.0, c.t, 40000);
    CHECK(eval_kernel_zero(p, c.n, c.t, 0) == doctest::Approx(ref0[0]).epsilon(1e-9).scale(1e-3));
    CHECK(eval_kernel_zero(p, c.n, c.t, 1) == doctest::Approx(ref0[1]).epsilon(1e-9).scale(1e-3));
  }
}

TEST_CASE("regimes follow the mode thresholds") {
  for (double eps : {0.02, 0.1, 0.37, 0.9}) {
    const MediumParams p(0.5, eps);
    const auto th = mode_thresholds(p);
    CHECK(th.lower < th.upper);
    CHECK(th.lower == doctest::Approx((1.0 - std::sqrt(1.0 - 0.5 * eps)) / eps));
    CHECK(classify(p, 0).regime == Regime::ZeroMode);
    for (int n = 1; n <= th.n2 + 20; ++n) {
      const auto m = classify(p, n);
      CAPTURE(n);
      if (n <= th.n2) {
        CHECK(m.regime == Regime::Trigonometric);
        CHECK(m.omega_sq < 0.0);
      } else {
        CHECK(m.regime != Regime::Trigonometric);
      }
    }
  }
}

TEST_CASE("the degenerate band is continuous across its edges") {
  for (double h : {0.7, 3.0, 12.0}) {
    for (double t : {0.1, 1.0, 5.0}) {
      for (int order = 0; order <= 2; ++order) {
        const double inside = detail::modal_kernel(h, 0.999999e-9, t, order);
        const double outside = detail::modal_kernel(h, 1.000001e-9, t, order);
        const double neg_inside = detail::modal_kernel(h, -0.999999e-9, t, order);
        const double neg_outside = detail::modal_kernel(h, -1.000001e-9, t, order);
        const double scale = std::max(1.0, std::abs(inside));
        CHECK(std::abs(inside - outside) < 1e-12 * scale);
        CHECK(std::abs(neg_inside - neg_outside) < 1e-12 * scale);
        // both forms are valid at moderate omega_sq and must coincide
        for (double w : {1e-6, -1e-6}) {
          const double closed = detail::modal_kernel(h, w, t, order);
          const double taylor = detail::modal_kernel_taylor(h, w, t, order);
          CHECK(std::abs(closed - taylor) < 1e-12 * std::max(1.0, std::abs(closed)));
        }
      }
    }
  }
}

TEST_CASE("kernel derivatives match finite differences at second order") {
  const MediumParams p(0.4, 0.15);
  for (int n : {2, 8, 30}) {
    for (double t : {0.3, 2.0}) {
      for (int order = 1; order <= 2; ++order) {
        auto err = [&](double dt) {
          const double fd = (eval_kernel_eps(p, n, t + dt, order - 1) - eval_kernel_eps(p, n, t - dt, order - 1)) / (2 * dt);
          return std::abs(fd - eval_kernel_eps(p, n, t, order));
        };
        const double e1 = err(1e-3), e2 = err(5e-4);
        CAPTURE(n);
        CAPTURE(t);
        CAPTURE(order);
        CHECK(std::log2(e1 / e2) >= 1.9);
      }
    }
  }
}

TEST_CASE("the slow-branch expansion bounds every mode above the floor") {
  for (double a : {0.1, 0.5, 0.9}) {
    for (double eps : {0.3, 0.1, 0.02}) {
      const MediumParams p(a, eps);
      const int floor_mode = std::max(detail::asymptotic_mode_floor(eps), mode_thresholds(p).n2 + 1);
      for (double t : {0.01, 0.2, 1.0, 5.0}) {
        const auto b = detail::slow_branch(p, t);
        std::vector<int> modes;
        for (int n = floor_mode; n < floor_mode + 2000; ++n) modes.push_back(n);
        for (int n : {10000, 100000, 1000000}) {
          if (n > floor_mode) modes.push_back(n);
        }
        for (int n : modes) {
          const double s = 1.0 / (static_cast<double>(n) * n);
          const double g = eval_kernel_eps(p, n, t, 0);
          const double dg = eval_kernel_eps(p, n, t, 1);
          const double fast = std::exp(-b.q * n * n);
          const double rg = std::abs(g - s * (b.f0 + b.f1 * s));
          const double rd = std::abs(dg - s * (b.g0 + b.g1 * s));
          const double slack_g = 1e-14 * (std::abs(g) + s * std::abs(b.f0));
          const double slack_d = 1e-14 * (std::abs(dg) + s * std::abs(b.g0));
          if (rg > b.slow_g * s * s * s + b.fast_g * s * fast + slack_g ||
              rd > b.slow_d * s * s * s + b.fast_d * fast + slack_d) {
            CAPTURE(a);
            CAPTURE(eps);
            CAPTURE(t);
            CAPTURE(n);
            FAIL_CHECK("slow-branch bound violated");
          }
        }
      }
    }
  }
}

TEST_CASE("tail helpers bound the sums they stand for") {
  for (int big_n : {5, 40, 300}) {
    for (int p : {2, 4, 6, 8}) {
      double direct = 0.0;
      for (int n = 4000000; n > big_n; --n) direct += 1.0 / std::pow(static_cast<double>(n), p);
      CHECK(direct <= detail::power_tail(big_n, p));
      if (big_n >= 40) CHECK(detail::power_tail(big_n, p) <= 1.2 * direct + 1.0 / std::pow(4e6, p - 1));
    }
    for (double q : {1e-4, 1e-2, 0.5}) {
      for (int p : {0, 2, 4}) {
        double direct = 0.0;
        for (int n = big_n + 1; n < big_n + 200000; ++n) {
          const double term = std::exp(-q * n * n) / std::pow(static_cast<double>(n), p);
          direct += term;
          if (term < 1e-300) break;
        }
        CHECK(direct <= detail::gaussian_tail(q, big_n, p) * (1.0 + 1e-12));
      }
    }
  }
  CHECK(std::isinf(detail::gaussian_tail(0.0, 10, 2)));
}

TEST_CASE("choose_modes picks the first count under tolerance") {
  auto tail = [](int n) { return 1.0 / (static_cast<double>(n) * n); };
  auto term = [](int n) { return 1.0 / (static_cast<double>(n) * n * n); };
  const auto c = detail::choose_modes(10, Truncation{100000, 1e-6}, tail, term);
  CHECK(c.modes == 1000);
  CHECK(c.tail <= 1e-6);
  const auto capped = detail::choose_modes(10, Truncation{200, 1e-9}, tail, term);
  CHECK(capped.modes == 200);
  CHECK(capped.tail == doctest::Approx(tail(200)));
  const auto below = detail::choose_modes(50, Truncation{20, 1e-9}, tail, term);
  double explicit_part = 0.0;
  for (int n = 21; n <= 50; ++n) explicit_part += term(n);
  CHECK(below.modes == 20);
  CHECK(below.tail == doctest::Approx(explicit_part + tail(50)));
}

TEST_CASE("Green series matches an independent long double reference") {
  struct Case {
    double a, eps, x, xi, t;
  };
  const Truncation trunc{16384, 1e-12};
  for (const Case c : {Case{0.5, 0.1, kPi / 2, kPi / 2, 0.5}, Case{0.5, 0.1, 0.0, 0.0, 0.1},
                       Case{0.3, 0.2, 1.0, 2.5, 2.0}, Case{0.8, 0.05, 0.4, 0.4, 0.1},
                       Case{0.5, 0.05, kPi, 0.0, 3.0}}) {
    const MediumParams p(c.a, c.eps);
    const SeriesValue v = green_series(p, GreenKind::Perturbed, c.x, c.xi, c.t, trunc);
    const double ref = green_series_reference(c.a, c.eps, c.x, c.xi, c.t, 60000);
    CAPTURE(c.eps);
    CAPTURE(c.t);
    CHECK(v.converged());
    CHECK(std::abs(v.value - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("Green function is symmetric and vanishes at t = 0") {
  const MediumParams p(0.5, 0.1);
  for (auto kind : {GreenKind::Perturbed, GreenKind::Limit}) {
    for (double x : {0.0, 0.8, 2.0, kPi}) {
      CHECK(green_function(p, kind, x, 1.1, 0.0).value == 0.0);
      const auto g1 = green_function(p, kind, x, 1.1, 0.7, {4096, 1e-6});
      const auto g2 = green_function(p, kind, 1.1, x, 0.7, {4096, 1e-6});
      CHECK(std::abs(g1.value - g2.value) < 1e-13);
    }
  }
}

TEST_CASE("limit Green series agrees with direct summation within its tail") {
  const MediumParams p(0.5, 0.1);
  const double x = 0.9, xi = 2.2, t = 1.7;
  const SeriesValue v = green_series(p, GreenKind::Limit, x, xi, t, {16384, 0.0});
  CHECK(v.modes == 16384);
  const double damp = std::exp(-0.25 * t);
  long double s = 0.0L;
  for (int n = 400000; n >= 1; --n) {
    s += (static_cast<long double>(eval_kernel_zero(p, n, t)) - damp * std::sin(n * t) / n) * std::cos(n * x) *
         std::cos(n * xi);
  }
  const double ref =
      2.0 / kPi * (static_cast<double>(s) + damp * series::sin_cos_cos(t, x, xi, series::sin_sum_p1));
  const double ref_tail = 2.0 / kPi * damp * 0.25 * (t + 1.0) / (4.0 * std::sqrt(1.0 - 0.0625) * 400000);
  CHECK(std::abs(v.value - ref) <= v.tail_bound + ref_tail);
}

TEST_CASE("series part decays at the rate beta") {
  const MediumParams p(0.5, 0.1);
  const double beta = decay_rate_beta(p);
  CHECK(beta == doctest::Approx(0.3));
  auto envelope = [&](double lo, double hi) {
    double m = 0.0;
    for (double t = lo; t <= hi; t += 0.05) {
      const auto ms = green_modal_series(p, GreenKind::Perturbed, t, {16384, 1e-12});
      for (double x : {0.0, 1.0, kPi}) m = std::max(m, std::abs(ms.evaluate(x, 0.0).value) * std::exp(beta * t));
    }
    return m;
  };
  const double early = envelope(5.0, 15.0);
  const double late = envelope(25.0, 40.0);
  CHECK(late <= 1.05 * early);
}

TEST_CASE("exact step recurrence reproduces the kernel") {
  const MediumParams p(0.5, 0.1);
  const double dt = 0.01;
  for (int n : {1, 7, 13, 50}) {
    const auto m = classify(p, n);
    const auto rec = detail::step_recurrence(m.h, m.omega_sq, dt);
    double km1 = 0.0, k = rec.k1;
    for (int j = 2; j <= 500; ++j) {
      const double next = rec.c1 * k + rec.c2 * km1;
      km1 = k;
      k = next;
    }
    CHECK(k == doctest::Approx(eval_kernel_eps(p, n, 500 * dt)).epsilon(1e-10).scale(1e-10));
  }
}
