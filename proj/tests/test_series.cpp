#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "viscowave/series.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

// Direct long double partial sum of cos(n theta) / n^p up to n = big_n.
long double cos_power_sum(long double theta, int p, int big_n) {
  long double s = 0.0L;
  for (int n = big_n; n >= 1; --n) s += std::cos(n * theta) / std::pow(static_cast<long double>(n), p);
  return s;
}

long double sin_power_sum(long double theta, int p, int big_n) {
  long double s = 0.0L;
  for (int n = big_n; n >= 1; --n) s += std::sin(n * theta) / std::pow(static_cast<long double>(n), p);
  return s;
}

}  // namespace

using namespace viscowave::series;

TEST_CASE("cosine lattice sums match direct summation") {
  const std::vector<double> thetas = {0.0, 0.3, 1.0, kPi / 2, 2.5, kPi, 4.0, 6.0, -1.2, 7.5};
  for (double th : thetas) {
    CAPTURE(th);
    // tails: 1/N for p = 2 (oscillating, far smaller), 1/(3N^3), 1/(5N^5)
    CHECK(cos_sum_p4(th) == doctest::Approx(static_cast<double>(cos_power_sum(th, 4, 20000))).epsilon(1e-13));
    CHECK(cos_sum_p6(th) == doctest::Approx(static_cast<double>(cos_power_sum(th, 6, 2000))).epsilon(1e-14));
  }
  CHECK(cos_sum_p2(0.0) == doctest::Approx(kPi * kPi / 6).epsilon(1e-15));
  CHECK(cos_sum_p4(0.0) == doctest::Approx(std::pow(kPi, 4) / 90).epsilon(1e-15));
  CHECK(cos_sum_p6(0.0) == doctest::Approx(std::pow(kPi, 6) / 945).epsilon(1e-15));
  CHECK(cos_sum_p2(kPi) == doctest::Approx(-kPi * kPi / 12).epsilon(1e-15));
  for (double th : {0.5, 2.0, 3.0}) {
    CHECK(std::abs(cos_sum_p2(th) - static_cast<double>(cos_power_sum(th, 2, 400000))) < 1e-5);
  }
}

TEST_CASE("sine lattice sums match direct summation") {
  for (double th : {0.2, 1.0, 2.0, kPi, 5.0, -0.7}) {
    CAPTURE(th);
    CHECK(sin_sum_p3(th) == doctest::Approx(static_cast<double>(sin_power_sum(th, 3, 20000))).epsilon(1e-9));
    CHECK(std::abs(sin_sum_p1(th) - static_cast<double>(sin_power_sum(th, 1, 200000))) < 1e-4);
  }
  CHECK(sin_sum_p1(0.0) == 0.0);
  CHECK(sin_sum_p1(2 * kPi) == 0.0);
}

TEST_CASE("product sums reduce to single sums") {
  const double x = 0.7, xi = 2.1, t = 1.3;
  long double direct2 = 0.0L, direct4 = 0.0L, direct6 = 0.0L, direct_cc = 0.0L, direct_s3 = 0.0L;
  for (int n = 20000; n >= 1; --n) {
    const long double g = std::cos(n * static_cast<long double>(x)) * std::cos(n * static_cast<long double>(xi));
    const long double nn = n;
    direct2 += g / (nn * nn);
    direct4 += g / (nn * nn * nn * nn);
    direct6 += g / (nn * nn * nn * nn * nn * nn);
    direct_cc += std::cos(n * static_cast<long double>(t)) * g / (nn * nn);
    direct_s3 += std::sin(n * static_cast<long double>(t)) * g / (nn * nn * nn);
  }
  CHECK(std::abs(cos_cos_p2(x, xi) - static_cast<double>(direct2)) < 1e-4);
  CHECK(cos_cos_p4(x, xi) == doctest::Approx(static_cast<double>(direct4)).epsilon(1e-12));
  CHECK(cos_cos_p6(x, xi) == doctest::Approx(static_cast<double>(direct6)).epsilon(1e-13));
  CHECK(std::abs(cos_cos_cos_p2(t, x, xi) - static_cast<double>(direct_cc)) < 1e-4);
  CHECK(sin_cos_cos(t, x, xi, sin_sum_p3) == doctest::Approx(static_cast<double>(direct_s3)).epsilon(1e-8));
}

TEST_CASE("wrap_two_pi lands in [0, 2 pi)") {
  for (double th : {-10.0, -2 * kPi, 0.0, 1.0, 2 * kPi, 13.0}) {
    const double r = wrap_two_pi(th);
    CHECK(r >= 0.0);
    CHECK(r < 2 * kPi);
    CHECK(std::abs(std::remainder(r - th, 2 * kPi)) < 1e-12);
  }
}

TEST_CASE("compensated sum recovers cancelled digits") {
  CompensatedSum s;
  s += 1.0;
  s += 1e100;
  s += 1.0;
  s += -1e100;
  CHECK(s.value() == 2.0);

  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) xs.push_back(0.1);
  CHECK(std::abs(compensated_sum(xs) - 10000.0) < 1e-10);
}
