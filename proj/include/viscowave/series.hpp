#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace viscowave::series {

/// Neumaier-compensated accumulator. Summation order is the call order, so
/// results are bit-reproducible for a fixed sequence of terms.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

/// Reduces an angle to [0, 2*pi).
inline double wrap_two_pi(double theta) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

// Closed forms of the Clausen-type sums (Bernoulli polynomials on [0, 2 pi]).

/// sum_{n>=1} cos(n theta) / n^2
inline double cos_sum_p2(double theta) noexcept {
  constexpr double pi = std::numbers::pi;
  const double s = wrap_two_pi(std::abs(theta));
  return pi * pi / 6.0 - pi * s / 2.0 + s * s / 4.0;
}

/// sum_{n>=1} cos(n theta) / n^4
inline double cos_sum_p4(double theta) noexcept {
  constexpr double pi = std::numbers::pi;
  const double x = wrap_two_pi(std::abs(theta)) / (2.0 * pi);
  const double b4 = x * x * (x * x - 2.0 * x + 1.0) - 1.0 / 30.0;
  const double p2 = 4.0 * pi * pi;
  return -p2 * p2 * b4 / 48.0;
}

/// sum_{n>=1} cos(n theta) / n^6
inline double cos_sum_p6(double theta) noexcept {
  constexpr double pi = std::numbers::pi;
  const double x = wrap_two_pi(std::abs(theta)) / (2.0 * pi);
  const double x2 = x * x;
  const double b6 = x2 * (x2 * (x2 - 3.0 * x + 2.5) - 0.5) + 1.0 / 42.0;
  const double p2 = 4.0 * pi * pi;
  return p2 * p2 * p2 * b6 / 1440.0;
}

/// sum_{n>=1} sin(n theta) / n   (sawtooth; 0 on the jump)
inline double sin_sum_p1(double theta) noexcept {
  constexpr double pi = std::numbers::pi;
  const double s = wrap_two_pi(theta);
  if (s == 0.0) return 0.0;
  return (pi - s) / 2.0;
}

/// sum_{n>=1} sin(n theta) / n^3
inline double sin_sum_p3(double theta) noexcept {
  constexpr double pi = std::numbers::pi;
  const double s = wrap_two_pi(theta);
  return pi * pi * s / 6.0 - pi * s * s / 4.0 + s * s * s / 12.0;
}

/// sum_{n>=1} cos(n xi) cos(n x) / n^2
inline double cos_cos_p2(double x, double xi) noexcept {
  return 0.5 * (cos_sum_p2(x - xi) + cos_sum_p2(x + xi));
}

/// sum_{n>=1} cos(n xi) cos(n x) / n^4
inline double cos_cos_p4(double x, double xi) noexcept {
  return 0.5 * (cos_sum_p4(x - xi) + cos_sum_p4(x + xi));
}

/// sum_{n>=1} cos(n xi) cos(n x) / n^6
inline double cos_cos_p6(double x, double xi) noexcept {
  return 0.5 * (cos_sum_p6(x - xi) + cos_sum_p6(x + xi));
}

/// sum_{n>=1} sin(n t) cos(n xi) cos(n x) / n^p for p in {1, 3}.
template <typename SinSum>
double sin_cos_cos(double t, double x, double xi, SinSum f) noexcept {
  return 0.25 * (f(t + x - xi) + f(t - x + xi) + f(t + x + xi) + f(t - x - xi));
}

/// sum_{n>=1} cos(n t) cos(n xi) cos(n x) / n^2
inline double cos_cos_cos_p2(double t, double x, double xi) noexcept {
  return 0.25 * (cos_sum_p2(t + x - xi) + cos_sum_p2(t - x + xi) +
                 cos_sum_p2(t + x + xi) + cos_sum_p2(t - x - xi));
}

}  // namespace viscowave::series
