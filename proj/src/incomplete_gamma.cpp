#include "viscowave/incomplete_gamma.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "viscowave/errors.hpp"

namespace viscowave {

namespace {

constexpr int kMaxIterations = 1000;
constexpr double kRelTol = 1e-16;
constexpr double kTiny = 1e-300;

// z^s e^{-z} computed in log space to avoid overflow for large s or z.
double prefactor(double s, double z) { return std::exp(s * std::log(z) - z); }

// Lower incomplete gamma by its power series
//   gamma(s, z) = z^s e^{-z} sum_n z^n / (s (s+1) ... (s+n)).
double lower_series(double s, double z) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= z / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kRelTol) return sum * prefactor(s, z);
  }
  throw NumericalError("incomplete gamma series did not converge for s = " + std::to_string(s) +
                       ", z = " + std::to_string(z));
}

// Upper incomplete gamma by the continued fraction
//   Gamma(s, z) = z^s e^{-z} / (z + 1 - s - 1 (1 - s) / (z + 3 - s - ...)).
double upper_fraction(double s, double z) {
  double b = z + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kRelTol) return h * prefactor(s, z);
  }
  throw NumericalError("incomplete gamma continued fraction did not converge for s = " +
                       std::to_string(s) + ", z = " + std::to_string(z));
}

}  // namespace

double incomplete_gamma(double s, double z) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("incomplete_gamma needs s > 0, got " + std::to_string(s));
  }
  if (!(z >= 0.0) || std::isnan(z)) {
    throw DomainError("incomplete_gamma needs z >= 0, got " + std::to_string(z));
  }
  if (z == 0.0) return std::tgamma(s);
  if (std::isinf(z)) return 0.0;
  if (z < s + 1.0) return std::tgamma(s) - lower_series(s, z);
  return upper_fraction(s, z);
}

}  // namespace viscowave
