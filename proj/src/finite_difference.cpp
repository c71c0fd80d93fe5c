#include "viscowave/finite_difference.hpp"

#include <algorithm>
#include <string>

#include "viscowave/errors.hpp"

namespace viscowave::fd {

std::vector<double> fornberg_weights(double z, std::span<const double> nodes, int m) {
  const int n = static_cast<int>(nodes.size());
  if (m < 0 || n <= m) throw DomainError("stencil too small for derivative order");
  // c[j][k]: weight of node j for the k-th derivative.
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

double uniform_derivative(std::span<const double> f, double h, int i, int m, int width) {
  const int n = static_cast<int>(f.size());
  if (width > n) {
    throw DomainError("need at least " + std::to_string(width) + " samples for a derivative stencil");
  }
  const int lo = std::clamp(i - width / 2, 0, n - width);
  std::vector<double> nodes(width);
  for (int j = 0; j < width; ++j) nodes[j] = static_cast<double>(lo + j - i);
  const auto w = fornberg_weights(0.0, nodes, m);
  double s = 0.0;
  for (int j = 0; j < width; ++j) s += w[j] * f[lo + j];
  double scale = 1.0;
  for (int k = 0; k < m; ++k) scale *= h;
  return s / scale;
}

std::vector<double> uniform_derivative_series(std::span<const double> f, double h, int m) {
  const int n = static_cast<int>(f.size());
  if (n < 6) throw DomainError("need at least 6 samples for 4th-order derivatives");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const bool interior = i >= 2 && i <= n - 3;
    const int width = (m == 1 || interior) ? 5 : 6;
    out[i] = uniform_derivative(f, h, i, m, width);
  }
  return out;
}

}  // namespace viscowave::fd
