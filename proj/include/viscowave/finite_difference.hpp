#pragma once

#include <span>
#include <vector>

namespace viscowave::fd {

/// Fornberg weights w such that sum_j w_j f(nodes_j) approximates the m-th
/// derivative of f at z. Exact for polynomials of degree < nodes.size().
std::vector<double> fornberg_weights(double z, std::span<const double> nodes, int m);

/// m-th derivative at sample i of a uniformly spaced series, using a window of
/// `width` consecutive samples centred on i where possible and shifted inward
/// near the ends.
double uniform_derivative(std::span<const double> f, double h, int i, int m, int width);

/// Derivative of order m at every sample: 5-point stencils (4th order)
/// for m = 1 and for interior m = 2, 6-point one-sided closures for m = 2 near
/// the ends. Needs at least 6 samples.
std::vector<double> uniform_derivative_series(std::span<const double> f, double h, int m);

}  // namespace viscowave::fd
