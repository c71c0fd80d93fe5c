#pragma once

#include <span>
#include <string>
#include <vector>

#include "viscowave/problem.hpp"
#include "viscowave/solution_field.hpp"

namespace viscowave {

/// Finite-difference reference solver settings. `nx` must equal the problem
/// grid's nx; the output spacing must be an integer multiple of `dt`.
struct OracleConfig {
  int nx = 201;
  double dt = 0.005;
  double theta = 0.5;   ///< 0.5 is Crank-Nicolson, 1 is backward Euler
  bool limit = false;   ///< solve the eps = 0 damped wave equation instead

  void validate() const;
};

struct OracleDiagnostics {
  int substeps = 0;  ///< internal steps per output interval
  int steps = 0;
  /// Discrete energy 1/2 (|v|^2 + |u_x|^2) after every internal step,
  /// starting with the initial state.
  std::vector<double> energy;
  std::vector<std::string> warnings;
};

/// Integrates u_t = v, v_t = eps D v + D u - a v - F with the 3-point
/// Laplacian D (mirror ghost nodes for the zero Neumann flux) and the theta
/// scheme. v is eliminated so every step is a single tridiagonal solve in u,
/// with the matrix factored once. Output is sampled on the problem grid.
SolutionField integrate(const NeumannProblem& problem, const OracleConfig& config,
                        OracleDiagnostics* diag = nullptr);

/// 1/2 int (v^2 + u_x^2) dx with trapezoid weights for v and one-sided
/// differences for u_x.
double discrete_energy(std::span<const double> u, std::span<const double> v, double dx);

}  // namespace viscowave
