#include "viscowave/spectral_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "viscowave/errors.hpp"
#include "viscowave/finite_difference.hpp"
#include "viscowave/parallel.hpp"

namespace viscowave {

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson weights on n uniform samples (3/8 rule on the last three
// intervals when the interval count is odd), without the step factor.
std::vector<double> simpson_weights(int n) {
  std::vector<double> w(n, 0.0);
  const int intervals = n - 1;
  const int simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  for (int i = 0; i < simpson_end; i += 2) {
    w[i] += 1.0 / 3.0;
    w[i + 1] += 4.0 / 3.0;
    w[i + 2] += 1.0 / 3.0;
  }
  if (simpson_end != intervals) {
    const int i = simpson_end;
    w[i] += 3.0 / 8.0;
    w[i + 1] += 9.0 / 8.0;
    w[i + 2] += 9.0 / 8.0;
    w[i + 3] += 3.0 / 8.0;
  }
  return w;
}

// cos(n x_i) for n = 0..modes, i = 0..nx-1 on [0, pi].
std::vector<double> cosine_table(int modes, int nx) {
  const Grid g{nx, 2, kPi, 1.0};
  std::vector<double> table(static_cast<std::size_t>(modes + 1) * nx);
  for (int n = 0; n <= modes; ++n) {
    for (int i = 0; i < nx; ++i) table[static_cast<std::size_t>(n) * nx + i] = std::cos(n * g.x(i));
  }
  return table;
}

struct Analyzer {
  int modes;
  int nx;
  std::vector<double> weights;
  std::vector<double> table;

  Analyzer(int modes_, int nx_) : modes(modes_), nx(nx_) {
    if (modes < 0) throw ValidationError("mode count must be non-negative");
    if (nx < 3) throw ValidationError("cosine analysis needs at least 3 samples");
    if (nx < 2 * modes + 1) {
      throw ValidationError("cosine analysis of " + std::to_string(modes) + " modes needs nx >= " +
                            std::to_string(2 * modes + 1) + ", got " + std::to_string(nx));
    }
    weights = simpson_weights(nx);
    const double dx = kPi / (nx - 1);
    for (double& w : weights) w *= dx;
    table = cosine_table(modes, nx);
  }

  // out[0] = mean, out[n] = c_n.
  void run(const double* f, double* out) const {
    for (int n = 0; n <= modes; ++n) {
      const double* c = table.data() + static_cast<std::size_t>(n) * nx;
      double s = 0.0;
      for (int i = 0; i < nx; ++i) s += weights[i] * f[i] * c[i];
      out[n] = (n == 0 ? 1.0 : 2.0) / kPi * s;
    }
  }
};

void require_pi_grid(const Grid& g) {
  g.validate();
  if (std::abs(g.length - kPi) > 1e-14) {
    throw ValidationError("spectral solver works on [0, pi]; rescale the problem first");
  }
}

// Modal data of the chosen kernel family.
struct ModeCoefficients {
  double h;
  double omega_sq;
};

ModeCoefficients mode_coefficients(const MediumParams& p, GreenKind kind, int n) {
  const double a = p.a();
  if (n == 0) return {0.5 * a, 0.25 * a * a};
  const double nn = static_cast<double>(n);
  const double h = kind == GreenKind::Perturbed ? 0.5 * (a + p.eps() * nn * nn) : 0.5 * a;
  return {h, (h - nn) * (h + nn)};
}

struct ModalInputs {
  std::optional<CosineSpectrum> f0;
  std::optional<CosineSpectrum> f1;
  const SourceSpectrum* f = nullptr;
};

double spectrum_tail(const CosineSpectrum& s) {
  const int n = s.modes();
  double tail = 0.0;
  for (int k = std::max(1, n - n / 10); k <= n; ++k) tail = std::max(tail, std::abs(s.coeff(k)));
  return tail;
}

SolutionField modal_solve(const ModalInputs& in, const MediumParams& params, const Grid& grid,
                          const SolveOptions& opts, SolveDiagnostics* diag) {
  require_pi_grid(grid);
  opts.trunc.validate();
  int modes = 0;
  if (in.f0) modes = std::max(modes, in.f0->modes());
  if (in.f1) modes = std::max(modes, in.f1->modes());
  if (in.f) {
    modes = std::max(modes, in.f->modes);
    if (in.f->nt != grid.nt) throw GridMismatchError("source spectrum does not match the time grid");
  }
  const int nt = grid.nt;
  const double dt = grid.dt();
  const bool forced = in.f && !in.f->is_zero();

  ModalHistory hist;
  hist.modes = modes;
  hist.coeffs.assign(static_cast<std::size_t>(nt) * (modes + 1), 0.0);
  std::vector<double> velocity_coeffs(modes + 1, 0.0);

  auto data = [](const std::optional<CosineSpectrum>& s, int n) {
    return s && n <= s->modes() ? s->coeff(n) : 0.0;
  };

  parallel_for(static_cast<std::size_t>(modes + 1), opts.threads, [&](std::size_t idx) {
    const int n = static_cast<int>(idx);
    const ModeCoefficients mc = mode_coefficients(params, opts.kind, n);
    const double c0 = data(in.f0, n);
    const double c1 = data(in.f1, n);
    std::vector<double> forced_part;
    if (forced) {
      std::vector<double> forcing(nt);
      for (int k = 0; k < nt; ++k) forcing[k] = in.f->coeff(k, n);
      forced_part = detail::duhamel_recurrence(detail::step_recurrence(mc.h, mc.omega_sq, dt), forcing, dt);
    }
    for (int k = 0; k < nt; ++k) {
      const double t = grid.t(k);
      const double kv = detail::modal_kernel(mc.h, mc.omega_sq, t, 0);
      double v;
      if (n == 0) {
        v = c0 + c1 * kv;
      } else {
        const double kd = detail::modal_kernel(mc.h, mc.omega_sq, t, 1);
        v = c0 * (kd + 2.0 * mc.h * kv) + c1 * kv;
      }
      if (forced) v += forced_part[k];
      hist.coeffs[static_cast<std::size_t>(k) * (modes + 1) + n] = v;
    }
    const double kd0 = detail::modal_kernel(mc.h, mc.omega_sq, 0.0, 1);
    const double kdd0 = detail::modal_kernel(mc.h, mc.omega_sq, 0.0, 2);
    velocity_coeffs[n] = n == 0 ? c1 * kd0 : c0 * (kdd0 + 2.0 * mc.h * kd0) + c1 * kd0;
  });

  const std::vector<double> table = cosine_table(modes, grid.nx);
  const int nx = grid.nx;
  std::vector<double> values(static_cast<std::size_t>(nx) * nt);
  parallel_for(static_cast<std::size_t>(nt), opts.threads, [&](std::size_t k) {
    const double* c = hist.coeffs.data() + k * (modes + 1);
    double* row = values.data() + k * nx;
    for (int i = 0; i < nx; ++i) {
      double s = 0.0;
      for (int n = 0; n <= modes; ++n) s += c[n] * table[static_cast<std::size_t>(n) * nx + i];
      row[i] = s;
    }
  });
  std::vector<double> velocity(nx);
  for (int i = 0; i < nx; ++i) {
    double s = 0.0;
    for (int n = 0; n <= modes; ++n) s += velocity_coeffs[n] * table[static_cast<std::size_t>(n) * nx + i];
    velocity[i] = s;
  }

  if (diag) {
    diag->modes = modes;
    double tail = 0.0;
    if (in.f0) tail = std::max(tail, spectrum_tail(*in.f0));
    if (in.f1) tail = std::max(tail, spectrum_tail(*in.f1));
    if (forced) {
      double biggest = 0.0;
      double jump = 0.0;
      for (int k = 0; k < nt; ++k) {
        for (int n = 0; n <= modes; ++n) {
          biggest = std::max(biggest, std::abs(in.f->coeff(k, n)));
          if (n >= std::max(1, modes - modes / 10)) tail = std::max(tail, std::abs(in.f->coeff(k, n)));
          if (k + 1 < nt) jump = std::max(jump, std::abs(in.f->coeff(k + 1, n) - in.f->coeff(k, n)));
        }
      }
      if (jump > 0.05 * biggest) {
        diag->warnings.push_back("time grid may be too coarse for the source: max |dF_n| per step is " +
                                 std::to_string(jump) + " against max |F_n| = " + std::to_string(biggest));
      }
    }
    diag->spectral_tail = tail;
  }

  const Provenance prov = opts.kind == GreenKind::Perturbed ? Provenance::SpectralEps : Provenance::SpectralLimit;
  return SolutionField(grid, std::move(values), prov, params, modes)
      .with_initial_velocity(std::move(velocity))
      .with_modal(std::move(hist));
}

}  // namespace

double CosineSpectrum::synthesize(double x) const {
  double s = mean;
  for (int n = 1; n <= modes(); ++n) s += coeffs[n - 1] * std::cos(n * x);
  return s;
}

CosineSpectrum cosine_analysis(std::span<const double> values, int modes) {
  const Analyzer an(modes, static_cast<int>(values.size()));
  std::vector<double> out(modes + 1);
  an.run(values.data(), out.data());
  CosineSpectrum s;
  s.mean = out[0];
  s.coeffs.assign(out.begin() + 1, out.end());
  return s;
}

CosineSpectrum cosine_analysis(const SpaceField& field, int modes) {
  if (std::abs(field.length - kPi) > 1e-14) {
    throw ValidationError("cosine analysis needs a field on [0, pi]");
  }
  return cosine_analysis(field.values, modes);
}

bool SourceSpectrum::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
}

SourceSpectrum source_analysis(const SpaceTimeField& field, int modes, int threads) {
  if (std::abs(field.length - kPi) > 1e-14) {
    throw ValidationError("source analysis needs a field on [0, pi]");
  }
  const Analyzer an(modes, field.nx);
  SourceSpectrum s;
  s.modes = modes;
  s.nt = field.nt;
  s.coeffs.assign(static_cast<std::size_t>(field.nt) * (modes + 1), 0.0);
  if (field.preset && field.preset->is_zero()) return s;
  parallel_for(static_cast<std::size_t>(field.nt), threads, [&](std::size_t k) {
    an.run(field.values.data() + k * field.nx, s.coeffs.data() + k * (modes + 1));
  });
  return s;
}

int solver_modes(const Grid& grid, const Truncation& trunc) {
  trunc.validate();
  return std::min(trunc.max_modes, (grid.nx - 1) / 2);
}

namespace detail {

std::vector<double> duhamel_recurrence(const StepRecurrence& rec, std::span<const double> forcing,
                                       double dt) {
  const std::size_t nt = forcing.size();
  std::vector<double> out(nt, 0.0);
  if (nt < 2) return out;
  // p_k = sum_{j<k} K_{k-j} F_j and kernel K_k follow the same recurrence.
  double p_prev = 0.0;
  double p = rec.k1 * forcing[0];
  double k_prev = 0.0;
  double k_cur = rec.k1;
  out[1] = -dt * (p - 0.5 * k_cur * forcing[0]);
  for (std::size_t k = 2; k < nt; ++k) {
    const double p_next = rec.c1 * p + rec.c2 * p_prev + rec.k1 * forcing[k - 1];
    const double k_next = rec.c1 * k_cur + rec.c2 * k_prev;
    p_prev = p;
    p = p_next;
    k_prev = k_cur;
    k_cur = k_next;
    out[k] = -dt * (p - 0.5 * k_cur * forcing[0]);
  }
  return out;
}

}  // namespace detail

SolutionField solve_u1(const CosineSpectrum& f1, const MediumParams& params, const Grid& grid,
                       const SolveOptions& opts) {
  ModalInputs in;
  in.f1 = f1;
  return modal_solve(in, params, grid, opts, nullptr);
}

SolutionField solve_ustar(const CosineSpectrum& f0, const MediumParams& params, const Grid& grid,
                          const SolveOptions& opts) {
  ModalInputs in;
  in.f0 = f0;
  return modal_solve(in, params, grid, opts, nullptr);
}

SolutionField solve_uF(const SourceSpectrum& f, const MediumParams& params, const Grid& grid,
                       const SolveOptions& opts, SolveDiagnostics* diag) {
  ModalInputs in;
  in.f = &f;
  return modal_solve(in, params, grid, opts, diag);
}

SolutionField solve_full(const NeumannProblem& problem, const SolveOptions& opts, SolveDiagnostics* diag) {
  problem.validate();
  require_pi_grid(problem.grid);
  if (!problem.homogeneous || !problem.flux.is_zero()) {
    throw ValidationError("solve_full needs homogeneous boundary fluxes; homogenize first");
  }
  const int modes = solver_modes(problem.grid, opts.trunc);
  ModalInputs in;
  in.f0 = cosine_analysis(problem.f0, modes);
  in.f1 = cosine_analysis(problem.f1, modes);
  const SourceSpectrum src = source_analysis(problem.f, modes, opts.threads);
  in.f = &src;
  SolutionField out = modal_solve(in, problem.params, problem.grid, opts, diag);
  if (diag) {
    for (auto& w : problem.compatibility_warnings()) diag->warnings.push_back(std::move(w));
  }
  return out;
}

ResidualReport pde_residual(const SolutionField& field, const SpaceTimeField& source) {
  const Grid& g = field.grid();
  if (g.nx < 5 || g.nt < 5) throw ValidationError("residual needs at least 5 nodes per axis");
  const bool has_source = !source.values.empty();
  if (has_source && (source.nx != g.nx || source.nt != g.nt)) {
    throw GridMismatchError("source grid differs from the solution grid");
  }
  const double eps = field.equation_eps();
  const double a = field.params().a();
  const double dx2 = g.dx() * g.dx();
  const double dt = g.dt();
  ResidualReport r;
  r.values.assign(static_cast<std::size_t>(g.nx) * g.nt, 0.0);
  for (int k = 1; k + 1 < g.nt; ++k) {
    for (int i = 1; i + 1 < g.nx; ++i) {
      auto u = [&](int ii, int kk) { return field.at(ii, kk); };
      auto lap = [&](int kk) { return (u(i + 1, kk) - 2.0 * u(i, kk) + u(i - 1, kk)) / dx2; };
      const double u_t = (u(i, k + 1) - u(i, k - 1)) / (2.0 * dt);
      const double u_tt = (u(i, k + 1) - 2.0 * u(i, k) + u(i, k - 1)) / (dt * dt);
      const double lap_t = (lap(k + 1) - lap(k - 1)) / (2.0 * dt);
      double res = eps * lap_t + lap(k) - u_tt - a * u_t;
      if (has_source) res -= source.at(i, k);
      r.values[static_cast<std::size_t>(k) * g.nx + i] = res;
      r.sup = std::max(r.sup, std::abs(res));
    }
  }
  return r;
}

double boundary_flux_sup(const SolutionField& field, double h) {
  const Grid& g = field.grid();
  const double nodes[] = {0.0, 1.0, 2.0, 3.0, 4.0};
  const auto w = fd::fornberg_weights(0.0, nodes, 1);
  double worst = 0.0;
  for (int k = 0; k < g.nt; ++k) {
    double left = 0.0;
    double right = 0.0;
    if (field.modal()) {
      for (int j = 0; j < 5; ++j) {
        left += w[j] * field.modal()->evaluate(k, j * h);
        right -= w[j] * field.modal()->evaluate(k, g.length - j * h);
      }
      left /= h;
      right /= h;
    } else {
      for (int j = 0; j < 5; ++j) {
        left += w[j] * field.at(j, k);
        right -= w[j] * field.at(g.nx - 1 - j, k);
      }
      left /= g.dx();
      right /= g.dx();
    }
    worst = std::max({worst, std::abs(left), std::abs(right)});
  }
  return worst;
}

}  // namespace viscowave
