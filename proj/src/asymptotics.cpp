#include "viscowave/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "viscowave/errors.hpp"
#include "viscowave/finite_difference.hpp"
#include "viscowave/incomplete_gamma.hpp"
#include "viscowave/parallel.hpp"
#include "viscowave/spectral_solver.hpp"

namespace viscowave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeta2 = kPi * kPi / 6.0;
constexpr double kShapeFloor = 1e-300;

void check_open(double v, double lo, double hi, const char* name) {
  if (!(v > lo && v < hi)) {
    throw DomainError(std::string(name) + " must lie in (" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "), got " + std::to_string(v));
  }
}

// Tail bound of the kernel-gap series past N, (2/pi) included. Valid for N
// at or above the asymptotic mode floor.
double gap_tail(const MediumParams& p, const detail::SlowBranch& b, int big_n, double t, int order) {
  const double a = p.a();
  const double c = 0.5 * (a + p.eps());
  const double g0 = std::sqrt(1.0 - 0.25 * a * a);
  const double damp = std::exp(-c * t);
  const double n = static_cast<double>(big_n);
  const double n3 = n * n * n;
  double viscous;
  double limit;
  if (order == 0) {
    viscous = b.slow_g * detail::power_tail(big_n, 8) + b.fast_g * detail::gaussian_tail(b.q, big_n, 4);
    limit = damp * a * a * (t + 1.0) / (4.0 * g0) / (3.0 * n3);
  } else {
    viscous = b.slow_d * detail::power_tail(big_n, 8) + b.fast_d * detail::gaussian_tail(b.q, big_n, 2);
    const double a2 = a * a;
    const double a4 = a2 * a2;
    const double first = t * t * a4 / 32.0 + c * a2 * (t + 1.0) / (4.0 * g0);
    const double second = t * t * t * a4 * a2 / 384.0 + t * a4 / 32.0;
    limit = damp * (first / (3.0 * n3) + second / (4.0 * n3 * n));
  }
  return (2.0 / kPi) * (viscous + limit);
}

// Expansion of the kernel-gap series at time t (see kernel_gap). The slow
// branch of the viscous kernel and the asymptotic form of the limit kernel
// are summed in closed form.
ModalSeries gap_modal_series(const MediumParams& p, double t, const Truncation& trunc, int order) {
  ModalSeries out;
  out.t = t;
  out.tail_tol = trunc.tail_tol;
  if (t == 0.0) return out;
  const double a = p.a();
  const double eps = p.eps();
  const double c = 0.5 * (a + eps);
  const double damp = std::exp(-c * t);
  const double shrink = std::exp(-0.5 * eps * t);
  const double drift = a * a * t / 8.0 - c;
  const detail::SlowBranch b = detail::slow_branch(p, t);
  const double k0 = order == 0 ? b.f0 : b.g0;
  const double k1 = order == 0 ? b.f1 : b.g1;

  auto term = [&](int n) {
    const double nn = static_cast<double>(n);
    const double s = 1.0 / (nn * nn);
    const double st = std::sin(n * t);
    const double slow = s * s * (k0 + k1 * s);
    if (order == 0) {
      const double viscous = eval_kernel_eps(p, n, t, 0) * s - slow;
      const double limit = shrink * eval_kernel_zero(p, n, t, 0) * s - damp * st * s / nn;
      return viscous - limit;
    }
    const double viscous = eval_kernel_eps(p, n, t, 1) * s - slow;
    const double exact = shrink * (eval_kernel_zero(p, n, t, 1) - 0.5 * eps * eval_kernel_zero(p, n, t, 0)) * s;
    const double asym = damp * (std::cos(n * t) * s + drift * st * s / nn);
    return viscous - (exact - asym);
  };

  const int floor_mode = std::max(detail::asymptotic_mode_floor(eps), mode_thresholds(p).n2 + 1);
  const auto choice = detail::choose_modes(
      floor_mode, trunc, [&](int n) { return gap_tail(p, b, n, t, order); },
      [&](int n) { return (2.0 / kPi) * term(n); });
  out.coeffs.resize(choice.modes);
  for (int n = 1; n <= choice.modes; ++n) out.coeffs[n - 1] = term(n);
  out.cos4 = k0;
  out.cos6 = k1;
  if (order == 0) {
    out.sin3 = -damp;
  } else {
    out.ccos2 = -damp;
    out.sin3 = -damp * drift;
  }
  out.tail_bound = choice.tail;
  return out;
}

SeriesValue absolute(SeriesValue v) {
  v.value = std::abs(v.value);
  return v;
}

std::vector<double> sup_second_derivative(const SpaceField& f) {
  if (f.preset) {
    std::vector<double> out(f.nx());
    for (int i = 0; i < f.nx(); ++i) out[i] = f.preset->second_derivative(f.x(i), f.length);
    return out;
  }
  return fd::uniform_derivative_series(f.values, f.length / (f.nx() - 1), 2);
}

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_tlist(const std::vector<double>& ts) {
  if (ts.empty()) throw ValidationError("sweep time list is empty");
  for (double t : ts) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("sweep times must be positive");
  }
}

}  // namespace

void BoundExponents::validate() const {
  check_open(gamma, 0.5, 1.0, "gamma");
  check_open(delta, 0.0, 2.0, "delta");
  check_open(eta, 0.0, 1.0, "eta");
  check_open(k, 0.0, 0.5, "k");
}

double BoundExponents::m() const { return std::min({1.0 - gamma, 1.0 - eta, 0.5 - k}); }

std::string_view to_string(Theorem t) noexcept {
  switch (t) {
    case Theorem::T31: return "T31";
    case Theorem::T32: return "T32";
    case Theorem::T33: return "T33";
    case Theorem::T41: return "T41";
  }
  return "unknown";
}

Theorem parse_theorem(std::string_view s) {
  if (s == "T31") return Theorem::T31;
  if (s == "T32") return Theorem::T32;
  if (s == "T33") return Theorem::T33;
  if (s == "T41") return Theorem::T41;
  throw ValidationError("unknown theorem id '" + std::string(s) + "' (expected T31|T32|T33|T41)");
}

std::string_view to_string(TimeRegime r) noexcept {
  switch (r) {
    case TimeRegime::Slow: return "slow";
    case TimeRegime::Fast: return "fast";
    case TimeRegime::Boundary: return "boundary";
  }
  return "unknown";
}

TimeRegime regime_classify(double eps, double t, double band) {
  const double tau = eps * t;
  if (tau < 1.0 - band) return TimeRegime::Slow;
  if (tau > 1.0 + band) return TimeRegime::Fast;
  return TimeRegime::Boundary;
}

SeriesValue kernel_gap(const MediumParams& params, double x, double xi, double t,
                       const Truncation& trunc, int order) {
  trunc.validate();
  if (order != 0 && order != 1) throw DomainError("kernel_gap order must be 0 or 1");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("kernel_gap needs t >= 0");
  if (t == 0.0) {
    SeriesValue zero;
    zero.tail_tol = trunc.tail_tol;
    return zero;
  }
  return absolute(gap_modal_series(params, t, trunc, order).evaluate(x, xi));
}

SeriesValue scaled_green_norm(const MediumParams& params, double x, double xi, double t,
                              const Truncation& trunc) {
  SeriesValue v = green_series(params, GreenKind::Perturbed, x, xi, t, trunc);
  v.value = params.eps() * std::abs(v.value);
  v.tail_bound *= params.eps();
  v.tail_tol = trunc.tail_tol;
  return v;
}

DataNorms data_norms(const NeumannProblem& problem) {
  DataNorms n;
  n.f0 = sup_abs(problem.f0.values);
  n.f1 = sup_abs(problem.f1.values);
  n.f0_xx = sup_abs(sup_second_derivative(problem.f0));
  n.f1_xx = sup_abs(sup_second_derivative(problem.f1));
  const Grid& g = problem.grid;
  const double dt = g.dt();
  std::vector<double> integral(g.nx, 0.0);
  for (int k = 1; k < g.nt; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      integral[i] += 0.5 * dt * (problem.f.at(i, k - 1) + problem.f.at(i, k));
      n.f_int = std::max(n.f_int, std::abs(integral[i]));
    }
  }
  const double dx = g.dx();
  for (int k = 0; k < g.nt; ++k) {
    std::vector<double> row(problem.f.values.begin() + static_cast<std::ptrdiff_t>(k) * g.nx,
                            problem.f.values.begin() + static_cast<std::ptrdiff_t>(k + 1) * g.nx);
    if (problem.f.preset) {
      for (int i = 0; i < g.nx; ++i) {
        n.f_xx = std::max(n.f_xx, std::abs(problem.f.preset->second_x_derivative(g.x(i), g.t(k), g.length)));
      }
    } else if (g.nx >= 6) {
      n.f_xx = std::max(n.f_xx, sup_abs(fd::uniform_derivative_series(row, dx, 2)));
    }
  }
  return n;
}

BoundConstants assemble_constants(const MediumParams& params, const BoundExponents& e,
                                  const DataNorms& norms, double A, double B, double C) {
  const double a = params.a();
  BoundConstants c;
  c.A = A;
  c.B = B;
  c.C = C;
  c.K0 = norms.f0 + norms.f1 / a + norms.f_int / a;
  c.K1 = B * norms.f0_xx;
  c.K2 = (norms.f1_xx + a * norms.f0_xx) * kPi * A;
  c.K3 = norms.f0_xx * kZeta2 * kPi;
  c.H = norms.f_xx * kPi * A;
  const double two_a = 2.0 / a;
  c.H1 = norms.f_xx * kPi * A *
         (two_a + two_a * two_a + 4.0 + std::pow(two_a, 2.0 - e.gamma) * std::tgamma(2.0 - e.gamma) +
          std::pow(two_a, 3.0 - e.delta) * std::tgamma(3.0 - e.delta));
  return c;
}

double shape_r(const BoundExponents& e, double t) {
  return 1.0 + t + std::pow(t, 1.0 - e.gamma) + std::pow(t, 2.0 - e.delta);
}

double shape_p(const BoundExponents& e, double t) { return 2.0 * t + std::pow(t, 1.0 - e.gamma) + 3.0; }

double shape_k(const BoundExponents& e, double a, double t) {
  const double z = 0.5 * t * a;
  return std::pow(2.0 / a, 2.0 - e.gamma) * incomplete_gamma(2.0 - e.gamma, z) +
         std::pow(2.0 / a, 3.0 - e.delta) * incomplete_gamma(3.0 - e.delta, z);
}

double bound_shape(Theorem theorem, const MediumParams& params, const BoundExponents& e, double t,
                   const BoundConstants* aux) {
  e.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("bound_shape needs t >= 0");
  const double a = params.a();
  const double eps = params.eps();
  const double theta = t / eps;
  const double wave = std::exp(-0.5 * a * t);
  const double m = e.m();
  switch (theorem) {
    case Theorem::T31:
      return std::pow(eps, 1.0 - e.gamma) * shape_r(e, t) * wave + eps * std::exp(-0.25 * theta);
    case Theorem::T32:
      return std::pow(eps, m) * (std::exp(-0.5 * theta) + shape_p(e, t) * wave);
    case Theorem::T33:
      return (1.0 + t) * std::pow(eps, 0.5 - e.k) * wave + std::pow(eps, 1.0 - e.eta) * std::exp(-0.25 * theta);
    case Theorem::T41: {
      if (!aux) throw ValidationError("the T41 bound needs its constants");
      const double em = std::pow(eps, m);
      const BoundConstants& c = *aux;
      return c.K0 * -std::expm1(-0.5 * eps * t) + em * (c.H * shape_k(e, a, t) + c.H1) +
             em * wave * (c.K1 * (1.0 + t) + c.K2 * shape_r(e, t) + c.C * shape_p(e, t) + c.K3 * t) +
             std::exp(-0.25 * theta) * em * (c.C + c.K1 + c.K2);
    }
  }
  return 0.0;
}

GapField solution_gap(const SolutionField& u, const SolutionField& U, double eps) {
  if (!(u.grid() == U.grid())) throw GridMismatchError("solution_gap needs fields on the same grid");
  if (U.provenance() != Provenance::SpectralLimit && U.equation_eps() != 0.0) {
    throw ValidationError("solution_gap expects the limit (eps = 0) field as its second argument");
  }
  const Grid& g = u.grid();
  GapField out;
  out.values.resize(static_cast<std::size_t>(g.nx) * g.nt);
  out.slice_sup.assign(g.nt, 0.0);
  out.slice_argmax.assign(g.nt, 0);
  for (int k = 0; k < g.nt; ++k) {
    const double shrink = std::exp(-0.5 * eps * g.t(k));
    for (int i = 0; i < g.nx; ++i) {
      const double d = std::abs(u.at(i, k) - shrink * U.at(i, k));
      out.values[static_cast<std::size_t>(k) * g.nx + i] = d;
      if (d > out.slice_sup[k]) {
        out.slice_sup[k] = d;
        out.slice_argmax[k] = i;
      }
    }
  }
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw ValidationError("bad log-spaced range");
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) v[i] = lo * std::exp(step * i);
  v.back() = hi;
  return v;
}

std::vector<double> sweep_times(const SweepDomain& d) {
  std::vector<double> ts = d.t;
  if (d.wavefronts && !d.t.empty()) {
    const auto [lo, hi] = std::minmax_element(d.t.begin(), d.t.end());
    for (double x : d.x) {
      for (double xi : d.xi) {
        for (double c : {x + xi, x - xi, xi - x, -x - xi}) {
          double t = std::fmod(c, 2.0 * kPi);
          if (t <= 0.0) t += 2.0 * kPi;
          for (; t <= *hi; t += 2.0 * kPi) {
            if (t >= *lo) ts.push_back(t);
          }
        }
      }
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(), [](double u, double v) { return v - u <= 1e-12 * v; }), ts.end());
  return ts;
}

SweepDomain default_sweep_domain(int t_points) {
  SweepDomain d;
  d.eps = {0.1, 0.05, 0.02, 0.01, 0.005};
  d.t = log_spaced(1e-2, 50.0, t_points);
  d.x = {0.0, kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0, kPi};
  d.xi = d.x;
  d.trunc.max_modes = 16384;
  return d;
}

void summarize(SweepReport& r) {
  r.fitted = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& e : r.per_eps) {
    r.fitted = std::max(r.fitted, e.max_ratio);
    lo = std::min(lo, e.max_ratio);
    hi = std::max(hi, e.max_ratio);
  }
  r.spread = r.per_eps.empty() ? 0.0 : (lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
  // Growth as eps decreases, in the order of decreasing eps.
  std::vector<EpsSummary> sorted = r.per_eps;
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.eps > y.eps; });
  r.max_growth = 0.0;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double prev = sorted[i - 1].max_ratio;
    const double g = prev > 0.0 ? sorted[i].max_ratio / prev : (sorted[i].max_ratio > 0.0 ? INFINITY : 1.0);
    r.max_growth = std::max(r.max_growth, g);
  }
  std::vector<double> lx, ly;
  for (const auto& e : r.per_eps) {
    if (e.max_ratio > 0.0) {
      lx.push_back(std::log(e.eps));
      ly.push_back(std::log(e.max_ratio));
    }
  }
  r.trend_slope = lx.size() >= 2 ? linear_fit(lx, ly).slope : 0.0;
}

namespace {

void validate_domain(const SweepDomain& d, bool needs_points) {
  if (d.eps.empty()) throw ValidationError("sweep eps list is empty");
  for (double e : d.eps) MediumParams(d.a, e);
  check_tlist(d.t);
  d.exponents.validate();
  d.trunc.validate();
  if (needs_points) {
    if (d.x.empty() || d.xi.empty()) throw ValidationError("sweep needs at least one (x, xi) point");
    for (double v : d.x) {
      if (!(v >= 0.0 && v <= kPi)) throw ValidationError("sweep x values must lie in [0, pi]");
    }
    for (double v : d.xi) {
      if (!(v >= 0.0 && v <= kPi)) throw ValidationError("sweep xi values must lie in [0, pi]");
    }
  }
}

SweepReport kernel_sweep(Theorem theorem, const SweepDomain& d) {
  validate_domain(d, true);
  SweepDomain timing = d;
  if (theorem == Theorem::T33) timing.wavefronts = false;
  const std::vector<double> times = sweep_times(timing);
  const std::size_t ne = d.eps.size();
  const std::size_t nt = times.size();
  const std::size_t npts = d.x.size() * d.xi.size();
  SweepReport r;
  r.theorem = theorem;
  r.rows.resize(ne * nt * npts);
  std::vector<double> cell_tail(ne * nt, 0.0);
  std::vector<int> cell_bad(ne * nt, 0);

  parallel_for(ne * nt, d.threads, [&](std::size_t cell) {
    const std::size_t ie = cell / nt;
    const std::size_t it = cell % nt;
    const MediumParams p(d.a, d.eps[ie]);
    const double t = times[it];
    const ModalSeries s = theorem == Theorem::T33 ? green_modal_series(p, GreenKind::Perturbed, t, d.trunc)
                                                  : gap_modal_series(p, t, d.trunc, theorem == Theorem::T32 ? 1 : 0);
    const double shape = bound_shape(theorem, p, d.exponents, t);
    const double scale = theorem == Theorem::T33 ? p.eps() : 1.0;
    cell_tail[cell] = scale * s.tail_bound;
    cell_bad[cell] = scale * s.tail_bound > d.trunc.tail_tol ? 1 : 0;
    std::size_t row = cell * npts;
    for (double x : d.x) {
      for (double xi : d.xi) {
        SweepRow& w = r.rows[row++];
        w.theorem = theorem;
        w.eps = p.eps();
        w.t = t;
        w.x = x;
        w.xi = xi;
        w.lhs = scale * std::abs(s.evaluate(x, xi).value);
        w.shape = shape;
        w.ratio = shape >= kShapeFloor ? w.lhs / shape : 0.0;
        w.regime = regime_classify(p.eps(), t);
      }
    }
  });

  r.per_eps.resize(ne);
  for (std::size_t ie = 0; ie < ne; ++ie) r.per_eps[ie].eps = d.eps[ie];
  for (std::size_t cell = 0; cell < ne * nt; ++cell) {
    r.max_tail = std::max(r.max_tail, cell_tail[cell]);
    r.unconverged += cell_bad[cell];
  }
  for (const auto& w : r.rows) {
    if (w.shape < kShapeFloor) {
      ++r.excluded;
      continue;
    }
    const auto ie = static_cast<std::size_t>(std::find(d.eps.begin(), d.eps.end(), w.eps) - d.eps.begin());
    EpsSummary& e = r.per_eps[ie];
    if (w.ratio > e.max_ratio) {
      e.max_ratio = w.ratio;
      e.t_at_max = w.t;
    }
    e.max_lhs = std::max(e.max_lhs, w.lhs);
  }
  summarize(r);
  return r;
}

SweepReport solution_sweep(const SweepDomain& d, const std::optional<BoundConstants>& abc) {
  validate_domain(d, false);
  if (d.nx < 5) throw ValidationError("T41 sweep needs nx >= 5");
  if (!(d.dt > 0.0) || !(d.T > 0.0)) throw ValidationError("T41 sweep needs positive dt and T");
  const double steps = d.T / d.dt;
  const int nt = static_cast<int>(std::lround(steps)) + 1;
  if (std::abs(steps - (nt - 1)) > 1e-9 * steps) {
    throw ValidationError("T41 sweep horizon T must be a multiple of dt");
  }

  BoundConstants base;
  if (abc) {
    base = *abc;
  } else {
    base.A = kernel_sweep(Theorem::T31, d).fitted;
    base.C = kernel_sweep(Theorem::T32, d).fitted;
    base.B = kernel_sweep(Theorem::T33, d).fitted;
  }

  SweepReport r;
  r.theorem = Theorem::T41;
  const Grid grid{d.nx, nt, kPi, d.T};
  // Nearest grid slice to each requested time.
  std::vector<int> slices;
  for (double t : d.t) {
    if (t > d.T) continue;
    const int k = std::clamp(static_cast<int>(std::lround(t / grid.dt())), 1, nt - 1);
    if (slices.empty() || slices.back() != k) slices.push_back(k);
  }
  std::sort(slices.begin(), slices.end());
  slices.erase(std::unique(slices.begin(), slices.end()), slices.end());

  SolveOptions opts;
  opts.trunc = d.trunc;
  opts.threads = d.threads;
  for (double eps : d.eps) {
    const MediumParams p(d.a, eps);
    const NeumannProblem prob = make_problem(p, grid, problem_preset(d.preset));
    if (!prob.homogeneous) throw ValidationError("T41 sweep needs a preset with zero boundary flux");
    opts.kind = GreenKind::Perturbed;
    const SolutionField u = solve_full(prob, opts);
    opts.kind = GreenKind::Limit;
    const SolutionField U = solve_full(prob, opts);
    const GapField gap = solution_gap(u, U, eps);
    const BoundConstants c = assemble_constants(p, d.exponents, data_norms(prob), base.A, base.B, base.C);
    r.constants = c;
    EpsSummary e;
    e.eps = eps;
    for (int k : slices) {
      SweepRow w;
      w.theorem = Theorem::T41;
      w.eps = eps;
      w.t = grid.t(k);
      w.x = grid.x(gap.slice_argmax[k]);
      w.lhs = gap.slice_sup[k];
      w.shape = bound_shape(Theorem::T41, p, d.exponents, w.t, &c);
      w.regime = regime_classify(eps, w.t);
      if (w.shape < kShapeFloor) {
        ++r.excluded;
      } else {
        w.ratio = w.lhs / w.shape;
        if (w.ratio > e.max_ratio) {
          e.max_ratio = w.ratio;
          e.t_at_max = w.t;
        }
        e.max_lhs = std::max(e.max_lhs, w.lhs);
      }
      r.rows.push_back(w);
    }
    r.per_eps.push_back(e);
  }
  summarize(r);
  return r;
}

}  // namespace

SweepReport fit_constants(Theorem theorem, const SweepDomain& domain, const std::optional<BoundConstants>& abc) {
  if (theorem == Theorem::T41) return solution_sweep(domain, abc);
  return kernel_sweep(theorem, domain);
}

BoundDiagnostics bound_diagnostics(const MediumParams& params, double c) {
  check_open(c, 0.0, 1.0, "c");
  const double a = params.a();
  const double eps = params.eps();
  const double root = std::sqrt(1.0 - a * eps);
  const ModeThresholds th = mode_thresholds(params);
  BoundDiagnostics d;
  d.n1 = th.n1;
  d.n2 = th.n2;
  d.c = c;
  d.n_c = static_cast<int>(std::floor((1.0 + std::sqrt(1.0 - a * eps * c)) / (eps * std::sqrt(c))));
  d.rho = 1.0 - a + 2.0 * std::sqrt(1.0 - a);
  d.g0 = std::sqrt(1.0 - 0.25 * a * a);
  d.g1 = 0.5 * (a + 0.5);
  d.s = std::sqrt(std::max(0.0, (2.0 * root - eps) / (2.0 * (1.0 - eps + root))));
  d.q = std::sqrt(0.5 * (2.0 - a - eps));
  d.ell = std::min(d.s, d.q);
  d.g2 = d.ell;
  const ModeKernel mk = classify(params, th.n2 + 1);
  d.phi = mk.omega_sq > 0.0 ? std::sqrt(eps) * mk.h / std::sqrt(mk.omega_sq) : INFINITY;
  d.beta = decay_rate_beta(params);
  d.zeta2 = kZeta2;
  return d;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("linear fit needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("linear fit needs distinct abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

std::vector<double> oscillation_sup(const SolutionField& u) {
  const Grid& g = u.grid();
  std::vector<double> out(g.nt);
  for (int k = 0; k < g.nt; ++k) {
    const auto row = u.slice(k);
    double mean = 0.0;
    for (int i = 0; i < g.nx; ++i) mean += (i == 0 || i == g.nx - 1 ? 0.5 : 1.0) * row[i];
    mean /= (g.nx - 1);
    double s = 0.0;
    for (double v : row) s = std::max(s, std::abs(v - mean));
    out[k] = s;
  }
  return out;
}

double log_linear_slope(const Grid& grid, std::span<const double> values, double t_lo, double t_hi) {
  std::vector<double> ts, ls;
  for (int k = 0; k < grid.nt; ++k) {
    const double t = grid.t(k);
    if (t >= t_lo && t <= t_hi && values[k] > 0.0) {
      ts.push_back(t);
      ls.push_back(std::log(values[k]));
    }
  }
  return linear_fit(ts, ls).slope;
}

}  // namespace viscowave
