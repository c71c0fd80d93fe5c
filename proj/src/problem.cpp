#include "viscowave/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "viscowave/errors.hpp"
#include "viscowave/finite_difference.hpp"

namespace viscowave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPresetTol = 1e-12;

EndpointSlopes sampled_slopes(const SpaceField& f) {
  const double h = f.length / (f.nx() - 1);
  const int width = std::min(f.nx(), 5);
  return {fd::uniform_derivative(f.values, h, 0, 1, width),
          fd::uniform_derivative(f.values, h, f.nx() - 1, 1, width), false};
}

FluxSide flux_side_from_preset(const FluxPreset& p, int nt, double T) {
  FluxSide s;
  s.preset = p;
  s.value.resize(nt);
  s.d1.resize(nt);
  s.d2.resize(nt);
  const Grid g{3, nt, kPi, T};
  for (int k = 0; k < nt; ++k) {
    const double t = g.t(k);
    s.value[k] = p.value(t, 0);
    s.d1[k] = p.value(t, 1);
    s.d2[k] = p.value(t, 2);
  }
  return s;
}

FluxSide flux_side_from_samples(std::vector<double> v, double T) {
  FluxSide s;
  const double dt = T / (static_cast<double>(v.size()) - 1);
  s.d1 = fd::uniform_derivative_series(v, dt, 1);
  s.d2 = fd::uniform_derivative_series(v, dt, 2);
  s.value = std::move(v);
  return s;
}

}  // namespace

EndpointSlopes endpoint_slopes(const SpaceField& f) {
  if (f.preset) {
    return {f.preset->derivative(0.0, f.length), f.preset->derivative(f.length, f.length), true};
  }
  return sampled_slopes(f);
}

SpaceField SpaceField::sample(const SpacePreset& preset, int nx, double length) {
  if (nx < 3) throw ValidationError("space field needs nx >= 3");
  SpaceField f;
  f.length = length;
  f.values.resize(nx);
  f.preset = preset;
  for (int i = 0; i < nx; ++i) f.values[i] = preset.value(f.x(i), length);
  return f;
}

SpaceField SpaceField::from_samples(std::vector<double> values, double length) {
  SpaceField f;
  f.values = std::move(values);
  f.length = length;
  f.verify();
  return f;
}

void SpaceField::verify() const {
  if (nx() < 3) throw ValidationError("space field needs nx >= 3, got " + std::to_string(nx()));
  if (!(length > 0.0)) throw ValidationError("space field length must be positive");
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("space field contains a non-finite sample");
  }
  if (preset) {
    for (int i = 0; i < nx(); ++i) {
      if (std::abs(preset->value(x(i), length) - values[i]) > kPresetTol) {
        throw ValidationError("space field samples do not match preset '" + preset->text() + "'");
      }
    }
  }
}

SpaceTimeField SpaceTimeField::sample(const SpaceTimePreset& preset, const Grid& grid) {
  SpaceTimeField f = zeros(grid);
  f.preset = preset;
  if (preset.is_zero()) return f;
  for (int k = 0; k < grid.nt; ++k) {
    for (int i = 0; i < grid.nx; ++i) {
      f.values[static_cast<std::size_t>(k) * grid.nx + i] = preset.value(grid.x(i), grid.t(k), grid.length);
    }
  }
  return f;
}

SpaceTimeField SpaceTimeField::from_samples(std::vector<double> values, const Grid& grid) {
  SpaceTimeField f;
  f.values = std::move(values);
  f.nx = grid.nx;
  f.nt = grid.nt;
  f.length = grid.length;
  f.T = grid.T;
  f.verify();
  return f;
}

SpaceTimeField SpaceTimeField::zeros(const Grid& grid) {
  grid.validate();
  SpaceTimeField f;
  f.values.assign(static_cast<std::size_t>(grid.nx) * grid.nt, 0.0);
  f.nx = grid.nx;
  f.nt = grid.nt;
  f.length = grid.length;
  f.T = grid.T;
  return f;
}

void SpaceTimeField::verify() const {
  const Grid g{nx, nt, length, T};
  g.validate();
  if (values.size() != static_cast<std::size_t>(nx) * nt) {
    throw GridMismatchError("space-time field has " + std::to_string(values.size()) +
                            " samples, expected " + std::to_string(nx) + "x" + std::to_string(nt));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("space-time field contains a non-finite sample");
  }
  if (preset) {
    for (int k = 0; k < nt; ++k) {
      for (int i = 0; i < nx; ++i) {
        if (std::abs(preset->value(g.x(i), g.t(k), length) - at(i, k)) > kPresetTol) {
          throw ValidationError("space-time samples do not match preset '" + preset->text() + "'");
        }
      }
    }
  }
}

bool FluxSide::is_zero() const {
  if (preset) return preset->is_zero();
  return std::all_of(value.begin(), value.end(), [](double v) { return v == 0.0; });
}

double FluxSide::at_time(double t, double T, int order) const {
  if (order < 0 || order > 2) throw DomainError("flux derivative order must be 0, 1 or 2");
  if (preset) return preset->value(t, order);
  const auto& s = order == 0 ? value : order == 1 ? d1 : d2;
  if (s.empty()) return 0.0;
  const int n = static_cast<int>(s.size());
  const double pos = std::clamp(t / T, 0.0, 1.0) * (n - 1);
  const int k = std::min(static_cast<int>(pos), n - 2);
  const double w = pos - k;
  return (1.0 - w) * s[k] + w * s[k + 1];
}

BoundaryFlux BoundaryFlux::zero(int nt, double T) {
  return from_presets(FluxPreset::parse("zero"), FluxPreset::parse("zero"), nt, T);
}

BoundaryFlux BoundaryFlux::from_presets(const FluxPreset& phi, const FluxPreset& psi, int nt, double T) {
  BoundaryFlux b;
  b.nt = nt;
  b.T = T;
  b.phi = flux_side_from_preset(phi, nt, T);
  b.psi = flux_side_from_preset(psi, nt, T);
  return b;
}

BoundaryFlux BoundaryFlux::from_samples(std::vector<double> phi, std::vector<double> psi, double T) {
  if (phi.size() != psi.size()) throw GridMismatchError("phi and psi sample counts differ");
  if (phi.size() < 6) throw ValidationError("sampled fluxes need at least 6 time samples");
  BoundaryFlux b;
  b.nt = static_cast<int>(phi.size());
  b.T = T;
  b.phi = flux_side_from_samples(std::move(phi), T);
  b.psi = flux_side_from_samples(std::move(psi), T);
  return b;
}

std::string_view to_string(SourceMode m) noexcept {
  return m == SourceMode::OperatorApplied ? "operator_applied" : "paper_formula";
}

SourceMode parse_source_mode(std::string_view s) {
  if (s == "operator_applied") return SourceMode::OperatorApplied;
  if (s == "paper_formula") return SourceMode::PaperFormula;
  throw ValidationError("unknown source mode '" + std::string(s) +
                        "' (expected operator_applied or paper_formula)");
}

void NeumannProblem::validate() const {
  grid.validate();
  f0.verify();
  f1.verify();
  f.verify();
  if (f0.nx() != grid.nx || f1.nx() != grid.nx) {
    throw GridMismatchError("initial data must have nx = " + std::to_string(grid.nx) + " samples");
  }
  if (f.nx != grid.nx || f.nt != grid.nt) throw GridMismatchError("source grid differs from problem grid");
  if (f0.length != grid.length || f1.length != grid.length || f.length != grid.length || f.T != grid.T) {
    throw GridMismatchError("data extents differ from problem grid");
  }
  if (flux.nt != grid.nt || flux.phi.value.size() != static_cast<std::size_t>(grid.nt) ||
      flux.psi.value.size() != static_cast<std::size_t>(grid.nt)) {
    throw GridMismatchError("flux samples must match the time grid");
  }
  if (homogeneous && !flux.is_zero()) {
    throw ValidationError("problem flagged homogeneous but boundary fluxes are non-zero");
  }
}

std::vector<std::string> NeumannProblem::compatibility_warnings() const {
  std::vector<std::string> out;
  if (!homogeneous) return out;
  auto check = [&](const char* name, const EndpointSlopes& s) {
    if (std::abs(s.left) > kCompatibilityTol) {
      out.push_back(std::string(name) + " has slope " + std::to_string(s.left) + " at x = 0");
    }
    if (std::abs(s.right) > kCompatibilityTol) {
      out.push_back(std::string(name) + " has slope " + std::to_string(s.right) + " at x = L");
    }
  };
  check("F0", f0_slopes);
  check("F1", f1_slopes);
  return out;
}

NeumannProblem make_problem(const MediumParams& params, const Grid& grid, const ProblemPreset& preset) {
  grid.validate();
  const auto phi = FluxPreset::parse(preset.phi);
  const auto psi = FluxPreset::parse(preset.psi);
  NeumannProblem p{params,
                   grid,
                   SpaceField::sample(SpacePreset::parse(preset.f0), grid.nx, grid.length),
                   SpaceField::sample(SpacePreset::parse(preset.f1), grid.nx, grid.length),
                   SpaceTimeField::sample(SpaceTimePreset::parse(preset.f), grid),
                   BoundaryFlux::from_presets(phi, psi, grid.nt, grid.T),
                   {},
                   {},
                   phi.is_zero() && psi.is_zero(),
                   std::nullopt};
  p.f0_slopes = endpoint_slopes(p.f0);
  p.f1_slopes = endpoint_slopes(p.f1);
  return p;
}

std::pair<NeumannProblem, ScaleRecord> rescale_to_pi(const NeumannProblem& problem) {
  problem.validate();
  const ScaleRecord scale{kPi / problem.grid.length, problem.grid.length, problem.grid.T};
  if (scale.c == 1.0) return {problem, scale};
  const double c = scale.c;
  const double a_bar = problem.params.a() / c;
  const double eps_bar = problem.params.eps() * c;
  if (!(a_bar > 0.0 && a_bar < 1.0 && eps_bar > 0.0 && eps_bar < 1.0)) {
    throw ValidationError("rescaling to [0, pi] gives a = " + std::to_string(a_bar) + ", eps = " +
                          std::to_string(eps_bar) + " outside (0, 1)");
  }
  const Grid g{problem.grid.nx, problem.grid.nt, kPi, problem.grid.T * c};

  auto scaled = [&](const SpaceField& f, double factor) {
    std::vector<double> v(f.values);
    for (double& x : v) x *= factor;
    return SpaceField::from_samples(std::move(v), kPi);
  };
  auto scaled_flux = [&](const FluxSide& s) {
    FluxSide out;
    out.value = s.value;
    out.d1 = s.d1;
    out.d2 = s.d2;
    for (double& v : out.value) v /= c;
    for (double& v : out.d1) v /= c * c;
    for (double& v : out.d2) v /= c * c * c;
    return out;
  };

  std::vector<double> src(problem.f.values);
  for (double& v : src) v /= c * c;

  NeumannProblem out{MediumParams(a_bar, eps_bar),
                     g,
                     scaled(problem.f0, 1.0),
                     scaled(problem.f1, 1.0 / c),
                     SpaceTimeField::from_samples(std::move(src), g),
                     {},
                     {problem.f0_slopes.left / c, problem.f0_slopes.right / c, problem.f0_slopes.analytic},
                     {problem.f1_slopes.left / (c * c), problem.f1_slopes.right / (c * c),
                      problem.f1_slopes.analytic},
                     problem.homogeneous,
                     problem.source_mode};
  out.flux.nt = g.nt;
  out.flux.T = g.T;
  out.flux.phi = scaled_flux(problem.flux.phi);
  out.flux.psi = scaled_flux(problem.flux.psi);
  return {out, scale};
}

SolutionField rescale_from_pi(const SolutionField& field, const ScaleRecord& scale,
                              const MediumParams& original_params) {
  const Grid g{field.grid().nx, field.grid().nt, scale.original_length, scale.original_T};
  std::vector<double> values(field.values().begin(), field.values().end());
  SolutionField out(g, std::move(values), field.provenance(), original_params, field.modes());
  if (field.provenance() == Provenance::SpectralLimit) out = out.with_equation_eps(0.0);
  if (field.initial_velocity()) {
    std::vector<double> v = *field.initial_velocity();
    for (double& x : v) x *= scale.c;
    out = out.with_initial_velocity(std::move(v));
  }
  return out;
}

double lifting_value(double phi, double psi, double x) {
  return x / (2.0 * kPi) * ((2.0 * kPi - x) * phi + x * psi);
}

double lifting_field(const BoundaryFlux& flux, double x, double t) {
  return lifting_value(flux.phi.at_time(t, flux.T), flux.psi.at_time(t, flux.T), x);
}

namespace {

void require_pi_domain(const NeumannProblem& p) {
  if (std::abs(p.grid.length - kPi) > 1e-14) {
    throw ValidationError("homogenization needs a problem on [0, pi]; rescale first");
  }
  const auto n = static_cast<std::size_t>(p.grid.nt);
  for (const FluxSide* s : {&p.flux.phi, &p.flux.psi}) {
    if (s->d1.size() != n || s->d2.size() != n) {
      throw ValidationError("homogenization needs first and second flux derivatives");
    }
  }
}

// f - L_eps(w), with w the lifting field.
double operator_source(const MediumParams& m, double f, double x, double phi, double psi,
                       double dphi, double dpsi, double ddphi, double ddpsi) {
  const double w_xx = (psi - phi) / kPi;
  const double w_xxt = (dpsi - dphi) / kPi;
  const double w_t = lifting_value(dphi, dpsi, x);
  const double w_tt = lifting_value(ddphi, ddpsi, x);
  return f - (m.eps() * w_xxt + w_xx - w_tt - m.a() * w_t);
}

// The closed form as printed, reading its undefined coefficient as a.
double printed_source(const MediumParams& m, double f, double x, double phi, double psi,
                      double dphi, double dpsi, double ddphi, double ddpsi) {
  const double a = m.a();
  return f + (m.eps() / kPi + a * x * x / (2.0 * kPi)) * (dphi - dpsi) + (phi + psi) / kPi +
         x * x / (2.0 * kPi) * (ddphi - ddpsi) - x * (a * dphi + ddphi);
}

}  // namespace

NeumannProblem homogenize(const NeumannProblem& problem, SourceMode mode) {
  problem.validate();
  require_pi_domain(problem);
  NeumannProblem out = problem;
  out.source_mode = mode;
  if (problem.flux.is_zero()) {
    out.homogeneous = true;
    return out;
  }
  const Grid& g = problem.grid;
  const auto& phi = problem.flux.phi;
  const auto& psi = problem.flux.psi;
  const auto source = mode == SourceMode::OperatorApplied ? operator_source : printed_source;

  std::vector<double> F(problem.f.values.size());
  for (int k = 0; k < g.nt; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      F[static_cast<std::size_t>(k) * g.nx + i] =
          source(problem.params, problem.f.at(i, k), g.x(i), phi.value[k], psi.value[k], phi.d1[k],
                 psi.d1[k], phi.d2[k], psi.d2[k]);
    }
  }
  std::vector<double> F0(problem.f0.values);
  std::vector<double> F1(problem.f1.values);
  for (int i = 0; i < g.nx; ++i) {
    F0[i] -= lifting_value(phi.value[0], psi.value[0], g.x(i));
    F1[i] -= lifting_value(phi.d1[0], psi.d1[0], g.x(i));
  }
  out.f = SpaceTimeField::from_samples(std::move(F), g);
  out.f0 = SpaceField::from_samples(std::move(F0), g.length);
  out.f1 = SpaceField::from_samples(std::move(F1), g.length);
  out.f0_slopes.left -= phi.value[0];
  out.f0_slopes.right -= psi.value[0];
  out.f1_slopes.left -= phi.d1[0];
  out.f1_slopes.right -= psi.d1[0];
  out.flux = BoundaryFlux::zero(g.nt, g.T);
  out.homogeneous = true;
  return out;
}

double source_mode_discrepancy(const NeumannProblem& problem) {
  require_pi_domain(problem);
  const Grid& g = problem.grid;
  const auto& phi = problem.flux.phi;
  const auto& psi = problem.flux.psi;
  double worst = 0.0;
  for (int k = 0; k < g.nt; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      const double args[] = {g.x(i), phi.value[k], psi.value[k], phi.d1[k], psi.d1[k], phi.d2[k], psi.d2[k]};
      const double a = operator_source(problem.params, 0.0, args[0], args[1], args[2], args[3], args[4],
                                       args[5], args[6]);
      const double b = printed_source(problem.params, 0.0, args[0], args[1], args[2], args[3], args[4],
                                      args[5], args[6]);
      worst = std::max(worst, std::abs(a - b));
    }
  }
  return worst;
}

SolutionField dehomogenize(const SolutionField& u_bar, const BoundaryFlux& flux) {
  const Grid& g = u_bar.grid();
  if (flux.nt != g.nt || flux.phi.value.size() != static_cast<std::size_t>(g.nt) ||
      std::abs(flux.T - g.T) > 1e-12 * std::max(1.0, g.T)) {
    throw GridMismatchError("flux time grid differs from the solution grid");
  }
  if (flux.is_zero()) return u_bar;
  std::vector<double> values(u_bar.values().begin(), u_bar.values().end());
  for (int k = 0; k < g.nt; ++k) {
    for (int i = 0; i < g.nx; ++i) {
      values[static_cast<std::size_t>(k) * g.nx + i] += lifting_value(flux.phi.value[k], flux.psi.value[k], g.x(i));
    }
  }
  SolutionField out = u_bar.with_values(std::move(values));
  if (u_bar.initial_velocity()) {
    std::vector<double> v = *u_bar.initial_velocity();
    for (int i = 0; i < g.nx; ++i) v[i] += lifting_value(flux.phi.d1[0], flux.psi.d1[0], g.x(i));
    out = out.with_initial_velocity(std::move(v));
  }
  return out;
}

}  // namespace viscowave
