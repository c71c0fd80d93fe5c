#include "viscowave/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "viscowave/asymptotics.hpp"
#include "viscowave/errors.hpp"
#include "viscowave/io.hpp"

namespace viscowave {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json params_json(const MediumParams& p) { return {{"a", p.a()}, {"eps", p.eps()}}; }

json grid_json(const Grid& g) { return {{"nx", g.nx}, {"nt", g.nt}, {"length", g.length}, {"T", g.T}}; }

json trunc_json(const Truncation& t) { return {{"max_modes", t.max_modes}, {"tail_tol", t.tail_tol}}; }

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions o;
  o.kind = cfg.kind();
  o.trunc = cfg.truncation();
  o.threads = cfg.integer("threads");
  return o;
}

double sup_abs_diff(const SolutionField& u, const SolutionField& v) {
  double worst = 0.0;
  const auto a = u.values();
  const auto b = v.values();
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

struct Outputs {
  fs::path dir;
  std::vector<fs::path> files;

  explicit Outputs(const RunConfig& cfg) : dir(cfg.out_dir()) {
    io::ensure_directory(dir);
    io::write_json(dir / "resolved_config.json", cfg.resolved());
    files.push_back(dir / "resolved_config.json");
  }

  void text(const std::string& name, std::string_view body) {
    io::write_text(dir / name, body);
    files.push_back(dir / name);
  }

  void object(const std::string& name, const json& j) {
    io::write_json(dir / name, j);
    files.push_back(dir / name);
  }
};

void finish_truncation(const RunConfig& cfg, int unconverged, const std::string& what) {
  if (unconverged > 0 && !cfg.flag("allow_unconverged")) {
    throw TruncationError(std::to_string(unconverged) + " " + what +
                          " did not reach tail_tol within max_modes (outputs written; set "
                          "allow_unconverged=true to accept)");
  }
}

CommandResult cmd_green(const RunConfig& cfg) {
  const MediumParams p = cfg.medium();
  const GreenKind kind = cfg.kind();
  const Truncation trunc = cfg.truncation();
  const auto xs = cfg.numbers("green_x");
  const auto xis = cfg.numbers("green_xi");
  const auto ts = cfg.numbers("green_t");
  if (xs.empty() || xis.empty() || ts.empty()) throw ValidationError("green_x, green_xi and green_t must be non-empty");
  Outputs out(cfg);

  std::string csv = "x,xi,t,g,tail_bound\n";
  int unconverged = 0;
  double max_tail = 0.0;
  int max_modes_used = 0;
  for (double t : ts) {
    for (double x : xs) {
      for (double xi : xis) {
        const SeriesValue v = green_function(p, kind, x, xi, t, trunc);
        if (!v.converged()) ++unconverged;
        max_tail = std::max(max_tail, v.tail_bound);
        max_modes_used = std::max(max_modes_used, v.modes);
        csv += io::format_double(x) + ',' + io::format_double(xi) + ',' + io::format_double(t) + ',' +
               io::format_double(v.value) + ',' + io::format_double(v.tail_bound) + '\n';
      }
    }
  }
  out.text("green.csv", csv);
  json meta = {{"schema_version", io::kSchemaVersion},
               {"command", "green"},
               {"kind", std::string(to_string(kind))},
               {"params", params_json(p)},
               {"truncation", trunc_json(trunc)},
               {"points", xs.size() * xis.size() * ts.size()},
               {"max_modes_used", max_modes_used},
               {"max_tail_bound", max_tail},
               {"unconverged", unconverged}};
  out.object("green.json", meta);
  finish_truncation(cfg, unconverged, "Green function evaluations");
  return {meta, out.files};
}

json pipeline_json(const PipelineResult& r) {
  json w = json::array();
  for (const auto& s : r.warnings) w.push_back(s);
  return {{"residual_sup", r.residual_sup},
          {"boundary_flux_sup", r.boundary_flux_sup},
          {"source_mode_discrepancy", r.source_discrepancy},
          {"modes", r.modes},
          {"spectral_tail", r.spectral_tail},
          {"warnings", w}};
}

CommandResult cmd_solve(const RunConfig& cfg) {
  const NeumannProblem prob = cfg.problem();
  const SolveOptions opts = solve_options(cfg);
  OracleConfig ocfg;
  if (cfg.flag("compare_oracle")) ocfg = cfg.oracle();
  Outputs out(cfg);
  const PipelineResult r = solve_pipeline(prob, opts.kind, cfg.source_mode(), opts);
  out.text("solution.csv", io::solution_csv(r.field));
  json meta = {{"schema_version", io::kSchemaVersion},
               {"command", "solve"},
               {"provenance", std::string(to_string(r.field.provenance()))},
               {"params", params_json(prob.params)},
               {"grid", grid_json(prob.grid)},
               {"truncation", trunc_json(opts.trunc)},
               {"source_mode", std::string(to_string(cfg.source_mode()))}};
  meta.update(pipeline_json(r));
  if (cfg.flag("compare_oracle")) {
    OracleDiagnostics od;
    const PipelineResult o = oracle_pipeline(prob, cfg.source_mode(), ocfg, &od);
    meta["oracle"] = {{"dt", ocfg.dt}, {"theta", ocfg.theta}, {"sup_gap", sup_abs_diff(r.field, o.field)}};
  }
  out.object("solution.json", meta);
  return {meta, out.files};
}

CommandResult cmd_oracle(const RunConfig& cfg) {
  const NeumannProblem prob = cfg.problem();
  const OracleConfig ocfg = cfg.oracle();
  Outputs out(cfg);
  OracleDiagnostics od;
  const PipelineResult r = oracle_pipeline(prob, cfg.source_mode(), ocfg, &od);
  out.text("oracle.csv", io::solution_csv(r.field));
  double max_rise = 0.0;
  for (std::size_t i = 1; i < od.energy.size(); ++i) max_rise = std::max(max_rise, od.energy[i] - od.energy[i - 1]);
  json meta = {{"schema_version", io::kSchemaVersion},
               {"command", "oracle"},
               {"provenance", "oracle"},
               {"params", params_json(prob.params)},
               {"grid", grid_json(prob.grid)},
               {"oracle", {{"dt", ocfg.dt}, {"theta", ocfg.theta}, {"limit", ocfg.limit}, {"substeps", od.substeps}}},
               {"energy", {{"initial", od.energy.empty() ? 0.0 : od.energy.front()},
                           {"final", od.energy.empty() ? 0.0 : od.energy.back()},
                           {"max_step_increase", max_rise}}},
               {"source_mode", std::string(to_string(cfg.source_mode()))}};
  meta.update(pipeline_json(r));
  out.object("oracle.json", meta);
  return {meta, out.files};
}

std::vector<io::PlotSeries> ratio_vs_t(const SweepReport& r) {
  // Per eps, the largest ratio over (x, xi) at each t.
  std::map<double, std::map<double, double>, std::greater<>> by_eps;
  for (const auto& row : r.rows) {
    double& v = by_eps[row.eps][row.t];
    v = std::max(v, row.ratio);
  }
  std::vector<io::PlotSeries> out;
  for (const auto& [eps, m] : by_eps) {
    io::PlotSeries s;
    s.label = "eps=" + io::format_double(eps);
    for (const auto& [t, v] : m) {
      s.x.push_back(t);
      s.y.push_back(v);
    }
    out.push_back(std::move(s));
  }
  return out;
}

CommandResult cmd_sweep(const RunConfig& cfg) {
  const SweepDomain domain = cfg.sweep_domain();
  const auto theorems = cfg.theorems();
  Outputs out(cfg);
  std::string csv;
  json reports = json::array();
  // A, B and C from this run feed the T41 sweep once all three are known.
  BoundConstants abc;
  int known = 0;
  int unconverged = 0;
  for (Theorem th : theorems) {
    const SweepReport r =
        fit_constants(th, domain, th == Theorem::T41 && known == 7 ? std::optional(abc) : std::nullopt);
    if (th == Theorem::T31) abc.A = r.fitted, known |= 1;
    if (th == Theorem::T33) abc.B = r.fitted, known |= 2;
    if (th == Theorem::T32) abc.C = r.fitted, known |= 4;
    unconverged += r.unconverged;
    const std::string body = io::sweep_csv(r);
    csv += csv.empty() ? body : body.substr(body.find('\n') + 1);
    reports.push_back(io::to_json(r));
    if (cfg.flag("plots")) {
      const std::string id(to_string(th));
      io::PlotSpec vs_t{id + ": max ratio over (x, xi) against t", "t", "lhs / shape", true, true};
      out.text("sweep_" + id + "_t.svg", io::svg_line_chart(vs_t, ratio_vs_t(r)));
      io::PlotSeries ratio{"max ratio", {}, {}}, lhs{"max lhs", {}, {}};
      for (const auto& e : r.per_eps) {
        ratio.x.push_back(e.eps);
        ratio.y.push_back(e.max_ratio);
        lhs.x.push_back(e.eps);
        lhs.y.push_back(e.max_lhs);
      }
      io::PlotSpec vs_eps{id + ": per-eps maxima", "eps", "value", true, true};
      out.text("sweep_" + id + "_eps.svg", io::svg_line_chart(vs_eps, {ratio, lhs}));
    }
  }
  out.text("sweep.csv", csv.empty() ? "theorem,eps,t,x,xi,lhs,shape,ratio,regime\n" : csv);
  json meta = {{"schema_version", io::kSchemaVersion},
               {"command", "sweep"},
               {"a", domain.a},
               {"exponents", io::to_json(domain.exponents)},
               {"truncation", trunc_json(domain.trunc)},
               {"preset", domain.preset},
               {"theorems", reports}};
  out.object("sweep.json", meta);
  finish_truncation(cfg, unconverged, "sweep cells");
  return {meta, out.files};
}

CommandResult cmd_bound_check(const RunConfig& cfg) {
  const Grid base = cfg.grid();
  const auto eps_list = cfg.numbers("bound_eps");
  if (eps_list.empty()) throw ValidationError("bound_eps is empty");
  const double t_probe = cfg.number("bound_t");
  const double dt = base.dt();
  const double c = cfg.number("diag_c");
  const BoundExponents ex = cfg.exponents();
  SolveOptions opts = solve_options(cfg);
  Outputs out(cfg);

  json rows = json::array();
  std::string csv = "eps,t,gap\n";
  std::vector<double> log_eps, log_gap, k_fit;
  std::vector<io::PlotSeries> plots;
  for (double eps : eps_list) {
    RunConfig local = cfg;
    local.set_value("eps", eps);
    // Horizon long enough to reach the end of the slow-time window.
    const double need = std::max(base.T, std::ceil(1.0 / eps / dt) * dt);
    local.set_value("nt", static_cast<long long>(std::lround(need / dt)) + 1);
    local.set_value("T", need);
    const NeumannProblem prob = local.problem();
    const PipelineResult u = solve_pipeline(prob, GreenKind::Perturbed, cfg.source_mode(), opts);
    const PipelineResult U = solve_pipeline(prob, GreenKind::Limit, cfg.source_mode(), opts);
    const GapField gap = solution_gap(u.field, U.field, eps);
    const Grid& g = u.field.grid();
    double slow_sup = 0.0;
    io::PlotSeries ps{"eps=" + io::format_double(eps), {}, {}};
    for (int k = 0; k < g.nt; ++k) {
      if (eps * g.t(k) < 1.0) slow_sup = std::max(slow_sup, gap.slice_sup[k]);
      csv += io::format_double(eps) + ',' + io::format_double(g.t(k)) + ',' + io::format_double(gap.slice_sup[k]) + '\n';
      if (k > 0) {
        ps.x.push_back(g.t(k));
        ps.y.push_back(gap.slice_sup[k]);
      }
    }
    plots.push_back(std::move(ps));
    const int kp = std::clamp(static_cast<int>(std::lround(t_probe / g.dt())), 0, g.nt - 1);
    const double at_probe = gap.slice_sup[kp];
    if (at_probe > 0.0) {
      log_eps.push_back(std::log(eps));
      log_gap.push_back(std::log(at_probe));
    }
    k_fit.push_back(slow_sup);
    json row = {{"eps", eps},
                {"T", g.T},
                {"slow_time_sup_gap", slow_sup},
                {"gap_at_t", at_probe},
                {"t", g.t(kp)},
                {"diagnostics", io::to_json(bound_diagnostics(prob.params, c))}};
    rows.push_back(row);
  }
  out.text("bound_check.csv", csv);
  if (cfg.flag("plots")) {
    io::PlotSpec spec{"sup_x |u - exp(-eps t/2) U| against t", "t", "gap", false, true};
    out.text("bound_check.svg", io::svg_line_chart(spec, plots));
  }

  double worst_change = 0.0;
  for (std::size_t i = 1; i < k_fit.size(); ++i) {
    if (k_fit[i - 1] > 0.0) worst_change = std::max(worst_change, std::abs(k_fit[i] / k_fit[i - 1] - 1.0));
  }
  const double slope = log_eps.size() >= 2 ? linear_fit(log_eps, log_gap).slope : std::nan("");
  json meta = {{"schema_version", io::kSchemaVersion},
               {"command", "bound-check"},
               {"a", cfg.number("a")},
               {"exponents", io::to_json(ex)},
               {"per_eps", rows},
               {"slow_time_k_fit", *std::max_element(k_fit.begin(), k_fit.end())},
               {"slow_time_k_change", worst_change},
               {"slow_time_k_stable", worst_change < 0.10},
               {"gap_slope_at_t", finite_or_null(slope)},
               {"gap_slope_ok", std::isfinite(slope) && slope >= ex.m() - 0.1}};
  out.object("bound_check.json", meta);
  return {meta, out.files};
}

SolutionField placeholder(const NeumannProblem& p) {
  return SolutionField(p.grid, std::vector<double>(static_cast<std::size_t>(p.grid.nx) * p.grid.nt),
                       Provenance::Oracle, p.params, 0);
}

}  // namespace

PipelineResult solve_pipeline(const NeumannProblem& problem, GreenKind kind, SourceMode mode,
                              const SolveOptions& opts) {
  auto [scaled, scale] = rescale_to_pi(problem);
  PipelineResult r{placeholder(scaled), 0.0, 0.0, 0.0, {}, 0, 0.0};
  if (!scaled.flux.is_zero()) r.source_discrepancy = source_mode_discrepancy(scaled);
  const NeumannProblem hom = homogenize(scaled, mode);
  SolveOptions o = opts;
  o.kind = kind;
  SolveDiagnostics diag;
  const SolutionField u_bar = solve_full(hom, o, &diag);
  r.boundary_flux_sup = boundary_flux_sup(u_bar);
  r.modes = diag.modes;
  r.spectral_tail = diag.spectral_tail;
  r.warnings = diag.warnings;
  const SolutionField u = dehomogenize(u_bar, scaled.flux);
  if (u.grid().nt >= 5 && u.grid().nx >= 5) r.residual_sup = pde_residual(u, scaled.f).sup;
  r.field = rescale_from_pi(u, scale, problem.params);
  return r;
}

PipelineResult oracle_pipeline(const NeumannProblem& problem, SourceMode mode, const OracleConfig& config,
                               OracleDiagnostics* diag) {
  auto [scaled, scale] = rescale_to_pi(problem);
  PipelineResult r{placeholder(scaled), 0.0, 0.0, 0.0, {}, 0, 0.0};
  if (!scaled.flux.is_zero()) r.source_discrepancy = source_mode_discrepancy(scaled);
  const NeumannProblem hom = homogenize(scaled, mode);
  OracleConfig c = config;
  // Time is rescaled along with space.
  c.dt = config.dt * scale.c;
  OracleDiagnostics local;
  OracleDiagnostics* d = diag ? diag : &local;
  const SolutionField u_bar = integrate(hom, c, d);
  r.warnings = d->warnings;
  r.boundary_flux_sup = boundary_flux_sup(u_bar);
  const SolutionField u = dehomogenize(u_bar, scaled.flux);
  if (u.grid().nt >= 5 && u.grid().nx >= 5) r.residual_sup = pde_residual(u, scaled.f).sup;
  r.field = rescale_from_pi(u, scale, problem.params);
  if (config.limit) r.field = r.field.with_equation_eps(0.0);
  return r;
}

std::vector<std::string> command_names() { return {"green", "solve", "oracle", "sweep", "bound-check"}; }

CommandResult run_command(std::string_view name, const RunConfig& config) {
  config.validate();
  if (name == "green") return cmd_green(config);
  if (name == "solve") return cmd_solve(config);
  if (name == "oracle") return cmd_oracle(config);
  if (name == "sweep") return cmd_sweep(config);
  if (name == "bound-check") return cmd_bound_check(config);
  throw ValidationError("unknown command '" + std::string(name) + "'");
}

}  // namespace viscowave
