#include "viscowave/run_config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "viscowave/errors.hpp"
#include "viscowave/io.hpp"
#include "viscowave/presets.hpp"

namespace viscowave {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

json default_values() {
  const json points = {0.0, kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0, kPi};
  return {
      {"a", 0.5},
      {"eps", 0.1},
      {"nx", 201},
      {"nt", 2001},
      {"length", kPi},
      {"T", 10.0},
      {"max_modes", 2048},
      {"tail_tol", 1e-10},
      {"allow_unconverged", false},
      {"threads", 1},
      {"out", "out"},
      {"preset", "smooth"},
      {"f0", ""},
      {"f1", ""},
      {"f", ""},
      {"phi", ""},
      {"psi", ""},
      {"f0_csv", ""},
      {"f1_csv", ""},
      {"f_csv", ""},
      {"phi_csv", ""},
      {"psi_csv", ""},
      {"kind", "perturbed"},
      {"source_mode", "operator_applied"},
      {"compare_oracle", false},
      {"oracle_dt", 0.005},
      {"theta", 0.5},
      {"green_x", points},
      {"green_xi", points},
      {"green_t", {0.1, 0.5, 1.0, 5.0, 10.0}},
      {"gamma", 0.75},
      {"delta", 1.0},
      {"eta", 0.5},
      {"k", 0.25},
      {"sweep_theorems", {"T31", "T32", "T33", "T41"}},
      {"sweep_eps", {0.1, 0.05, 0.02, 0.01, 0.005}},
      {"sweep_t_min", 1e-2},
      {"sweep_t_max", 50.0},
      {"sweep_t_points", 120},
      {"sweep_wavefronts", true},
      {"sweep_max_modes", 16384},
      {"sweep_x", points},
      {"sweep_xi", points},
      {"sweep_nx", 201},
      {"sweep_dt", 0.005},
      {"sweep_T", 50.0},
      {"plots", true},
      {"bound_eps", {0.1, 0.05, 0.025}},
      {"bound_t", 1.0},
      {"diag_c", 0.5},
  };
}

enum class Kind { Float, Int, Bool, String, FloatList, StringList };

Kind kind_of(const json& v) {
  if (v.is_boolean()) return Kind::Bool;
  if (v.is_number_integer()) return Kind::Int;
  if (v.is_number()) return Kind::Float;
  if (v.is_string()) return Kind::String;
  if (!v.empty() && v.front().is_string()) return Kind::StringList;
  return Kind::FloatList;
}

json coerce(const std::string& key, const json& def, const json& v) {
  auto bad = [&](const char* want) {
    return ValidationError("config key '" + key + "' must be " + want + ", got " + v.dump());
  };
  switch (kind_of(def)) {
    case Kind::Bool:
      if (!v.is_boolean()) throw bad("true or false");
      return v;
    case Kind::Int:
      if (v.is_number_integer()) return v;
      if (v.is_number_float() && std::nearbyint(v.get<double>()) == v.get<double>() &&
          std::abs(v.get<double>()) < 2e9) {
        return static_cast<long long>(v.get<double>());
      }
      throw bad("an integer");
    case Kind::Float:
      if (!v.is_number()) throw bad("a number");
      return v.get<double>();
    case Kind::String:
      if (!v.is_string()) throw bad("a string");
      return v;
    case Kind::FloatList: {
      if (!v.is_array()) throw bad("a list of numbers");
      json out = json::array();
      for (const auto& e : v) {
        if (!e.is_number()) throw bad("a list of numbers");
        out.push_back(e.get<double>());
      }
      return out;
    }
    case Kind::StringList: {
      if (!v.is_array()) throw bad("a list of strings");
      for (const auto& e : v) {
        if (!e.is_string()) throw bad("a list of strings");
      }
      return v;
    }
  }
  return v;
}

json parse_override(const json& def, std::string_view text) {
  const Kind k = kind_of(def);
  if (k == Kind::String) return std::string(text);
  if ((k == Kind::FloatList || k == Kind::StringList) && !text.empty() && text.front() != '[') {
    json out = json::array();
    std::size_t start = 0;
    for (;;) {
      const auto comma = text.find(',', start);
      std::string item(text.substr(start, comma - start));
      if (k == Kind::StringList) {
        out.push_back(item);
      } else {
        json v = json::parse(item, nullptr, false);
        out.push_back(v.is_discarded() ? json(item) : v);
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  }
  if (text.empty() && (k == Kind::FloatList || k == Kind::StringList)) return json::array();
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return std::string(text);
  return v;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(name) + " must be positive");
}

}  // namespace

RunConfig::RunConfig() : values_(default_values()) {}

std::vector<std::string> RunConfig::keys() {
  const json defaults = default_values();
  std::vector<std::string> k;
  for (const auto& [key, _] : defaults.items()) k.push_back(key);
  return k;
}

const json& RunConfig::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("unknown config key '" + key + "'");
  return *it;
}

void RunConfig::set_value(const std::string& key, json value) {
  static const json defaults = default_values();
  at(key);
  values_[key] = coerce(key, defaults.at(key), value);
}

void RunConfig::merge(const json& object) {
  if (!object.is_object()) throw ValidationError("config must be a flat JSON object");
  for (const auto& [key, value] : object.items()) {
    if (key == "schema_version") continue;
    set_value(key, value);
  }
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ValidationError("config " + path.string() + " is not valid JSON");
  merge(j);
}

void RunConfig::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ValidationError("--set expects key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  static const json defaults = default_values();
  at(key);
  set_value(key, parse_override(defaults.at(key), assignment.substr(eq + 1)));
}

double RunConfig::number(const std::string& key) const { return at(key).get<double>(); }
int RunConfig::integer(const std::string& key) const { return at(key).get<int>(); }
bool RunConfig::flag(const std::string& key) const { return at(key).get<bool>(); }
std::string RunConfig::text(const std::string& key) const { return at(key).get<std::string>(); }
std::vector<double> RunConfig::numbers(const std::string& key) const { return at(key).get<std::vector<double>>(); }
std::vector<std::string> RunConfig::texts(const std::string& key) const {
  return at(key).get<std::vector<std::string>>();
}

json RunConfig::resolved() const {
  json j = values_;
  j["schema_version"] = io::kSchemaVersion;
  return j;
}

MediumParams RunConfig::medium() const { return MediumParams(number("a"), number("eps")); }

Grid RunConfig::grid() const {
  const Grid g{integer("nx"), integer("nt"), number("length"), number("T")};
  g.validate();
  return g;
}

Truncation RunConfig::truncation() const {
  const Truncation t{integer("max_modes"), number("tail_tol")};
  t.validate();
  return t;
}

BoundExponents RunConfig::exponents() const {
  const BoundExponents e{number("gamma"), number("delta"), number("eta"), number("k")};
  e.validate();
  return e;
}

OracleConfig RunConfig::oracle() const {
  OracleConfig o;
  o.nx = integer("nx");
  o.dt = number("oracle_dt");
  o.theta = number("theta");
  o.limit = kind() == GreenKind::Limit;
  o.validate();
  return o;
}

SourceMode RunConfig::source_mode() const { return parse_source_mode(text("source_mode")); }
GreenKind RunConfig::kind() const { return parse_green_kind(text("kind")); }

std::vector<Theorem> RunConfig::theorems() const {
  std::vector<Theorem> out;
  for (const auto& s : texts("sweep_theorems")) out.push_back(parse_theorem(s));
  if (out.empty()) throw ValidationError("sweep_theorems is empty");
  return out;
}

std::filesystem::path RunConfig::out_dir() const {
  const std::string o = text("out");
  if (o.empty()) throw ValidationError("out must name a directory");
  return o;
}

SweepDomain RunConfig::sweep_domain() const {
  SweepDomain d;
  d.a = number("a");
  d.eps = numbers("sweep_eps");
  if (d.eps.empty()) throw ValidationError("sweep_eps is empty");
  const int tp = integer("sweep_t_points");
  if (tp < 1) throw ValidationError("sweep_t_points must be >= 1");
  require_positive(number("sweep_t_min"), "sweep_t_min");
  d.t = log_spaced(number("sweep_t_min"), number("sweep_t_max"), tp);
  d.x = numbers("sweep_x");
  d.xi = numbers("sweep_xi");
  d.wavefronts = flag("sweep_wavefronts");
  d.exponents = exponents();
  d.trunc = Truncation{integer("sweep_max_modes"), number("tail_tol")};
  d.trunc.validate();
  d.threads = integer("threads");
  d.preset = text("preset");
  d.nx = integer("sweep_nx");
  d.dt = number("sweep_dt");
  d.T = number("sweep_T");
  return d;
}

NeumannProblem RunConfig::problem() const {
  const MediumParams params = medium();
  const Grid g = grid();
  ProblemPreset p = problem_preset(text("preset"));
  for (const char* key : {"f0", "f1", "f", "phi", "psi"}) {
    const std::string v = text(key);
    if (v.empty()) continue;
    if (std::string_view(key) == "f0") p.f0 = v;
    if (std::string_view(key) == "f1") p.f1 = v;
    if (std::string_view(key) == "f") p.f = v;
    if (std::string_view(key) == "phi") p.phi = v;
    if (std::string_view(key) == "psi") p.psi = v;
  }
  NeumannProblem prob = make_problem(params, g, p);

  auto space_csv = [&](const char* key, SpaceField& target, EndpointSlopes& slopes) {
    const std::string path = text(key);
    if (path.empty()) return;
    SpaceField f = io::read_space_field(path);
    if (f.nx() != g.nx || std::abs(f.length - g.length) > 1e-9 * g.length) {
      throw GridMismatchError(std::string(key) + " grid (nx = " + std::to_string(f.nx()) +
                              ") does not match the configured grid");
    }
    f.length = g.length;
    target = std::move(f);
    slopes = endpoint_slopes(target);
  };
  space_csv("f0_csv", prob.f0, prob.f0_slopes);
  space_csv("f1_csv", prob.f1, prob.f1_slopes);

  if (const std::string path = text("f_csv"); !path.empty()) {
    Grid fg;
    SpaceTimeField f = io::read_space_time_field(path, fg);
    if (fg.nx != g.nx || fg.nt != g.nt || std::abs(fg.length - g.length) > 1e-9 * g.length ||
        std::abs(fg.T - g.T) > 1e-9 * g.T) {
      throw GridMismatchError("f_csv grid does not match the configured grid");
    }
    prob.f = SpaceTimeField::from_samples(std::move(f.values), g);
  }

  const std::string phi_path = text("phi_csv");
  const std::string psi_path = text("psi_csv");
  if (!phi_path.empty() || !psi_path.empty()) {
    auto series = [&](const std::string& path, const FluxSide& current) {
      if (path.empty()) return current.value;
      double T = 0.0;
      std::vector<double> v = io::read_time_series(path, T);
      if (static_cast<int>(v.size()) != g.nt || std::abs(T - g.T) > 1e-9 * g.T) {
        throw GridMismatchError(path + " does not match the configured time grid");
      }
      return v;
    };
    prob.flux = BoundaryFlux::from_samples(series(phi_path, prob.flux.phi), series(psi_path, prob.flux.psi), g.T);
    prob.homogeneous = prob.flux.is_zero();
  }
  prob.validate();
  return prob;
}

void RunConfig::validate() const {
  medium();
  grid();
  truncation();
  exponents();
  oracle();
  source_mode();
  out_dir();
  if (integer("threads") < 1) throw ValidationError("threads must be >= 1");
  problem_preset(text("preset"));
  for (double v : numbers("green_t")) {
    if (!(v >= 0.0)) throw ValidationError("green_t values must be >= 0");
  }
  for (const char* key : {"green_x", "green_xi", "sweep_x", "sweep_xi"}) {
    for (double v : numbers(key)) {
      if (!(v >= 0.0 && v <= kPi)) throw ValidationError(std::string(key) + " values must lie in [0, pi]");
    }
  }
  theorems();
  for (const char* key : {"sweep_eps", "bound_eps"}) {
    for (double e : numbers(key)) MediumParams(number("a"), e);
  }
  sweep_domain();
  require_positive(number("bound_t"), "bound_t");
  const double c = number("diag_c");
  if (!(c > 0.0 && c < 1.0)) throw ValidationError("diag_c must lie in (0, 1)");
}

}  // namespace viscowave
