#include "viscowave/presets.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "viscowave/errors.hpp"

namespace viscowave {

namespace {

constexpr double kPi = std::numbers::pi;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Splits on `sep` outside parentheses.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == sep && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(trim(s.substr(start)));
  return parts;
}

double parse_number(std::string_view s, std::string_view context) {
  s = trim(s);
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ValidationError("bad number '" + std::string(s) + "' in preset '" +
                          std::string(context) + "'");
  }
  return v;
}

struct Call {
  std::string_view name;
  std::vector<double> args;
};

Call parse_call(std::string_view term, std::string_view context) {
  Call c;
  const auto open = term.find('(');
  if (open == std::string_view::npos) {
    c.name = trim(term);
    return c;
  }
  if (term.back() != ')') {
    throw ValidationError("unbalanced parentheses in preset '" + std::string(context) + "'");
  }
  c.name = trim(term.substr(0, open));
  const auto inner = trim(term.substr(open + 1, term.size() - open - 2));
  if (!inner.empty()) {
    for (auto a : split_top(inner, ',')) c.args.push_back(parse_number(a, context));
  }
  return c;
}

void expect_args(const Call& c, std::size_t lo, std::size_t hi, std::string_view context) {
  if (c.args.size() < lo || c.args.size() > hi) {
    throw ValidationError("wrong number of arguments to '" + std::string(c.name) +
                          "' in preset '" + std::string(context) + "'");
  }
}

}  // namespace

SpacePreset SpacePreset::parse(std::string_view text) {
  SpacePreset p;
  p.text_ = std::string(trim(text));
  if (p.text_.empty()) throw ValidationError("empty spatial preset");
  for (auto part : split_top(p.text_, '+')) {
    if (part.empty()) throw ValidationError("empty term in preset '" + p.text_ + "'");
    const Call c = parse_call(part, p.text_);
    Term t{};
    if (c.name == "zero") {
      expect_args(c, 0, 0, p.text_);
      continue;
    } else if (c.name == "const") {
      expect_args(c, 1, 1, p.text_);
      t = {Term::Kind::Const, c.args[0], 1.0};
    } else if (c.name == "cos") {
      expect_args(c, 1, 2, p.text_);
      if (c.args[0] < 0.0 || c.args[0] != std::floor(c.args[0])) {
        throw ValidationError("cos mode index must be a non-negative integer in '" + p.text_ + "'");
      }
      t = {Term::Kind::Cos, c.args[0], c.args.size() > 1 ? c.args[1] : 1.0};
    } else if (c.name == "poly") {
      expect_args(c, 0, 1, p.text_);
      t = {Term::Kind::Poly, c.args.empty() ? 1.0 : c.args[0], 1.0};
    } else if (c.name == "gauss") {
      expect_args(c, 1, 2, p.text_);
      if (!(c.args[0] > 0.0)) throw ValidationError("gauss width must be positive");
      t = {Term::Kind::Gauss, c.args[0], c.args.size() > 1 ? c.args[1] : 1.0};
    } else {
      throw ValidationError("unknown spatial preset term '" + std::string(c.name) + "'");
    }
    p.terms_.push_back(t);
  }
  return p;
}

namespace {

// Value and first two x-derivatives of one spatial term.
struct Jet {
  double v, d1, d2;
};

Jet eval_term(const SpacePreset::Term& t, double x, double length) {
  using K = SpacePreset::Term::Kind;
  switch (t.kind) {
    case K::Const:
      return {t.p0, 0.0, 0.0};
    case K::Cos: {
      const double s = t.p0 * kPi / length;
      return {t.p1 * std::cos(s * x), -t.p1 * s * std::sin(s * x), -t.p1 * s * s * std::cos(s * x)};
    }
    case K::Poly: {
      const double q = x * (length - x);
      const double dq = length - 2.0 * x;
      return {t.p0 * q * q, 2.0 * t.p0 * q * dq, 2.0 * t.p0 * (dq * dq - 2.0 * q)};
    }
    case K::Gauss: {
      const double k = kPi / length;
      const double th = k * x;
      const double s2 = t.p0 * t.p0;
      const double g = -(1.0 + std::cos(2.0 * th)) / (4.0 * s2);
      const double dg = std::sin(2.0 * th) / (2.0 * s2);
      const double ddg = std::cos(2.0 * th) / s2;
      const double f = t.p1 * std::exp(g);
      return {f, k * f * dg, k * k * f * (dg * dg + ddg)};
    }
  }
  return {0.0, 0.0, 0.0};
}

}  // namespace

double SpacePreset::value(double x, double length) const {
  double s = 0.0;
  for (const auto& t : terms_) s += eval_term(t, x, length).v;
  return s;
}

double SpacePreset::derivative(double x, double length) const {
  double s = 0.0;
  for (const auto& t : terms_) s += eval_term(t, x, length).d1;
  return s;
}

double SpacePreset::second_derivative(double x, double length) const {
  double s = 0.0;
  for (const auto& t : terms_) s += eval_term(t, x, length).d2;
  return s;
}

double TimeProfile::value(double t) const {
  switch (kind) {
    case Kind::Const: return 1.0;
    case Kind::Exp: return std::exp(-rate * t);
    case Kind::Sin: return std::sin(rate * t);
    case Kind::Cos: return std::cos(rate * t);
  }
  return 0.0;
}

double TimeProfile::integral(double t) const {
  switch (kind) {
    case Kind::Const: return t;
    case Kind::Exp: return rate == 0.0 ? t : -std::expm1(-rate * t) / rate;
    case Kind::Sin: return rate == 0.0 ? 0.0 : (1.0 - std::cos(rate * t)) / rate;
    case Kind::Cos: return rate == 0.0 ? t : std::sin(rate * t) / rate;
  }
  return 0.0;
}

SpaceTimePreset SpaceTimePreset::parse(std::string_view text) {
  SpaceTimePreset p;
  p.text_ = std::string(trim(text));
  if (p.text_.empty()) throw ValidationError("empty space-time preset");
  for (auto part : split_top(p.text_, '+')) {
    const auto at = part.find('@');
    Term term{SpacePreset::parse(part.substr(0, at)), TimeProfile{}};
    if (term.space.is_zero()) continue;
    if (at != std::string_view::npos) {
      const std::string tctx(part);
      const Call c = parse_call(trim(part.substr(at + 1)), tctx);
      if (c.name == "const") {
        expect_args(c, 0, 0, tctx);
        term.time = {TimeProfile::Kind::Const, 0.0};
      } else if (c.name == "exp" || c.name == "sin" || c.name == "cos") {
        expect_args(c, 1, 1, tctx);
        const auto kind = c.name == "exp"   ? TimeProfile::Kind::Exp
                          : c.name == "sin" ? TimeProfile::Kind::Sin
                                            : TimeProfile::Kind::Cos;
        term.time = {kind, c.args[0]};
      } else {
        throw ValidationError("unknown time profile '" + std::string(c.name) + "'");
      }
    }
    p.terms_.push_back(std::move(term));
  }
  return p;
}

double SpaceTimePreset::value(double x, double t, double length) const {
  double s = 0.0;
  for (const auto& term : terms_) s += term.space.value(x, length) * term.time.value(t);
  return s;
}

double SpaceTimePreset::second_x_derivative(double x, double t, double length) const {
  double s = 0.0;
  for (const auto& term : terms_) s += term.space.second_derivative(x, length) * term.time.value(t);
  return s;
}

double SpaceTimePreset::time_integral(double x, double t, double length) const {
  double s = 0.0;
  for (const auto& term : terms_) s += term.space.value(x, length) * term.time.integral(t);
  return s;
}

FluxPreset FluxPreset::parse(std::string_view text) {
  FluxPreset p;
  p.text_ = std::string(trim(text));
  if (p.text_.empty()) throw ValidationError("empty flux preset");
  for (auto part : split_top(p.text_, '+')) {
    const Call c = parse_call(part, p.text_);
    Term t{};
    if (c.name == "zero") {
      expect_args(c, 0, 0, p.text_);
      continue;
    } else if (c.name == "const") {
      expect_args(c, 1, 1, p.text_);
      t = {Term::Kind::Const, 0.0, c.args[0]};
    } else if (c.name == "sin" || c.name == "cos" || c.name == "exp") {
      expect_args(c, 1, 2, p.text_);
      const auto kind = c.name == "sin"   ? Term::Kind::Sin
                        : c.name == "cos" ? Term::Kind::Cos
                                          : Term::Kind::Exp;
      t = {kind, c.args[0], c.args.size() > 1 ? c.args[1] : 1.0};
    } else {
      throw ValidationError("unknown flux preset term '" + std::string(c.name) + "'");
    }
    p.terms_.push_back(t);
  }
  return p;
}

double FluxPreset::value(double t, int order) const {
  if (order < 0 || order > 2) throw DomainError("flux derivative order must be 0, 1 or 2");
  double s = 0.0;
  for (const auto& term : terms_) {
    const double w = term.p0;
    switch (term.kind) {
      case Term::Kind::Const:
        s += order == 0 ? term.amp : 0.0;
        break;
      case Term::Kind::Sin: {
        const double v[3] = {std::sin(w * t), w * std::cos(w * t), -w * w * std::sin(w * t)};
        s += term.amp * v[order];
        break;
      }
      case Term::Kind::Cos: {
        const double v[3] = {std::cos(w * t), -w * std::sin(w * t), -w * w * std::cos(w * t)};
        s += term.amp * v[order];
        break;
      }
      case Term::Kind::Exp: {
        const double e = std::exp(-w * t);
        const double v[3] = {e, -w * e, w * w * e};
        s += term.amp * v[order];
        break;
      }
    }
  }
  return s;
}

ProblemPreset problem_preset(std::string_view name) {
  const std::string bump = "gauss(0.5)";
  const std::string velocity = "cos(1,1)+cos(3,0.5)";
  if (name == "smooth") return {"smooth", bump, velocity, "cos(1,1)@exp(1)"};
  if (name == "free") return {"free", bump, velocity, "zero"};
  if (name == "constant") return {"constant", "const(1)", "zero", "zero"};
  if (name == "single_mode") return {"single_mode", "zero", "cos(1,1)", "zero"};
  if (name == "flux") {
    // phi = 0.2 (1 - cos 2t) keeps phi(0) = phi'(0) = 0, matching the data's zero end slopes.
    return {"flux", bump, "zero", "zero", "const(0.2)+cos(2,-0.2)", "zero"};
  }
  throw ValidationError("unknown problem preset '" + std::string(name) + "'");
}

std::vector<std::string> problem_preset_names() {
  return {"smooth", "free", "constant", "single_mode", "flux"};
}

}  // namespace viscowave
