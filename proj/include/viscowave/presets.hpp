#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace viscowave {

/// Closed-form spatial generator on [0, L], written as a '+'-separated sum of
/// terms:
///   zero | const(c) | cos(k[,amp]) | poly([amp]) | gauss(sigma[,amp])
/// cos(k) is the k-th cosine mode cos(k pi x / L); poly is amp (x (L - x))^2;
/// gauss is the periodized bump amp exp(-cos^2(pi x / L) / (2 sigma^2)), which
/// peaks at L/2 and has zero slope at both ends.
class SpacePreset {
 public:
  static SpacePreset parse(std::string_view text);

  double value(double x, double length) const;
  double derivative(double x, double length) const;         ///< d/dx
  double second_derivative(double x, double length) const;  ///< d^2/dx^2
  const std::string& text() const noexcept { return text_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  struct Term {
    enum class Kind { Const, Cos, Poly, Gauss } kind;
    double p0 = 0.0;
    double p1 = 1.0;
  };

 private:
  std::string text_;
  std::vector<Term> terms_;
};

/// Time profile multiplying a spatial term: const | exp(rate) | sin(omega) |
/// cos(omega), i.e. 1, e^{-rate t}, sin(omega t), cos(omega t).
struct TimeProfile {
  enum class Kind { Const, Exp, Sin, Cos } kind = Kind::Const;
  double rate = 0.0;

  double value(double t) const;
  /// Antiderivative from 0, int_0^t profile(s) ds.
  double integral(double t) const;
};

/// Space-time generator: '+'-separated terms `space@time`, e.g.
/// "cos(1,1.0)@exp(1)" for cos(x) e^{-t}. A term without '@' is constant in t.
class SpaceTimePreset {
 public:
  static SpaceTimePreset parse(std::string_view text);

  double value(double x, double t, double length) const;
  double second_x_derivative(double x, double t, double length) const;
  /// int_0^t F(x, s) ds
  double time_integral(double x, double t, double length) const;
  const std::string& text() const noexcept { return text_; }
  bool is_zero() const noexcept { return terms_.empty(); }

 private:
  struct Term {
    SpacePreset space;
    TimeProfile time;
  };
  std::string text_;
  std::vector<Term> terms_;
};

/// Boundary flux generator with analytic derivatives: '+'-separated terms
///   zero | const(c) | sin(omega[,amp]) | cos(omega[,amp]) | exp(rate[,amp])
class FluxPreset {
 public:
  static FluxPreset parse(std::string_view text);

  /// order 0, 1 or 2 time derivative.
  double value(double t, int order = 0) const;
  const std::string& text() const noexcept { return text_; }
  bool is_zero() const noexcept { return terms_.empty(); }

 private:
  struct Term {
    enum class Kind { Const, Sin, Cos, Exp } kind;
    double p0 = 0.0;
    double amp = 1.0;
  };
  std::string text_;
  std::vector<Term> terms_;
};

/// A named problem preset: expressions for every datum.
struct ProblemPreset {
  std::string name;
  std::string f0;
  std::string f1;
  std::string f;
  std::string phi = "zero";
  std::string psi = "zero";
};

/// smooth, free, constant, single_mode, flux.
ProblemPreset problem_preset(std::string_view name);
std::vector<std::string> problem_preset_names();

}  // namespace viscowave
