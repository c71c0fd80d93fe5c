#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "viscowave/errors.hpp"
#include "viscowave/problem.hpp"

using namespace viscowave;

namespace {

constexpr double kPi = std::numbers::pi;

Grid small_grid(double length = kPi, double T = 2.0) { return Grid{41, 201, length, T}; }

}  // namespace

TEST_CASE("spatial presets evaluate with consistent derivatives") {
  const double L = 2.5;
  for (const char* text : {"cos(2,0.7)", "poly(1.5)", "gauss(0.4,2)", "const(3)+cos(1)", "cos(0,2)"}) {
    const auto p = SpacePreset::parse(text);
    for (double x : {0.3, 1.1, 2.2}) {
      const double h = 1e-4;
      const double d1 = (p.value(x + h, L) - p.value(x - h, L)) / (2 * h);
      const double d2 = (p.value(x + h, L) - 2 * p.value(x, L) + p.value(x - h, L)) / (h * h);
      CAPTURE(text);
      CAPTURE(x);
      CHECK(p.derivative(x, L) == doctest::Approx(d1).epsilon(1e-7).scale(1.0));
      CHECK(p.second_derivative(x, L) == doctest::Approx(d2).epsilon(1e-5).scale(1.0));
    }
    CHECK(std::abs(p.derivative(0.0, L)) < 1e-12);
    CHECK(std::abs(p.derivative(L, L)) < 1e-12);
  }
  CHECK(SpacePreset::parse("cos(3,2)").value(0.4, kPi) == doctest::Approx(2 * std::cos(1.2)));
  CHECK(SpacePreset::parse("poly").value(1.0, 3.0) == doctest::Approx(4.0));
  CHECK(SpacePreset::parse("zero").is_zero());
}

TEST_CASE("malformed presets are rejected") {
  for (const char* text : {"", "cos(", "cos(1.5)", "gauss(0)", "wave(1)", "const(1,2)", "cos(1)+", "const(abc)"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(SpacePreset::parse(text), ValidationError);
  }
  CHECK_THROWS_AS(SpaceTimePreset::parse("cos(1)@wobble(2)"), ValidationError);
  CHECK_THROWS_AS(FluxPreset::parse("tan(1)"), ValidationError);
  CHECK_THROWS_AS(problem_preset("nonexistent"), ValidationError);
}

TEST_CASE("space-time presets integrate in time exactly") {
  const auto p = SpaceTimePreset::parse("cos(1,2)@exp(0.5)+poly(0.1)@sin(2)+const(1)@cos(3)+cos(2)");
  const double x = 0.8, t = 1.7, L = kPi;
  double quad = 0.0;
  const int n = 2000;
  for (int k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    quad += w * p.value(x, t * k / n, L);
  }
  quad *= t / n;
  CHECK(p.time_integral(x, t, L) == doctest::Approx(quad).epsilon(1e-6));
  const double h = 1e-4;
  const double fd = (p.value(x + h, t, L) - 2 * p.value(x, t, L) + p.value(x - h, t, L)) / (h * h);
  CHECK(p.second_x_derivative(x, t, L) == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("flux presets carry analytic time derivatives") {
  const auto f = FluxPreset::parse("sin(2,0.5)+exp(0.3,2)+const(1)+cos(1.5)");
  for (double t : {0.0, 0.9, 3.3}) {
    const double h = 1e-5;
    CHECK(f.value(t, 1) == doctest::Approx((f.value(t + h) - f.value(t - h)) / (2 * h)).epsilon(1e-8));
    CHECK(f.value(t, 2) == doctest::Approx((f.value(t + h, 1) - f.value(t - h, 1)) / (2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("sampled fluxes recover derivatives at fourth order") {
  const double T = 2.0;
  auto err = [&](int nt) {
    std::vector<double> phi(nt), psi(nt, 0.0);
    for (int k = 0; k < nt; ++k) phi[k] = std::sin(1.3 * T * k / (nt - 1));
    const auto b = BoundaryFlux::from_samples(phi, psi, T);
    double e = 0.0;
    for (int k = 0; k < nt; ++k) {
      const double t = T * k / (nt - 1);
      e = std::max(e, std::abs(b.phi.d1[k] - 1.3 * std::cos(1.3 * t)));
    }
    return e;
  };
  const double e1 = err(41), e2 = err(81);
  CHECK(std::log2(e1 / e2) > 3.5);
  CHECK_THROWS_AS(BoundaryFlux::from_samples({1, 2, 3, 4, 5, 6}, {1, 2, 3}, 1.0), GridMismatchError);
  CHECK_THROWS_AS(BoundaryFlux::from_samples({1, 2, 3}, {1, 2, 3}, 1.0), ValidationError);
}

TEST_CASE("every named problem preset builds a valid problem") {
  const MediumParams m(0.5, 0.1);
  for (const auto& name : problem_preset_names()) {
    CAPTURE(name);
    const auto p = make_problem(m, small_grid(), problem_preset(name));
    CHECK_NOTHROW(p.validate());
    CHECK(p.homogeneous == (name != "flux"));
    CHECK(p.compatibility_warnings().empty());
    CHECK(p.f0_slopes.analytic);
  }
}

TEST_CASE("incompatible initial data raise one warning per endpoint") {
  const MediumParams m(0.5, 0.1);
  auto p = make_problem(m, small_grid(), problem_preset("free"));
  std::vector<double> ramp(p.grid.nx);
  for (int i = 0; i < p.grid.nx; ++i) ramp[i] = p.grid.x(i);
  p.f0 = SpaceField::from_samples(ramp, kPi);
  p.f0_slopes = endpoint_slopes(p.f0);
  CHECK_FALSE(p.f0_slopes.analytic);
  CHECK(p.f0_slopes.left == doctest::Approx(1.0));
  CHECK(p.f0_slopes.right == doctest::Approx(1.0));
  CHECK(p.compatibility_warnings().size() == 2);
}

TEST_CASE("tampered or mismatched data fail validation") {
  const MediumParams m(0.5, 0.1);
  auto p = make_problem(m, small_grid(), problem_preset("smooth"));
  p.f0.values[3] += 1e-6;
  CHECK_THROWS_AS(p.f0.verify(), ValidationError);
  auto q = make_problem(m, small_grid(), problem_preset("smooth"));
  q.f1 = SpaceField::sample(SpacePreset::parse("cos(1)"), 21, kPi);
  CHECK_THROWS_AS(q.validate(), GridMismatchError);
  CHECK_THROWS_AS((Grid{2, 10, kPi, 1.0}.validate()), ValidationError);
  CHECK_THROWS_AS((Grid{10, 10, kPi, -1.0}.validate()), ValidationError);
}

TEST_CASE("the lifting field carries the prescribed fluxes") {
  const double phi = 0.7, psi = -1.3, h = 1e-6;
  CHECK((lifting_value(phi, psi, h) - lifting_value(phi, psi, 0.0)) / h == doctest::Approx(phi).epsilon(1e-5));
  CHECK((lifting_value(phi, psi, kPi) - lifting_value(phi, psi, kPi - h)) / h == doctest::Approx(psi).epsilon(1e-5));
  CHECK(lifting_value(1.0, 1.0, 1.234) == doctest::Approx(1.234));
}

TEST_CASE("homogenization subtracts the operator applied to the lifting field") {
  const MediumParams m(0.5, 0.1);
  const Grid g{41, 201, kPi, 2.0};
  ProblemPreset pre{"custom", "zero", "zero", "zero", "sin(1)", "zero"};
  const auto p = make_problem(m, g, pre);
  const auto h = homogenize(p);
  CHECK(h.homogeneous);
  CHECK(h.flux.is_zero());
  CHECK(h.source_mode == SourceMode::OperatorApplied);

  // phi = sin t, psi = 0 at (x, t) = (pi/2, 1)
  const int i = 20, k = 100;
  const double x = g.x(i), t = g.t(k);
  REQUIRE(x == doctest::Approx(kPi / 2));
  REQUIRE(t == doctest::Approx(1.0));
  const double shape = 3.0 * kPi / 8.0;
  const double lw = m.eps() * (-std::cos(1.0) / kPi) - std::sin(1.0) / kPi + shape * std::sin(1.0) -
                    m.a() * shape * std::cos(1.0);
  CHECK(h.f.at(i, k) == doctest::Approx(-lw).epsilon(1e-12));

  // independent check by finite differences of the lifting field
  auto w = [&](double xx, double tt) { return lifting_value(std::sin(tt), 0.0, xx); };
  const double d = 1e-3;
  const double w_t = (w(x, t + d) - w(x, t - d)) / (2 * d);
  const double w_tt = (w(x, t + d) - 2 * w(x, t) + w(x, t - d)) / (d * d);
  const double w_xx = (w(x + d, t) - 2 * w(x, t) + w(x - d, t)) / (d * d);
  const double w_xxt = ((w(x + d, t + d) - 2 * w(x, t + d) + w(x - d, t + d)) -
                        (w(x + d, t - d) - 2 * w(x, t - d) + w(x - d, t - d))) /
                       (2 * d * d * d);
  const double lw_fd = m.eps() * w_xxt + w_xx - w_tt - m.a() * w_t;
  CHECK(h.f.at(i, k) == doctest::Approx(-lw_fd).epsilon(1e-5));

  // F1 loses the lifting of phi'(0) = 1
  CHECK(h.f1.values[i] == doctest::Approx(-lifting_value(1.0, 0.0, x)));
  CHECK(h.f0.values[i] == doctest::Approx(0.0));

  const auto printed = homogenize(p, SourceMode::PaperFormula);
  CHECK(printed.source_mode == SourceMode::PaperFormula);
  CHECK(source_mode_discrepancy(p) > 1e-3);

  const auto back = dehomogenize(SolutionField(g, std::vector<double>(g.nx * g.nt, 0.0), Provenance::Oracle, m, 0), p.flux);
  CHECK(back.at(i, k) == doctest::Approx(lifting_value(std::sin(1.0), 0.0, x)));
}

TEST_CASE("zero flux homogenization is the identity and constant flux has no source") {
  const MediumParams m(0.5, 0.1);
  const auto p = make_problem(m, small_grid(), problem_preset("smooth"));
  const auto h = homogenize(p);
  CHECK(h.f.values == p.f.values);
  CHECK(h.f0.values == p.f0.values);
  CHECK(h.f1.values == p.f1.values);

  ProblemPreset pre{"ones", "zero", "zero", "zero", "const(1)", "const(1)"};
  const auto q = homogenize(make_problem(m, small_grid(), pre));
  for (double v : q.f.values) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("homogenization requires the [0, pi] domain") {
  const MediumParams m(0.5, 0.1);
  const auto p = make_problem(m, small_grid(2.0), problem_preset("flux"));
  CHECK_THROWS_AS(homogenize(p), ValidationError);
}

TEST_CASE("rescaling maps [0, L] to [0, pi] and back") {
  const MediumParams m(0.4, 0.2);
  const auto p = make_problem(m, small_grid(2 * kPi, 4.0), problem_preset("flux"));
  const auto [scaled, rec] = rescale_to_pi(p);
  CHECK(rec.c == doctest::Approx(0.5));
  CHECK(scaled.params.a() == doctest::Approx(0.8));
  CHECK(scaled.params.eps() == doctest::Approx(0.1));
  CHECK(scaled.grid.length == doctest::Approx(kPi));
  CHECK(scaled.grid.T == doctest::Approx(2.0));
  CHECK(scaled.flux.phi.value[10] == doctest::Approx(p.flux.phi.value[10] / 0.5));
  CHECK(scaled.f1.values[7] == doctest::Approx(p.f1.values[7] / 0.5));
  CHECK(scaled.f.values[99] == doctest::Approx(p.f.values[99] / 0.25));

  std::vector<double> vals(scaled.grid.nx * scaled.grid.nt, 1.5);
  const SolutionField u(scaled.grid, vals, Provenance::SpectralEps, scaled.params, 5);
  const auto back = rescale_from_pi(u.with_initial_velocity(std::vector<double>(scaled.grid.nx, 2.0)), rec, m);
  CHECK(back.grid().length == doctest::Approx(2 * kPi));
  CHECK(back.grid().T == doctest::Approx(4.0));
  CHECK(back.params() == m);
  CHECK((*back.initial_velocity())[3] == doctest::Approx(1.0));

  const auto same = rescale_to_pi(make_problem(m, small_grid(), problem_preset("smooth")));
  CHECK(same.second.c == 1.0);

  const MediumParams m2(0.5, 0.3);
  CHECK_THROWS_AS(rescale_to_pi(make_problem(m2, small_grid(kPi / 4), problem_preset("smooth"))), ValidationError);
}
