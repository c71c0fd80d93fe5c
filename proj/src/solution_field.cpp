#include "viscowave/solution_field.hpp"

#include <cmath>
#include <string>

#include "viscowave/errors.hpp"
#include "viscowave/series.hpp"

namespace viscowave {

void Grid::validate() const {
  if (nx < 3) throw ValidationError("grid needs nx >= 3, got " + std::to_string(nx));
  if (nt < 2) throw ValidationError("grid needs nt >= 2, got " + std::to_string(nt));
  if (!(length > 0.0) || !std::isfinite(length)) throw ValidationError("grid length must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("grid final time T must be positive");
}

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::SpectralEps: return "spectral_eps";
    case Provenance::SpectralLimit: return "spectral_limit";
    case Provenance::Oracle: return "oracle";
  }
  return "unknown";
}

double ModalHistory::evaluate(int k, double x) const {
  series::CompensatedSum s;
  for (int n = 0; n <= modes; ++n) s += coeff(k, n) * std::cos(n * x);
  return s.value();
}

double ModalHistory::evaluate_dx(int k, double x) const {
  series::CompensatedSum s;
  for (int n = 1; n <= modes; ++n) s += -n * coeff(k, n) * std::sin(n * x);
  return s.value();
}

SolutionField::SolutionField(Grid grid, std::vector<double> values, Provenance provenance,
                             MediumParams params, int modes)
    : grid_(grid),
      values_(std::move(values)),
      provenance_(provenance),
      params_(params),
      modes_(modes),
      equation_eps_(provenance == Provenance::SpectralLimit ? 0.0 : params.eps()) {
  grid_.validate();
  if (values_.size() != static_cast<std::size_t>(grid_.nx) * grid_.nt) {
    throw GridMismatchError("solution field has " + std::to_string(values_.size()) +
                            " samples for a " + std::to_string(grid_.nx) + "x" +
                            std::to_string(grid_.nt) + " grid");
  }
}

SolutionField SolutionField::with_initial_velocity(std::vector<double> v) const {
  if (v.size() != static_cast<std::size_t>(grid_.nx)) {
    throw GridMismatchError("initial velocity must have nx samples");
  }
  SolutionField out = *this;
  out.initial_velocity_ = std::move(v);
  return out;
}

SolutionField SolutionField::with_modal(ModalHistory m) const {
  if (m.coeffs.size() != static_cast<std::size_t>(grid_.nt) * (m.modes + 1)) {
    throw GridMismatchError("modal history does not match the time grid");
  }
  SolutionField out = *this;
  out.modal_ = std::move(m);
  return out;
}

SolutionField SolutionField::with_values(std::vector<double> values) const {
  SolutionField out(grid_, std::move(values), provenance_, params_, modes_);
  out.equation_eps_ = equation_eps_;
  return out;
}

SolutionField SolutionField::with_equation_eps(double eps) const {
  SolutionField out = *this;
  out.equation_eps_ = eps;
  return out;
}

}  // namespace viscowave
