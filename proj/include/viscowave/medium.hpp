#pragma once

namespace viscowave {

/// Damping `a` and viscosity `eps` of the operator
///   eps u_xxt + u_xx - u_tt - a u_t.
/// Both must lie strictly inside (0, 1); construction throws ValidationError
/// otherwise.
class MediumParams {
 public:
  MediumParams(double a, double eps);

  double a() const noexcept { return a_; }
  double eps() const noexcept { return eps_; }

  friend bool operator==(const MediumParams&, const MediumParams&) = default;

 private:
  double a_;
  double eps_;
};

}  // namespace viscowave
