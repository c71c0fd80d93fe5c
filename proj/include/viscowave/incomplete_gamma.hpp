#pragma once

namespace viscowave {

/// Upper incomplete Gamma function Gamma(s, z) = int_z^inf t^{s-1} e^{-t} dt
/// for s > 0, z >= 0. Uses the lower-function series when z < s + 1 and a
/// modified Lentz continued fraction otherwise. Throws DomainError outside
/// the domain.
double incomplete_gamma(double s, double z);

}  // namespace viscowave
