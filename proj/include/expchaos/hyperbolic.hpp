#pragma once

#include <string_view>

#include "expchaos/types.hpp"

namespace expchaos {

enum class HyperbolicDomain {
  UnitDisc,
  RightHalfPlane,
  StripPi,       // |Im z| < pi
  SlitPlanePos,  // C \ [0, inf)
  SlitPlaneNeg,  // C \ (-inf, 0]
};

const char* domain_name(HyperbolicDomain d) noexcept;
HyperbolicDomain parse_domain(std::string_view name);

/// Strict membership, no tolerance.
bool in_domain(HyperbolicDomain d, Complex z);

/// Density of the hyperbolic metric (curvature -1 normalization).
/// SlitPlanePos measures the argument in (0, 2pi); SlitPlaneNeg uses the
/// principal Arg in (-pi, pi).
double density(HyperbolicDomain d, Complex z);

/// e^{i theta} (z - a) / (1 - conj(a) z), an automorphism of the unit disc.
Complex mobius(Complex a, double theta, Complex z);
Complex mobius_deriv(Complex a, double theta, Complex z);

enum class Iso {
  Phi1,  // RightHalfPlane -> UnitDisc,        (1 - z) / (1 + z)
  Phi2,  // StripPi -> RightHalfPlane,         e^{z/2}
  Phi3,  // RightHalfPlane -> SlitPlanePos,    -z^2
  Phi4,  // SlitPlanePos -> SlitPlaneNeg,      -z
};

HyperbolicDomain iso_source(Iso which) noexcept;
HyperbolicDomain iso_target(Iso which) noexcept;
Complex iso(Iso which, Complex z);
Complex iso_deriv(Iso which, Complex z);

/// |f'(z)| * rho_dst(f(z)) / rho_src(z).
double hyp_derivative(Complex fz, Complex dfz, HyperbolicDomain src, Complex z,
                      HyperbolicDomain dst);

/// Hyperbolic derivative of exp from U = C \ [0, inf) to itself, closed form
/// r sin(theta/2) / |sin((r/2) sin theta)| with zeta = r e^{i theta}.
double expansion_U(Complex zeta);

/// Hyperbolic derivative of exp from C \ (-inf, 0] to itself,
/// r cos(theta/2) / |cos(Arg(e^zeta)/2)|. Never forms e^zeta.
double expansion_slitneg(Complex zeta);

}  // namespace expchaos
