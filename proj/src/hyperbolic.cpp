#include "expchaos/hyperbolic.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace expchaos {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void outside(const char* what) { throw Error(ErrorCode::OutsideDomain, what); }

double arg_0_2pi(Complex z) {
  double a = std::atan2(z.imag(), z.real());
  if (a <= 0.0) a += kTwoPi;
  return a;
}

}  // namespace

const char* domain_name(HyperbolicDomain d) noexcept {
  switch (d) {
    case HyperbolicDomain::UnitDisc: return "unit-disc";
    case HyperbolicDomain::RightHalfPlane: return "right-half-plane";
    case HyperbolicDomain::StripPi: return "strip";
    case HyperbolicDomain::SlitPlanePos: return "slit-pos";
    case HyperbolicDomain::SlitPlaneNeg: return "slit-neg";
  }
  return "unknown";
}

HyperbolicDomain parse_domain(std::string_view name) {
  for (auto d : {HyperbolicDomain::UnitDisc, HyperbolicDomain::RightHalfPlane,
                 HyperbolicDomain::StripPi, HyperbolicDomain::SlitPlanePos,
                 HyperbolicDomain::SlitPlaneNeg}) {
    if (name == domain_name(d)) return d;
  }
  static constexpr std::pair<std::string_view, HyperbolicDomain> kAliases[] = {
      {"UnitDisc", HyperbolicDomain::UnitDisc},
      {"RightHalfPlane", HyperbolicDomain::RightHalfPlane},
      {"StripPi", HyperbolicDomain::StripPi},
      {"SlitPlanePos", HyperbolicDomain::SlitPlanePos},
      {"SlitPlaneNeg", HyperbolicDomain::SlitPlaneNeg}};
  for (const auto& [alias, d] : kAliases)
    if (name == alias) return d;
  throw Error(ErrorCode::InvalidArgument, "unknown domain '" + std::string(name) + "'");
}

bool in_domain(HyperbolicDomain d, Complex z) {
  const double x = z.real(), y = z.imag();
  if (!std::isfinite(x) || !std::isfinite(y)) return false;
  switch (d) {
    case HyperbolicDomain::UnitDisc: return std::norm(z) < 1.0;
    case HyperbolicDomain::RightHalfPlane: return x > 0.0;
    case HyperbolicDomain::StripPi: return std::abs(y) < kPi;
    case HyperbolicDomain::SlitPlanePos: return !(y == 0.0 && x >= 0.0);
    case HyperbolicDomain::SlitPlaneNeg: return !(y == 0.0 && x <= 0.0);
  }
  return false;
}

double density(HyperbolicDomain d, Complex z) {
  if (!in_domain(d, z)) outside("density: point outside the domain");
  switch (d) {
    case HyperbolicDomain::UnitDisc: return 2.0 / (1.0 - std::norm(z));
    case HyperbolicDomain::RightHalfPlane: return 1.0 / z.real();
    case HyperbolicDomain::StripPi: return 1.0 / (2.0 * std::cos(z.imag() / 2.0));
    case HyperbolicDomain::SlitPlanePos:
      return 1.0 / (2.0 * std::abs(z) * std::sin(arg_0_2pi(z) / 2.0));
    case HyperbolicDomain::SlitPlaneNeg:
      return 1.0 / (2.0 * std::abs(z) * std::cos(std::arg(z) / 2.0));
  }
  outside("density: unknown domain");
}

Complex mobius(Complex a, double theta, Complex z) {
  if (!(std::norm(a) < 1.0))
    throw Error(ErrorCode::ParameterOutsideDisc, "mobius: |a| must be < 1");
  if (!(std::norm(z) < 1.0))
    throw Error(ErrorCode::ParameterOutsideDisc, "mobius: |z| must be < 1");
  return std::polar(1.0, theta) * (z - a) / (1.0 - std::conj(a) * z);
}

Complex mobius_deriv(Complex a, double theta, Complex z) {
  if (!(std::norm(a) < 1.0) || !(std::norm(z) < 1.0))
    throw Error(ErrorCode::ParameterOutsideDisc, "mobius: parameters must lie in the disc");
  const Complex den = 1.0 - std::conj(a) * z;
  return std::polar(1.0, theta) * (1.0 - std::norm(a)) / (den * den);
}

HyperbolicDomain iso_source(Iso which) noexcept {
  switch (which) {
    case Iso::Phi1: return HyperbolicDomain::RightHalfPlane;
    case Iso::Phi2: return HyperbolicDomain::StripPi;
    case Iso::Phi3: return HyperbolicDomain::RightHalfPlane;
    case Iso::Phi4: return HyperbolicDomain::SlitPlanePos;
  }
  return HyperbolicDomain::UnitDisc;
}

HyperbolicDomain iso_target(Iso which) noexcept {
  switch (which) {
    case Iso::Phi1: return HyperbolicDomain::UnitDisc;
    case Iso::Phi2: return HyperbolicDomain::RightHalfPlane;
    case Iso::Phi3: return HyperbolicDomain::SlitPlanePos;
    case Iso::Phi4: return HyperbolicDomain::SlitPlaneNeg;
  }
  return HyperbolicDomain::UnitDisc;
}

Complex iso(Iso which, Complex z) {
  if (!in_domain(iso_source(which), z)) outside("iso: point outside the source domain");
  switch (which) {
    case Iso::Phi1: return (1.0 - z) / (1.0 + z);
    case Iso::Phi2: return std::exp(z / 2.0);
    case Iso::Phi3: return -(z * z);
    case Iso::Phi4: return -z;
  }
  return z;
}

Complex iso_deriv(Iso which, Complex z) {
  if (!in_domain(iso_source(which), z)) outside("iso: point outside the source domain");
  switch (which) {
    case Iso::Phi1: return -2.0 / ((1.0 + z) * (1.0 + z));
    case Iso::Phi2: return std::exp(z / 2.0) / 2.0;
    case Iso::Phi3: return -2.0 * z;
    case Iso::Phi4: return {-1.0, 0.0};
  }
  return {1.0, 0.0};
}

double hyp_derivative(Complex fz, Complex dfz, HyperbolicDomain src, Complex z,
                      HyperbolicDomain dst) {
  return std::abs(dfz) * density(dst, fz) / density(src, z);
}

double expansion_U(Complex zeta) {
  // f^{-1}(U) = {Im zeta not in 2 pi Z}
  if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag()) ||
      std::remainder(zeta.imag(), kTwoPi) == 0.0)
    outside("expansion_U: zeta not in exp^{-1}(C \\ [0, inf))");
  const double r = std::abs(zeta);
  const double theta = arg_0_2pi(zeta);
  // r sin(theta) == Im zeta
  return r * std::sin(theta / 2.0) / std::abs(std::sin(zeta.imag() / 2.0));
}

double expansion_slitneg(Complex zeta) {
  if (!in_domain(HyperbolicDomain::SlitPlaneNeg, zeta))
    outside("expansion_slitneg: zeta not in C \\ (-inf, 0]");
  const double image_arg = std::remainder(zeta.imag(), kTwoPi);  // Arg(e^zeta) in [-pi, pi]
  if (std::abs(image_arg) >= kPi) outside("expansion_slitneg: exp(zeta) on (-inf, 0]");
  const double r = std::abs(zeta);
  return r * std::cos(std::arg(zeta) / 2.0) / std::abs(std::cos(image_arg / 2.0));
}

}  // namespace expchaos
