#include <doctest.h>

#include <cmath>
#include <numbers>

#include "expchaos/hyperbolic.hpp"
#include "oracles.hpp"

using namespace expchaos;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("density examples") {
  CHECK(density(HyperbolicDomain::UnitDisc, {0, 0}) == Approx(2.0));
  CHECK(density(HyperbolicDomain::StripPi, {0, 0}) == Approx(0.5));
  CHECK(density(HyperbolicDomain::SlitPlanePos, {-1, 0}) == Approx(0.5));
  CHECK(density(HyperbolicDomain::RightHalfPlane, {4, 1}) == Approx(0.25));
  CHECK(density(HyperbolicDomain::SlitPlanePos, {0, kPi}) ==
        Approx(oracle::kRhoUAtPiI).epsilon(1e-14));
  CHECK_THROWS_AS(density(HyperbolicDomain::UnitDisc, {1, 0}), Error);
  CHECK_THROWS_AS(density(HyperbolicDomain::SlitPlaneNeg, {-2, 0}), Error);
}

TEST_CASE("domain names round trip") {
  for (auto d : {HyperbolicDomain::UnitDisc, HyperbolicDomain::RightHalfPlane,
                 HyperbolicDomain::StripPi, HyperbolicDomain::SlitPlanePos,
                 HyperbolicDomain::SlitPlaneNeg})
    CHECK(parse_domain(domain_name(d)) == d);
  CHECK(parse_domain("StripPi") == HyperbolicDomain::StripPi);
  CHECK_THROWS_AS(parse_domain("torus"), Error);
}

TEST_CASE("mobius examples") {
  CHECK(std::abs(mobius({0, 0}, 0, {0.3, -0.2}) - Complex(0.3, -0.2)) < 1e-15);
  CHECK(std::abs(mobius({0.5, 0}, 0, {0.5, 0})) < 1e-15);
  CHECK(std::abs(mobius({0.5, 0}, 0, {0, 0}) - Complex(-0.5, 0)) < 1e-15);
  CHECK_THROWS_AS(mobius({1.2, 0}, 0, {0, 0}), Error);
  // Finite-difference check of the derivative.
  const Complex a{0.3, 0.4}, z{-0.2, 0.1};
  const double h = 1e-6;
  const Complex fd = (mobius(a, 0.7, z + h) - mobius(a, 0.7, z - h)) / (2 * h);
  CHECK(std::abs(fd - mobius_deriv(a, 0.7, z)) < 1e-8);
}

TEST_CASE("iso examples") {
  CHECK(std::abs(iso(Iso::Phi1, {1, 0})) < 1e-15);
  CHECK(std::abs(iso(Iso::Phi2, {0, 0}) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(iso(Iso::Phi3, {1, 1}) - Complex(0, -2)) < 1e-15);
  CHECK(std::abs(iso(Iso::Phi4, {-1, 2}) - Complex(1, -2)) < 1e-15);
  CHECK_THROWS_AS(iso(Iso::Phi1, {-1, 0}), Error);
  for (Iso w : {Iso::Phi1, Iso::Phi2, Iso::Phi3, Iso::Phi4}) {
    const Complex z = w == Iso::Phi4 ? Complex(-0.7, 0.9) : Complex(0.6, 0.4);
    const double h = 1e-6;
    const Complex fd = (iso(w, z + h) - iso(w, z - h)) / (2 * h);
    CHECK(std::abs(fd - iso_deriv(w, z)) < 1e-8);
  }
}

TEST_CASE("hyp_derivative examples") {
  const Complex z{0.3, 0.1};
  CHECK(hyp_derivative(z, {1, 0}, HyperbolicDomain::UnitDisc, z, HyperbolicDomain::UnitDisc) ==
        Approx(1.0));
  const Complex u = std::polar(1.0, 1.0);
  const double incl = hyp_derivative(u, {1, 0}, HyperbolicDomain::RightHalfPlane, u,
                                     HyperbolicDomain::SlitPlaneNeg);
  CHECK(incl == Approx(oracle::kInclRhpSlit).epsilon(1e-14));
  CHECK(incl < 1.0);
  CHECK(hyp_derivative({1, 0}, {1, 0}, HyperbolicDomain::StripPi, {0, 0},
                       HyperbolicDomain::SlitPlaneNeg) == Approx(1.0));
}

TEST_CASE("expansion_U examples") {
  const double v = expansion_U({0, kPi});
  CHECK(v == Approx(oracle::kEtaAtPiI).epsilon(1e-14));
  // Same value from the densities: |e^{pi i}| = 1, rho_U(-1) = 1/2.
  CHECK(v == Approx(0.5 / density(HyperbolicDomain::SlitPlanePos, {0, kPi})).epsilon(1e-12));
  for (double r : {1.0, 10.0, 100.0, 1000.0}) CHECK(expansion_U({-r, 1e-3}) > 1.0);
  CHECK_THROWS_AS(expansion_U({1.0, 2 * kPi}), Error);
}

TEST_CASE("expansion_U near 1 forces Arg and Im to 0") {
  // Along zeta_n = n e^{i/n^2}: eta -> 1 and Arg, Im -> 0.
  double prev_arg = 1.0;
  for (int n = 2; n <= 64; n *= 2) {
    const Complex z = std::polar(static_cast<double>(n), 1.0 / (n * n));
    const double e = expansion_U(z);
    CHECK(e > 1.0);
    CHECK(std::arg(z) < prev_arg);
    prev_arg = std::arg(z);
    if (n == 64) {
      CHECK(e < 1.01);
      CHECK(std::abs(z.imag()) < 0.02);
    }
  }
}

TEST_CASE("expansion_slitneg examples") {
  CHECK(expansion_slitneg({2, 0}) == Approx(2.0));
  double prev = 0.0;
  for (double x : {2.0, 4.0, 8.0, 16.0}) {
    const double v = expansion_slitneg({x, 0});
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(expansion_slitneg({1, kPi}), Error);
}
