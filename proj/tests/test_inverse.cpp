#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "expchaos/dynamics.hpp"
#include "expchaos/inverse.hpp"
#include "oracles.hpp"

using namespace expchaos;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Complex> orbit_of(Complex z, int n) {
  std::vector<Complex> o{z};
  for (int k = 0; k < n; ++k) o.push_back(exp_map(o.back()));
  return o;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Parse;  // sentinel
}

}  // namespace

TEST_CASE("pullback from a real orbit") {
  const auto o = orbit_of({3, 0}, 2);
  CHECK(o[2].real() == Approx(oracle::kEEE3).epsilon(1e-12));
  const PullbackChain c = build_pullback(o, 2);
  CHECK(std::abs(c.evaluate(o[2]) - Complex(3, 0)) < 1e-12);
  const double bound = 1.0 / (o[1].real() - 2 * kPi) / (o[2].real() - 2 * kPi);
  CHECK(c.deriv_bound <= bound * (1 + 1e-12));
  CHECK(c.deriv_bound == Approx(1.4e-10).epsilon(0.05));
  for (int i = 0; i < 5; ++i) {
    const Complex w = o[2] + std::polar(3.0, 1.1 * i);
    // |phi'| ~ 1e-10 here, so the step must be large for the quotient to
    // rise above the ulps of phi ~ 3; the chain is nearly linear at this scale.
    const Complex h = std::polar(2.0, 0.4 * i);
    const Complex fd = (c.evaluate(w + h) - c.evaluate(w - h)) / (2.0 * h);
    CHECK(std::abs(fd - c.derivative(w)) <= 1e-5 * std::abs(fd));
    CHECK(std::abs(c.derivative(w)) <= c.deriv_bound);
  }
}

TEST_CASE("single-step chain past the double range") {
  const std::vector<Complex> o{{50, 0}, exp_map({50, 0})};
  const PullbackChain c = build_pullback(o, 1);
  CHECK(c.evaluate(o[1]).real() == Approx(50.0));
  // Same chain entered in log-polar form.
  // e^50 * 1e-22 ~ 0.5, inside the 2 pi disc.
  const Complex l = c.evaluate(LogPolarPoint{50.0, 1e-22});
  CHECK(l.real() == Approx(50.0));
  CHECK(l.imag() == Approx(1e-22));
  CHECK_THROWS_AS((LogPolarPoint{800.0, 0.25}.to_complex()), Error);
}

TEST_CASE("chain specs reproduce the orbit") {
  const auto o = orbit_of({1.2, 0.9}, 2);
  const PullbackChain c = build_pullback(o, 2, 1.0);
  for (int k = 1; k <= 2; ++k) {
    const Complex l = windowed_log(o[k], c.branch_specs[k - 1]);
    CHECK(std::abs(l - o[k - 1]) <= 1e-12 * std::max(1.0, std::abs(o[k - 1])));
  }
  const auto tr = c.trace(o[2]);
  CHECK(stepwise_residual(tr) < 1e-15);
}

TEST_CASE("deriv_bound halves per level when |z_k| >= 2pi + 2") {
  // z_1 = 4 + 7.48i, so |z_1|, |z_2|, |z_3| are 8.48, 54.6 and 4.6e8.
  const auto o = orbit_of({2.1379884963670923, 1.0797294309549066}, 3);
  for (int k = 1; k <= 3; ++k) REQUIRE(std::abs(o[k]) >= 2 * kPi + 2);
  const PullbackChain c = build_pullback(o, 3);
  CHECK(c.deriv_bound <= 0.125);
}

TEST_CASE("chain JSON round trip") {
  const auto o = orbit_of({1.0, 1.0}, 2);
  const PullbackChain c = build_pullback(o, 2, 1.0);
  const PullbackChain d = PullbackChain::from_json(c.to_json());
  CHECK(d.deriv_bound == c.deriv_bound);
  CHECK(d.radii == c.radii);
  const Complex w = o[2] + Complex(0.3, -0.2);
  CHECK(d.evaluate(w) == c.evaluate(w));
  CHECK(code_of([] { PullbackChain::from_json(nlohmann::json::object()); }) == ErrorCode::Parse);
}

TEST_CASE("build_pullback errors") {
  auto o = orbit_of({1.0, 1.0}, 2);
  CHECK(code_of([&] { build_pullback(o, 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { build_pullback(o, 3); }) == ErrorCode::InvalidArgument);
  auto bad = o;
  bad[2] += Complex(0.1, 0);
  CHECK(code_of([&] { build_pullback(bad, 2); }) == ErrorCode::OrbitMismatch);
  // A disc about z_1 = e^{-3} (tiny) cannot avoid the origin.
  const auto small = orbit_of({-3.0, 0.0}, 1);
  CHECK(code_of([&] { build_pullback(small, 1, 1.0); }) == ErrorCode::DiscTouchesOrigin);
  const PullbackChain c = build_pullback(o, 2, 0.5);
  CHECK(code_of([&] { c.evaluate(o[2] + Complex(0.6, 0)); }) == ErrorCode::OutsideDomain);
}

TEST_CASE("annulus_of_square") {
  AnnulusSpec a = annulus_of_square(0.0);
  CHECK(a.r_minus == Approx(1.0));
  CHECK(a.r_plus == Approx(oracle::kE2Pi).epsilon(1e-14));
  a = annulus_of_square(-2 * kPi);
  CHECK(a.r_minus == Approx(oracle::kEMinus2Pi).epsilon(1e-14));
  CHECK(a.r_plus == Approx(1.0));
  for (double x : {-10.0, 0.5, 40.0}) {
    a = annulus_of_square(x);
    CHECK(a.r_plus / a.r_minus == Approx(oracle::kE2Pi).epsilon(1e-13));
  }
  CHECK(code_of([] { annulus_of_square(695.0); }) == ErrorCode::Overflow);
}

TEST_CASE("rho_for_compact and rho_for_target") {
  const std::vector<Complex> k1{{-1, 0}}, k2{{std::exp(2.0), 0}, {std::exp(-2.0), 0}}, k3{{1, 0}};
  CHECK(rho_for_compact(k1) == Approx(oracle::kThreePi).epsilon(1e-15));
  CHECK(rho_for_compact(k2) == Approx(oracle::kThreePi + 2).epsilon(1e-15));
  CHECK(rho_for_compact(k3) == Approx(oracle::kThreePi).epsilon(1e-15));
  CHECK(code_of([] { rho_for_compact(std::vector<Complex>{}); }) == ErrorCode::EmptyK);
  CHECK(code_of([] { rho_for_compact(std::vector<Complex>{{0, 0}}); }) == ErrorCode::ZeroInK);
  CHECK(rho_for_target({3, 0}) == Approx(oracle::kLog3Plus3).epsilon(1e-15));
  CHECK(code_of([] { rho_for_target({0, 0}); }) == ErrorCode::TargetZero);
}

TEST_CASE("inverse_f2_branch for v = 3") {
  const InverseF2Branch psi = inverse_f2_branch({3, 0}, {50, 0});
  CHECK(psi.rho() == Approx(oracle::kLog3Plus3));
  CHECK(psi.delta_radius() == Approx(1.5));
  const auto t = psi.trace({3, 0});
  CHECK(std::abs(t.value - Complex(50, 0)) < 2 * kPi);
  // f(psi) == L_{n0}(3) and f(L_{n0}(3)) == 3, stepwise.
  const Complex w = exp_map(t.value);
  CHECK(std::abs(w - t.first.to_complex()) <= 1e-9 * std::abs(w));
  const Complex back = t.first.exp();
  CHECK(std::abs(back - Complex(3, 0)) <= 1e-9 * 3);
  CHECK(code_of([] { inverse_f2_branch({3, 0}, {4, 0}); }) == ErrorCode::CenterTooFarLeft);
  CHECK(code_of([&] { psi({5, 0}); }) == ErrorCode::OutsideDomain);
}

TEST_CASE("inverse_f2_branch covers random targets") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mod(std::log(0.1), std::log(10.0)), ang(-kPi, kPi);
  for (int i = 0; i < 10; ++i) {
    const Complex v = std::polar(std::exp(mod(gen)), ang(gen));
    for (double extra : {1.0, 100.0}) {
      const double rho = rho_for_target(v);
      const Complex c{rho + extra, 0.7};
      const InverseF2Branch psi(v, c);
      const auto t = psi.trace(v);
      CHECK(std::abs(t.value - c) < 2 * kPi);
      CHECK(std::abs(exp_map(t.value) - t.first.to_complex()) <= 1e-9 * t.first.abs());
      CHECK(std::abs(t.first.exp() - v) <= 1e-9 * std::abs(v));
      // |psi'| <= 1 on samples from Delta, and the bound dominates.
      for (int j = 0; j < 20; ++j) {
        const Complex z = v + std::polar(0.49 * std::abs(v), 0.31 * j);
        const double d = psi.derivative_abs(z);
        CHECK(d <= 1.0);
        CHECK(d <= psi.derivative_bound(psi.delta_radius()) * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("pullback image diameter shrinks with deriv_bound") {
  const auto o = orbit_of({2.1379884963670923, 1.0797294309549066}, 3);
  const PullbackChain c = build_pullback(o, 3);
  std::vector<Complex> img;
  for (int i = 0; i < 16; ++i) img.push_back(c.evaluate(o[3] + std::polar(c.disc_radius * (1 - 1e-9), i * kPi / 8)));
  double diam = 0.0;
  for (auto a : img)
    for (auto b : img) diam = std::max(diam, std::abs(a - b));
  // The bound is nearly attained here; allow the images their rounding.
  CHECK(diam <= 4 * kPi * c.deriv_bound + 32 * std::numeric_limits<double>::epsilon() * std::abs(o[0]));
}
