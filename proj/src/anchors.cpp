#include "anchors.hpp"

#include <cmath>
#include <numbers>

namespace expchaos::detail {

namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;
constexpr long double kTwoPiL = 2.0L * kPiL;

// Nearest point tau to g with Re exp(tau) == t.
LComplex nearest_height(LComplex g, long double t) {
  const long double logt = std::log(t);
  const long double x = g.real(), y = g.imag();
  const long double k = std::round(y / kTwoPiL);
  if (x <= logt) return {logt, kTwoPiL * k};
  const long double a = std::acos(t * std::exp(-x));
  long double best = kTwoPiL * k + a;
  for (long double kk = k - 1; kk <= k + 1; kk += 1)
    for (long double s : {a, -a}) {
      const long double cand = kTwoPiL * kk + s;
      if (std::abs(cand - y) < std::abs(best - y)) best = cand;
    }
  return {x, best};
}

bool orbit_of(Complex z, int m, double re_lo, double re_hi, std::vector<Complex>& orbit) {
  std::vector<LComplex> ld;
  if (!forward_ld(z, m, ld)) return false;
  const long double re = ld.back().real();
  if (!(re >= re_lo && re <= re_hi)) return false;
  orbit = narrow_all(ld);
  return true;
}

}  // namespace

bool for_each_anchor(const Disc& U, int m, double t, double re_lo, double re_hi, Rng& rng,
                     const AnchorVisitor& visit, int random_seeds) {
  const int j = m - 1;
  std::vector<Complex> seeds{U.center};
  for (int i = 0; i < 8; ++i) seeds.push_back(U.center + std::polar(0.5 * U.radius, i * kTwoPi / 8));
  for (int i = 0; i < random_seeds; ++i) seeds.push_back(rng.in_disc(U));

  std::vector<Complex> tried;
  auto fresh = [&](Complex z) {
    for (auto q : tried)
      if (std::abs(q - z) <= 1e-13 * std::max(1.0, std::abs(z))) return false;
    tried.push_back(z);
    return true;
  };
  auto offer = [&](Complex z) {
    std::vector<Complex> orbit;
    if (!U.contains(z) || !fresh(z)) return false;
    if (!orbit_of(z, m, re_lo, re_hi, orbit)) return false;
    return visit(orbit);
  };

  const long double tl = t;
  const StageTarget height = [tl](LComplex g) { return nearest_height(g, tl); };
  for (auto seed : seeds) {
    auto z = newton_stage(U, seed, j, height, 1e-15, 60);
    if (!z) continue;
    // Pin Im f^m to pi/2 mod 2pi so the f^{-2} branch lands next to z_m;
    // Re f^m is left free to drift.
    const StageEval e = eval_stage(*z, j);
    const LComplex F = lexp(e.g);
    const long double ystar =
        kPiL / 2 + kTwoPiL * std::round((F.imag() - kPiL / 2) / kTwoPiL);
    const StageTarget pinned = [ystar](LComplex g) {
      const LComplex b = std::log(LComplex(lexp(g).real(), ystar));
      return LComplex(b.real(), b.imag() + kTwoPiL * std::round((g.imag() - b.imag()) / kTwoPiL));
    };
    if (auto zp = newton_stage(U, *z, j, pinned, 1e-15, 60))
      if (offer(*zp)) return true;
    if (offer(*z)) return true;
  }
  for (auto seed : seeds)
    if (offer(seed)) return true;
  return false;
}

}  // namespace expchaos::detail
