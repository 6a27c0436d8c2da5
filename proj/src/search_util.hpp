#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "expchaos/types.hpp"
#include "expchaos/witness.hpp"
#include "json_util.hpp"

namespace expchaos::detail {

using LComplex = std::complex<long double>;

inline constexpr long double kRepresentableRe = 700.0L;

inline LComplex lexp(LComplex z) {
  const long double m = std::exp(z.real());
  return {m * std::cos(z.imag()), m * std::sin(z.imag())};
}

inline LComplex widen(Complex z) { return {z.real(), z.imag()}; }
inline Complex narrow(LComplex z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

// |exp(a) - b| / |b| in extended precision.
inline double rel_step(Complex a, Complex b) {
  const LComplex e = lexp(widen(a));
  return static_cast<double>(std::abs(e - widen(b)) / std::abs(widen(b)));
}

// z_0 .. z_n, stopping early (returns false) once some Re z_k leaves double range.
inline bool forward_ld(Complex z, int n, std::vector<LComplex>& out) {
  out.assign(1, widen(z));
  for (int k = 0; k < n; ++k) {
    const LComplex cur = out.back();
    if (!(cur.real() <= kRepresentableRe) || !std::isfinite(cur.imag())) return false;
    out.push_back(lexp(cur));
  }
  return std::isfinite(out.back().real()) && std::isfinite(out.back().imag());
}

inline std::vector<Complex> narrow_all(const std::vector<LComplex>& v) {
  std::vector<Complex> out;
  out.reserve(v.size());
  for (auto z : v) out.push_back(narrow(z));
  return out;
}

// G = f^j(z) and G' = prod_{i=1..j} f^i(z), with every f^i(z) kept at Re <= 700.
struct StageEval {
  LComplex g;
  LComplex dg{1.0L, 0.0L};
  bool ok = false;
};

inline StageEval eval_stage(Complex z, int j) {
  StageEval e;
  e.g = widen(z);
  for (int i = 0; i < j; ++i) {
    if (!(e.g.real() <= kRepresentableRe)) return e;
    e.g = lexp(e.g);
    e.dg *= e.g;
  }
  e.ok = std::isfinite(e.g.real()) && std::isfinite(e.g.imag()) && e.g.real() <= kRepresentableRe &&
         std::isfinite(e.dg.real()) && std::isfinite(e.dg.imag()) && e.dg != LComplex(0.0L, 0.0L);
  return e;
}

// mt19937_64 with an explicit 53-bit mapping so that draws are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  Complex in_disc(const Disc& d) {
    const double rr = d.radius * std::sqrt(uniform());
    const double ang = kTwoPi * uniform();
    return d.center + std::polar(rr, ang);
  }

 private:
  std::mt19937_64 gen_;
};

using StageTarget = std::function<LComplex(LComplex)>;

// Damped Newton on f^j(z) = tau(f^j(z)), confined to the open disc U. Returns
// the last iterate when the relative mismatch drops below `tol`, or stalls
// below 1e-6 (double resolution of z may be the limit there).
inline std::optional<Complex> newton_stage(const Disc& U, Complex seed, int j,
                                           const StageTarget& tau, double tol = 1e-15,
                                           int max_iter = 80) {
  Complex z = seed;
  StageEval e = eval_stage(z, j);
  if (!e.ok || !U.contains(z)) return std::nullopt;
  auto mismatch = [&](const StageEval& s) {
    const LComplex t = tau(s.g);
    return static_cast<double>(std::abs(s.g - t) / std::max(1.0L, std::abs(t)));
  };
  double err = mismatch(e);
  for (int it = 0; it < max_iter; ++it) {
    if (err <= tol) return z;
    const Complex step = narrow((e.g - tau(e.g)) / e.dg);
    double lam = 1.0;
    bool moved = false;
    for (int h = 0; h < 40; ++h, lam *= 0.5) {
      const Complex zn = z - lam * step;
      if (zn == z) break;
      if (!U.contains(zn)) continue;
      StageEval en = eval_stage(zn, j);
      if (!en.ok) continue;
      const double errn = mismatch(en);
      if (errn < err * (1.0 - 1e-4 * lam)) {
        z = zn;
        e = en;
        err = errn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (err <= 1e-6) return z;
  return std::nullopt;
}

inline double ulp_shift(double x, int k) {
  while (k > 0) { x = std::nextafter(x, INFINITY); --k; }
  while (k < 0) { x = std::nextafter(x, -INFINITY); ++k; }
  return x;
}

// Picks the double lattice point near z minimizing `score`.
template <class Score>
Complex polish_ulps(Complex z, int span, Score score) {
  Complex best = z;
  double best_s = score(z);
  for (int a = -span; a <= span; ++a)
    for (int b = -span; b <= span; ++b) {
      const Complex c(ulp_shift(z.real(), a), ulp_shift(z.imag(), b));
      const double s = score(c);
      if (s < best_s) { best_s = s; best = c; }
    }
  return best;
}

inline nlohmann::json disc_json(const Disc& d) {
  return {{"center", cjson(d.center)}, {"radius", d.radius}};
}
inline Disc disc_from(const nlohmann::json& j) {
  return {cfrom(j.at("center")), j.at("radius").get<double>()};
}

}  // namespace expchaos::detail
