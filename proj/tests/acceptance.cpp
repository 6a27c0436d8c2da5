// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "expchaos/dynamics.hpp"
#include "expchaos/hyperbolic.hpp"
#include "expchaos/inverse.hpp"
#include "expchaos/render.hpp"
#include "expchaos/witness.hpp"
#include "oracles.hpp"
#include "search_util.hpp"

using namespace expchaos;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Collects each distinct failure reason once.
  void require(bool ok, const std::string& why) {
    if (ok) return;
    if (detail.find(why) == std::string::npos) detail += (pass ? "" : "; ") + why;
    pass = false;
  }
};

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Halton points in the unit square.
double halton(int i, int base) {
  double f = 1.0, r = 0.0;
  for (int n = i; n > 0; n /= base) {
    f /= base;
    r += f * (n % base);
  }
  return r;
}

// 100 points of the source domain of each isomorphism.
std::vector<Complex> samples(HyperbolicDomain d, int count = 100) {
  std::vector<Complex> out;
  for (int i = 1; out.size() < static_cast<std::size_t>(count); ++i) {
    const double u = halton(i, 2), v = halton(i, 3);
    Complex z;
    switch (d) {
      case HyperbolicDomain::UnitDisc: z = std::polar(0.98 * std::sqrt(u), kTwoPi * v); break;
      case HyperbolicDomain::RightHalfPlane: z = {0.02 + 6.0 * u, -6.0 + 12.0 * v}; break;
      case HyperbolicDomain::StripPi: z = {-4.0 + 8.0 * u, (-0.98 + 1.96 * v) * kPi}; break;
      case HyperbolicDomain::SlitPlanePos:
        z = std::polar(0.05 + 6.0 * u, (0.01 + 1.98 * v) * kPi);
        break;
      case HyperbolicDomain::SlitPlaneNeg:
        z = std::polar(0.05 + 6.0 * u, (-0.99 + 1.98 * v) * kPi);
        break;
    }
    if (in_domain(d, z)) out.push_back(z);
  }
  return out;
}

Outcome density_formulas() {
  Outcome o;
  for (Iso w : {Iso::Phi1, Iso::Phi2, Iso::Phi3, Iso::Phi4})
    for (Complex z : samples(iso_source(w))) {
      const double lhs = density(iso_source(w), z);
      const double rhs = density(iso_target(w), iso(w, z)) * std::abs(iso_deriv(w, z));
      o.require(rel_err(lhs, rhs) <= 1e-9, "density mismatch");
    }
  o.detail = o.pass ? "4 isomorphisms x 100 points" : o.detail;
  return o;
}

struct MapCase {
  const char* name;
  HyperbolicDomain src, dst;
  bool isometry;
  std::function<Complex(Complex)> f, df;
};

Outcome schwarz_pick() {
  const Complex a{0.3, -0.4};
  const std::vector<MapCase> catalog = {
      {"mobius", HyperbolicDomain::UnitDisc, HyperbolicDomain::UnitDisc, true,
       [=](Complex z) { return mobius(a, 0.7, z); }, [=](Complex z) { return mobius_deriv(a, 0.7, z); }},
      {"z^2 on D", HyperbolicDomain::UnitDisc, HyperbolicDomain::UnitDisc, false,
       [](Complex z) { return z * z; }, [](Complex z) { return 2.0 * z; }},
      {"exp strip->slit", HyperbolicDomain::StripPi, HyperbolicDomain::SlitPlaneNeg, true,
       [](Complex z) { return std::exp(z); }, [](Complex z) { return std::exp(z); }},
      {"log slit->strip", HyperbolicDomain::SlitPlaneNeg, HyperbolicDomain::StripPi, true,
       [](Complex z) { return std::log(z); }, [](Complex z) { return 1.0 / z; }},
      {"branch log U->U", HyperbolicDomain::SlitPlanePos, HyperbolicDomain::SlitPlanePos, false,
       [](Complex z) { return windowed_log(z, {kPi}); }, [](Complex z) { return 1.0 / z; }},
      {"z/2 on D", HyperbolicDomain::UnitDisc, HyperbolicDomain::UnitDisc, false,
       [](Complex z) { return z / 2.0; }, [](Complex) { return Complex(0.5, 0); }},
      {"disc in strip", HyperbolicDomain::UnitDisc, HyperbolicDomain::StripPi, false,
       [](Complex z) { return z; }, [](Complex) { return Complex(1, 0); }},
      {"half plane in slit", HyperbolicDomain::RightHalfPlane, HyperbolicDomain::SlitPlaneNeg,
       false, [](Complex z) { return z; }, [](Complex) { return Complex(1, 0); }},
  };
  Outcome o;
  for (const auto& m : catalog) {
    for (Complex z : samples(m.src)) {
      const Complex fz = m.f(z);
      const double h = hyp_derivative(fz, m.df(z), m.src, z, m.dst);
      o.require(h <= 1.0 + 1e-9, std::string(m.name) + " expands");
      if (m.isometry) o.require(std::abs(h - 1.0) <= 1e-9, std::string(m.name) + " not isometric");
    }
  }
  if (o.pass) o.detail = std::to_string(catalog.size()) + " maps x 100 points";
  return o;
}

Outcome expansion() {
  Outcome o;
  int n = 0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 10; ++j) {
      const double r = 0.2 + 1.5 * i;
      const double th = (0.05 + 0.19 * j) * kPi;  // (0, 2pi), off the slit
      const Complex z = std::polar(r, th);
      if (std::abs(std::remainder(z.imag(), kTwoPi)) < 1e-6) continue;
      ++n;
      const double e = expansion_U(z);
      o.require(e > 1.0, "eta <= 1");
      o.require(e >= 1.0 / std::abs(std::cos(th / 2)) - 1e-9, "eta below 1/|cos(theta/2)|");
      const Complex fz = std::exp(z);
      const double pick = hyp_derivative(fz, fz, HyperbolicDomain::SlitPlanePos, z,
                                         HyperbolicDomain::SlitPlanePos);
      o.require(rel_err(e, pick) <= 1e-9, "closed form differs from the density quotient");
    }
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const Complex z{2.0 + 3.0 * i, -9.0 + 1.9 * j};
      o.require(expansion_slitneg(z) >= std::sqrt(2.0) - 1e-9, "slit-plane expansion below sqrt 2");
    }
  double prev = 0.0;
  for (double x : {2.0, 4.0, 8.0, 16.0}) {
    const double v = expansion_slitneg({x, 0});
    o.require(v > prev, "not increasing along the reals");
    prev = v;
  }
  if (o.pass) o.detail = std::to_string(n) + " U points, 100 slit points, 4 real points";
  return o;
}

Outcome real_growth() {
  // x_n > 2^{n-2} iff log x_n = x_{n-1} > (n-2) log 2. The shadow's log_mod
  // holds log x_n exactly, including the overflowing step; past it the real
  // orbit only grows, so x_n >= x_overflow > e^709.
  Outcome o;
  for (double x0 : {0.0, 0.5, 1.0}) {
    const OrbitRecord r = iterate({x0, 0}, 5);
    for (int n = 2; n <= 5; ++n) {
      const int k = std::min<int>(n, static_cast<int>(r.length()) - 1);
      o.require(k == n || r.overflow_step == k, "orbit stopped early");
      o.require(r.shadows[k].arg == 0.0, "left the real axis");
      o.require(r.shadows[k].log_mod > (n - 2) * std::numbers::ln2, "x_n <= 2^(n-2)");
      if (k == n && std::isfinite(r.points[n].real()))
        o.require(r.points[n].real() > std::ldexp(1.0, n - 2), "x_n <= 2^(n-2)");
    }
  }
  if (o.pass) o.detail = "x0 in {0, 0.5, 1}, n = 2..5";
  return o;
}

Outcome pullback_contraction() {
  Outcome o;
  detail::Rng rng(kDefaultSeed);
  int chains = 0;
  for (int tries = 0; tries < 4000 && chains < 30; ++tries) {
    const int n = 1 + tries % 3;
    const Complex z0{rng.uniform(2.0, 3.2), rng.uniform(-0.6, 0.6)};
    std::vector<Complex> orbit{z0};
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      if (orbit.back().real() > 700) ok = false;
      else orbit.push_back(exp_map(orbit.back()));
      ok = ok && std::abs(orbit.back()) >= kTwoPi + 2;
    }
    if (!ok) continue;
    ++chains;
    const PullbackChain c = build_pullback(orbit, n);
    o.require(c.deriv_bound <= std::ldexp(1.0, -n), "deriv_bound above 2^-n");
    for (int i = 0; i < 20; ++i) {
      const Complex a = orbit[n] + std::polar(c.disc_radius * 0.99 * rng.uniform(), kTwoPi * rng.uniform());
      const Complex b = orbit[n] + std::polar(c.disc_radius * 0.99 * rng.uniform(), kTwoPi * rng.uniform());
      const double q = std::abs(c.evaluate(a) - c.evaluate(b)) / std::abs(a - b);
      o.require(q <= c.deriv_bound * (1 + 1e-6), "difference quotient above deriv_bound");
    }
  }
  o.require(chains == 30, "not enough admissible chains");
  if (o.pass) o.detail = "30 chains, n = 1..3, 20 quotients each";
  return o;
}

Outcome inverse_f2() {
  Outcome o;
  detail::Rng rng(kDefaultSeed);
  for (int i = 0; i < 10; ++i) {
    const double mod = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    const Complex v = std::polar(mod, rng.uniform(-kPi, kPi));
    const Complex center{rho_for_target(v) + rng.uniform(0.0, 30.0), rng.uniform(-20.0, 20.0)};
    const InverseF2Branch psi(v, center);
    const auto t = psi.trace(v);
    o.require(std::abs(t.value - center) < kTwoPi, "psi(v) outside the disc");
    const Complex mid = exp_map(t.value);
    const double s1 = std::abs(mid - t.first.to_complex()) / t.first.abs();
    const double s2 = std::abs(t.first.exp() - v) / std::abs(v);
    o.require(s1 <= 1e-9 && s2 <= 1e-9, "f^2(psi(v)) != v stepwise");
    for (int j = 0; j < 20; ++j) {
      const Complex z = v + std::polar(psi.delta_radius() * 0.999 * std::sqrt(rng.uniform()),
                                       kTwoPi * rng.uniform());
      o.require(psi.derivative_abs(z) <= 1.0, "|psi'| > 1");
    }
  }
  if (o.pass) o.detail = "10 targets, 20 derivative samples each";
  return o;
}

using LC = std::complex<long double>;

// Newton on f^n(z) - z in long double, seeded at z.
LC newton_cycle(LC z, int n) {
  for (int it = 0; it < 50; ++it) {
    LC w = z, d = 1.0L;
    for (int k = 0; k < n; ++k) {
      w = std::exp(w);
      d *= w;
    }
    LC step = (w - z) / (d - 1.0L);
    long double damp = 1.0L;
    while (std::abs(step) * damp > 0.1L) damp /= 2;
    z -= damp * step;
    if (std::abs(step) < 1e-19L) break;
  }
  return z;
}

std::vector<double> g_multipliers;  // every periodic multiplier seen, for criterion 10

std::vector<Disc> random_discs(int count) {
  detail::Rng g(kDefaultSeed);
  std::vector<Disc> out;
  for (int i = 0; i < count; ++i) {
    const double x = g.uniform(-5, 5), y = g.uniform(-5, 5), r = g.uniform(0.1, 0.5);
    out.push_back({{x, y}, r});
  }
  return out;
}

Outcome periodic_points() {
  Outcome o;
  int found = 0, not_found = 0;
  std::string missed;
  int idx = -1;
  for (const Disc& U : random_discs(20)) {
    ++idx;
    try {
      const PeriodicPointResult p = find_periodic(U);
      if (p.multiplier_modulus < 2.0) o.require(false, "disc #" + std::to_string(idx) + " multiplier " + std::to_string(p.multiplier_modulus) + " < 2");
      ++found;
      g_multipliers.push_back(p.multiplier_modulus);
      o.require(U.contains(p.point), "point outside its disc");
      o.require(p.residual <= 1e-9, "residual above 1e-9");
      o.require(verify_report(p.report.to_json()).ok, "report does not verify");
      const LC seed = LC(p.point.real(), p.point.imag()) + LC(p.point_lo.real(), p.point_lo.imag());
      const LC q = newton_cycle(seed, p.period);
      o.require(std::abs(q - seed) <= 1e-8L, "Newton oracle disagrees");
    } catch (const Error& e) {
      o.require(e.code() == ErrorCode::NotFound, "failure other than NotFound");
      ++not_found;
      char buf[64];
      std::snprintf(buf, sizeof buf, " #%d", idx);
      missed += buf;
    }
  }
  const PeriodicPointResult fp = find_periodic({{0.3, 1.3}, 0.5});
  g_multipliers.push_back(fp.multiplier_modulus);
  o.require(std::abs(fp.point.real() - 0.318) < 5e-4 && std::abs(fp.point.imag() - 1.337) < 5e-4,
            "fixed point not recovered");
  o.require(found >= 18, std::to_string(found) + "/20 discs succeeded (NotFound at" + missed + ")");
  if (o.pass) o.detail = std::to_string(found) + "/20 discs, fixed point recovered";
  return o;
}

Outcome sensitivity() {
  Outcome o;
  int ok = 0, idx = -1;
  std::string missed;
  for (const Disc& U : random_discs(10)) {
    ++idx;
    try {
      const SensitivityWitness s = sensitivity_witness(U);
      const bool good = s.fz_abs <= 1.0 && s.separation_lower >= 1.0 && U.contains(s.z) &&
                        U.contains(s.w) && verify_report(s.report.to_json()).ok;
      o.require(good, "witness fails its bounds or verification");
      ok += good;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotFound) o.require(false, e.what());
      missed += " #" + std::to_string(idx);
    }
  }
  o.require(ok == 10, std::to_string(ok) + "/10 discs (NotFound at" + missed + ")");
  if (o.pass) o.detail = std::to_string(ok) + "/10 discs";
  return o;
}

Outcome transitivity() {
  Outcome o;
  // Same discs as above; the targets continue the generator's stream.
  detail::Rng g(kDefaultSeed);
  for (int i = 0; i < 30; ++i) g.uniform();
  const std::vector<Disc> discs = random_discs(10);
  int ok = 0;
  std::string missed;
  for (int i = 0; i < 10; ++i) {
    const double mod = std::exp(g.uniform(std::log(0.1), std::log(10.0)));
    const Complex v = std::polar(mod, g.uniform(-kPi, kPi));
    try {
      const TransitivityWitness w = transitivity_witness(discs[i], v);
      const bool good = w.residual <= 1e-8 && discs[i].contains(w.z) && verify_report(w.report.to_json()).ok;
      o.require(good, "witness does not verify");
      ok += good;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotFound) o.require(false, e.what());
      missed += " #" + std::to_string(i);
    }
  }
  o.require(ok == 10, std::to_string(ok) + "/10 pairs (NotFound at" + missed + ")");
  int prev = -1;
  std::string times;
  for (int i = 0; i < 3; ++i) {
    try {
      const TransitivityWitness w = transitivity_witness({{1, 0}, 0.1}, {-2, 0}, prev + 1);
      o.require(w.n > prev && verify_report(w.report.to_json()).ok, "hit times not increasing");
      prev = w.n;
      times += " " + std::to_string(w.n);
    } catch (const Error& e) {
      o.require(false, std::string("negative-axis search failed: ") + e.what());
      break;
    }
  }
  if (o.pass) o.detail = std::to_string(ok) + "/10 pairs; hit times for v = -2:" + times;
  return o;
}

Outcome all_repelling() {
  Outcome o;
  // Periodic orbits the classifier detects on a grid, plus everything found above.
  const GridSpec g{-1, 2, -3, 3, 60, 120};
  int detected = 0;
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) {
      const OrbitRecord r = iterate(g.pixel_center(x, y), 200);
      if (r.classification.kind != OrbitClass::PeriodicDetected) continue;
      ++detected;
      const int n = static_cast<int>(r.length()) - 1;
      const int p = r.classification.period;
      const Multiplier m = multiplier_along(std::span(r.points).subspan(n - p, p + 1));
      g_multipliers.push_back(std::exp(m.log_modulus));
    }
  for (const Complex z : {Complex(oracle::kFixedRe, oracle::kFixedIm), Complex(oracle::kFixedRe, -oracle::kFixedIm)}) {
    const OrbitRecord r = iterate(z, 10);
    if (r.classification.kind == OrbitClass::PeriodicDetected) {
      ++detected;
      g_multipliers.push_back(std::exp(multiplier_along(std::span(r.points).subspan(0, 2)).log_modulus));
    }
  }
  for (double m : g_multipliers) o.require(m > 1.0, "a periodic point with |multiplier| <= 1");
  o.require(!g_multipliers.empty(), "no periodic points seen");
  if (o.pass) o.detail = std::to_string(g_multipliers.size()) + " multipliers (" + std::to_string(detected) + " detected by the classifier)";
  return o;
}

Outcome rendering() {
  Outcome o;
  const GridSpec g;
  RenderParams seq, par;
  par.threads = 8;
  const std::string a = render_escape_map(g, seq).to_ppm(), b = render_escape_map(g, par).to_ppm();
  o.require(a == b, "escape map depends on thread count");
  o.require(fnv1a_hex(a) == oracle::kGoldenEscapeGray, "escape map differs from golden");
  const GridSpec s{-1, 1, -3.5, 3.5, 64, 64};
  const std::string c = render_density_map(HyperbolicDomain::StripPi, s, 1).to_ppm();
  const std::string d = render_density_map(HyperbolicDomain::StripPi, s, 8).to_ppm();
  o.require(c == d, "density map depends on thread count");
  o.require(fnv1a_hex(c) == oracle::kGoldenDensityStrip, "density map differs from golden");
  if (o.pass) o.detail = "escape " + fnv1a_hex(a) + ", density " + fnv1a_hex(c);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"density formulas", density_formulas},
      {"Schwarz-Pick", schwarz_pick},
      {"expansion", expansion},
      {"real-orbit growth", real_growth},
      {"pullback contraction", pullback_contraction},
      {"inverse branch of f^2", inverse_f2},
      {"periodic points", periodic_points},
      {"sensitivity", sensitivity},
      {"transitivity", transitivity},
      {"periodic points repel", all_repelling},
      {"rendering determinism", rendering},
  };
  int failed = 0, idx = 0;
  for (const auto& [name, fn] : criteria) {
    ++idx;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %-24s %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", idx, name,
                out.detail.c_str(), secs);
    failed += !out.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
