#include <cmath>

#include "anchors.hpp"
#include "expchaos/dynamics.hpp"
#include "expchaos/inverse.hpp"
#include "expchaos/witness.hpp"
#include "json_util.hpp"
#include "search_util.hpp"

namespace expchaos {

using detail::cjson;
using detail::LComplex;

namespace {

bool forward_from(LComplex z, int n, std::vector<LComplex>& out) {
  out.assign(1, z);
  for (int k = 0; k < n; ++k) {
    if (!(out.back().real() <= detail::kRepresentableRe)) return false;
    out.push_back(detail::lexp(out.back()));
  }
  return std::isfinite(out.back().real()) && std::isfinite(out.back().imag());
}

LComplex join(Complex hi, Complex lo) { return detail::widen(hi) + detail::widen(lo); }

}  // namespace

CycleCheck check_cycle(Complex z, int n, Complex lo) {
  CycleCheck c;
  std::vector<LComplex> orbit;
  const LComplex p = join(z, lo);
  if (n < 1 || !forward_from(p, n, orbit)) {
    c.representable = false;
    c.residual = INFINITY;
    c.log_multiplier = INFINITY;
    return c;
  }
  c.residual = static_cast<double>(std::abs(orbit[n] - p));
  long double lm = 0.0L;
  for (int k = 0; k < n; ++k) lm += orbit[k].real();  // |exp'(z_k)| = e^{Re z_k}
  c.log_multiplier = static_cast<double>(lm);
  return c;
}

namespace {

constexpr int kContractionCap = 60;
constexpr double kStepTol = 1e-12;

double residual_score(Complex z, int n) { return check_cycle(z, n).residual; }

// Newton on f^n(z) - z in extended precision, split into hi + lo doubles.
// Stays put when the correction is not small.
std::pair<Complex, Complex> refine_cycle_point(Complex z, int n) {
  LComplex p = detail::widen(z);
  for (int it = 0; it < 6; ++it) {
    std::vector<LComplex> orbit;
    if (!forward_from(p, n, orbit)) break;
    LComplex d(1.0L, 0.0L);
    for (int k = 1; k <= n; ++k) d *= orbit[k];
    const LComplex step = (orbit[n] - p) / (d - 1.0L);
    if (!(std::abs(step) <= 1e-9L)) break;
    p -= step;
  }
  const Complex hi = detail::narrow(p);
  const Complex lo = detail::narrow(p - detail::widen(hi));
  if (check_cycle(hi, n, lo).residual <= check_cycle(z, n).residual) return {hi, lo};
  return {z, {}};
}

PeriodicPointResult finish(const Disc& U, Complex p, Complex lo, int period, int steps,
                           std::uint64_t seed, const char* method) {
  PeriodicPointResult out;
  out.point = p;
  out.point_lo = lo;
  out.period = period;
  const CycleCheck cc = check_cycle(p, period, lo);
  out.residual = cc.residual;
  out.multiplier_modulus = std::exp(cc.log_multiplier);
  out.contraction_steps = steps;
  std::vector<LComplex> orbit;
  forward_from(join(p, lo), period, orbit);
  out.cycle = detail::narrow_all(orbit);
  out.cycle.pop_back();

  auto& r = out.report;
  r.kind = WitnessKind::Periodic;
  r.seed = seed;
  r.inputs = {{"disc", detail::disc_json(U)}};
  nlohmann::json cyc = nlohmann::json::array();
  for (auto q : out.cycle) cyc.push_back(cjson(q));
  r.outputs = {{"point", cjson(p)},
               {"point_lo", cjson(lo)},
               {"period", period},
               {"multiplier_modulus", out.multiplier_modulus},
               {"log_multiplier", cc.log_multiplier},
               {"residual", out.residual},
               {"contraction_steps", steps},
               {"cycle", cyc}};
  r.diagnostics = {{"method", method}, {"residual_tolerance", kPeriodicResidual}};
  return out;
}

bool fixed_point_stage(const Disc& U, std::uint64_t seed, PeriodicPointResult& out) {
  std::vector<Complex> seeds{U.center};
  for (int i = 0; i < 8; ++i) seeds.push_back(U.center + std::polar(0.6 * U.radius, i * kTwoPi / 8));
  for (auto s : seeds) {
    LComplex p = detail::widen(s);
    bool finite = true;
    for (int it = 0; it < 60; ++it) {
      const LComplex e = detail::lexp(p);
      const LComplex step = (e - p) / (e - 1.0L);
      p -= step;
      if (!std::isfinite(p.real()) || !std::isfinite(p.imag()) || p.real() > 700.0L) {
        finite = false;
        break;
      }
      if (std::abs(step) <= 1e-18L * std::max(1.0L, std::abs(p))) break;
    }
    if (!finite) continue;
    const Complex q = detail::narrow(p);
    const Complex lo = detail::narrow(p - detail::widen(q));
    if (!U.contains(q)) continue;
    const CycleCheck cc = check_cycle(q, 1, lo);
    if (cc.residual <= kPeriodicResidual && cc.log_multiplier > 0.0) {
      out = finish(U, q, lo, 1, 0, seed, "newton-fixed-point");
      return true;
    }
  }
  return false;
}

}  // namespace

PeriodicPointResult find_periodic(const Disc& U, std::uint64_t seed) {
  if (!(U.radius > 0.0) || !std::isfinite(U.radius))
    throw Error(ErrorCode::InvalidArgument, "disc radius must be > 0");
  PeriodicPointResult out;
  if (fixed_point_stage(U, seed, out)) return out;

  // Work in a sub-disc whose closure omits 0.
  Disc W = U;
  if (std::abs(U.center) <= U.radius) {
    const double len = std::abs(U.center);
    const Complex dir = len > 0.0 ? U.center / len : Complex(1.0, 0.0);
    W = {U.center + 0.5 * U.radius * dir, 0.45 * U.radius};
  }
  const double rho_c = rho_for_target(W.center);
  detail::Rng rng(seed);
  bool found = false;
  int tried = 0;

  // Short cycles first; within a stage, the lowest anchor height keeps the
  // multiplier (and so the forward residual) small.
  for (int k = 1; k <= 8; ++k) {
    for (double offset : {0.25, 1.0, 3.0, 6.0, 10.0, 15.0}) {
      if (found) break;
      const double t = rho_c + offset;
      auto visit = [&](const std::vector<Complex>& orbit) {
        ++tried;
        try {
          const Complex z0 = orbit.front(), zk = orbit.back();
          const InverseF2Branch psi(z0, zk);
          const Complex zeta0 = psi(z0);
          const double R0 = std::abs(zeta0 - zk) * (1.0 + 1e-9) + 1e-12;
          // g = phi o psi moves z0 to c1; the invariant disc is centred there.
          const Complex c1 = build_pullback(orbit, k, R0).evaluate(zeta0);
          const double d = std::abs(c1 - z0);
          const double rad = 0.5 * std::min(U.boundary_distance(c1), std::abs(z0) / 2.0 - d);
          if (!(rad > 0.0)) return false;
          const double s = d + rad;  // D_rad(c1) sits inside D_s(z0)
          const double dpsi = psi.derivative_bound(s);
          const double R = (std::abs(zeta0 - zk) + s * dpsi) * (1.0 + 1e-9) + 1e-12;
          const PullbackChain chain = build_pullback(orbit, k, R);
          const double contraction = chain.deriv_bound * dpsi;
          // g is contraction-Lipschitz on D_s(z0), so g(D_rad(c1)) lies in D_{contraction*s}(c1).
          if (contraction > 0.5 || contraction * s > rad) return false;

          auto g = [&](Complex p) { return chain.evaluate(psi(p)); };
          Complex p = c1;
          int steps = 0;
          double step_len = INFINITY;
          while (steps < kContractionCap && step_len > kStepTol) {
            const Complex q = g(p);
            step_len = std::abs(q - p);
            p = q;
            ++steps;
          }
          if (step_len > kStepTol) return false;
          const int period = k + 2;
          Complex best = p;
          double best_res = residual_score(p, period);
          for (int extra = 0; extra < 8; ++extra) {
            p = g(p);
            const double res = residual_score(p, period);
            if (res < best_res) { best_res = res; best = p; }
          }
          const auto [hi, lo] = refine_cycle_point(best, period);
          if (!U.contains(hi)) return false;
          const CycleCheck cc = check_cycle(hi, period, lo);
          if (!cc.representable || cc.residual > kPeriodicResidual) return false;
          if (std::exp(cc.log_multiplier) < 2.0) return false;

          out = finish(U, hi, lo, period, steps, seed, "pullback-contraction");
          out.report.chain = chain.to_json();
          out.report.diagnostics["anchor_stage"] = k;
          out.report.diagnostics["anchor"] = cjson(zk);
          out.report.diagnostics["contraction_bound"] = contraction;
          out.report.diagnostics["invariant_disc"] = {{"center", cjson(c1)}, {"radius", rad}};
          out.report.diagnostics["candidates_tried"] = tried;
          out.report.diagnostics["branch_turns"] = psi.n0();
          out.report.diagnostics["strip_index"] = psi.m();
          found = true;
          return true;
        } catch (const Error&) {
          return false;
        }
      };
      detail::for_each_anchor(W, k, t, rho_c - 1.0, t + 6.0, rng, visit);
    }
    if (found) return out;
  }
  throw Error(ErrorCode::NotFound, "find_periodic: no contracting pullback found in the disc");
}

}  // namespace expchaos
