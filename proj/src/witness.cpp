#include "expchaos/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "anchors.hpp"
#include "expchaos/inverse.hpp"
#include "json_util.hpp"
#include "search_util.hpp"

namespace expchaos {

using detail::cjson;
using detail::LComplex;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kStageMax = 12;
constexpr int kScanSamples = 96;
constexpr int kCrossingsPerStage = 4000;
constexpr int kLevelsPerPair = 16;

const char* const kSearchNote =
    "explicit search; correctness rests on the per-witness verification recorded here";

void check_disc(const Disc& U) {
  if (!(U.radius > 0.0) || !std::isfinite(U.radius) || !std::isfinite(U.center.real()) ||
      !std::isfinite(U.center.imag()))
    throw Error(ErrorCode::InvalidArgument, "disc needs a finite center and radius > 0");
}

// How far f^m(z) is from landing at height t, in units of the tolerances.
double landing_score(Complex z, int m, double t) {
  std::vector<LComplex> orbit;
  if (!detail::forward_ld(z, m, orbit)) return INFINITY;
  const LComplex F = orbit.back();
  const double re = static_cast<double>(F.real()), im = static_cast<double>(F.imag());
  return std::max(std::abs(im) / (kAxisTolerance * std::max(1.0, re)),
                  std::abs(re - t) / kHeightTolerance);
}

EscapingPoint make_escaping(const Disc& U, double t_star, int m_max, Complex z, int stage,
                            const char* method, int attempts) {
  std::vector<LComplex> orbit;
  detail::forward_ld(z, stage, orbit);
  const Complex F = detail::narrow(orbit.back());
  EscapingPoint out;
  out.point = z;
  out.stage = stage;
  out.height = F.real();
  auto& r = out.report;
  r.kind = WitnessKind::Escaping;
  r.inputs = {{"disc", detail::disc_json(U)}, {"t_star", t_star}, {"m_max", m_max}};
  r.outputs = {{"point", cjson(z)}, {"stage", stage}, {"height", F.real()}, {"landing", cjson(F)}};
  r.diagnostics = {{"method", method},
                   {"attempts", attempts},
                   {"axis_tolerance", kAxisTolerance},
                   {"note", kSearchNote},
                   {"certificate", "landing on [0, inf) is tolerance-qualified"}};
  return out;
}

}  // namespace

const char* witness_kind_name(WitnessKind k) noexcept {
  switch (k) {
    case WitnessKind::Escaping: return "escaping";
    case WitnessKind::Transitivity: return "transitivity";
    case WitnessKind::Sensitivity: return "sensitivity";
    case WitnessKind::Periodic: return "periodic";
  }
  return "unknown";
}

WitnessKind parse_witness_kind(const std::string& s) {
  for (auto k : {WitnessKind::Escaping, WitnessKind::Transitivity, WitnessKind::Sensitivity,
                 WitnessKind::Periodic})
    if (s == witness_kind_name(k)) return k;
  throw Error(ErrorCode::Parse, "unknown witness kind '" + s + "'");
}

nlohmann::json WitnessReport::to_json() const {
  nlohmann::json j{{"schema", 1},
                   {"kind", witness_kind_name(kind)},
                   {"seed", seed},
                   {"inputs", inputs},
                   {"outputs", outputs},
                   {"diagnostics", diagnostics}};
  if (chain) j["chain"] = *chain;
  return j;
}

WitnessReport WitnessReport::from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<int>() != 1) throw Error(ErrorCode::Parse, "unsupported report schema");
    WitnessReport r;
    r.kind = parse_witness_kind(j.at("kind").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.inputs = j.at("inputs");
    r.outputs = j.at("outputs");
    r.diagnostics = j.value("diagnostics", nlohmann::json::object());
    if (j.contains("chain")) r.chain = j.at("chain");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("witness report: ") + e.what());
  }
}

EscapingPoint find_escaping_point(const Disc& U, double t_star, int m_max) {
  check_disc(U);
  if (!(t_star >= kTwoPi + 2.0 && t_star <= 700.0))
    throw Error(ErrorCode::InvalidArgument, "t_star must lie in [2pi + 2, 700]");
  if (m_max < 1) throw Error(ErrorCode::InvalidArgument, "m_max must be >= 1");

  const Complex c = U.center;
  const double r = U.radius;
  if (std::abs(c.imag()) < r) {
    const double half = std::sqrt(r * r - c.imag() * c.imag());
    if (c.real() + half > 0.0) {
      double x = t_star;
      for (int j = 0; j <= m_max && x > 0.0; ++j, x = std::log(x))
        if (U.contains({x, 0.0})) return make_escaping(U, t_star, m_max, {x, 0.0}, j, "axis-log", j + 1);
      // Already on [0, inf): escaping at its own height.
      const Complex z{std::max(c.real(), 0.0), 0.0};
      return make_escaping(U, t_star, m_max, z, 0, "axis", m_max + 1);
    }
  }

  const long double logt = std::log(static_cast<long double>(t_star));
  int attempts = 0;
  for (int m = 1; m <= m_max; ++m) {
    const int j = m - 1;
    int crossings = 0;
    for (int d = 0; d < 8 && crossings < kCrossingsPerStage; ++d) {
      const Complex dir = std::polar(r * (1.0 - 1e-9), d * kPi / 8.0);
      auto at = [&](double s) { return c + s * dir; };
      double prev_s = -1.0;
      detail::StageEval prev = detail::eval_stage(at(prev_s), j);
      for (int i = 1; i <= kScanSamples && crossings < kCrossingsPerStage; ++i) {
        const double s = -1.0 + 2.0 * i / kScanSamples;
        const detail::StageEval cur = detail::eval_stage(at(s), j);
        const bool both = prev.ok && cur.ok;
        const long double qa = both ? std::floor(prev.g.imag() / (2 * std::numbers::pi_v<long double>)) : 0;
        const long double qb = both ? std::floor(cur.g.imag() / (2 * std::numbers::pi_v<long double>)) : 0;
        const double sa = prev_s;
        prev = cur;
        prev_s = s;
        if (!both || qa == qb) continue;
        // Every level 2 pi k strictly between the samples is crossed; try the
        // nearest few, bisecting Im f^{m-1} onto each.
        const long double kmin = std::min(qa, qb) + 1;
        for (long double k = kmin; k <= std::max(qa, qb) && k < kmin + kLevelsPerPair &&
                                   crossings < kCrossingsPerStage; ++k) {
          ++crossings;
          ++attempts;
          const long double level = 2 * std::numbers::pi_v<long double> * k;
          double lo = sa, hi = s;
          const bool lo_below = qa < qb;
          bool broken = false;
          for (int b = 0; b < 60; ++b) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            const detail::StageEval em = detail::eval_stage(at(mid), j);
            if (!em.ok) { broken = true; break; }
            const bool below = em.g.imag() < level;
            if (below == lo_below) lo = mid; else hi = mid;
          }
          if (broken) continue;
          const detail::LComplex tau(logt, level);
          const detail::StageTarget target = [tau](detail::LComplex) { return tau; };
          auto z = detail::newton_stage(U, at(0.5 * (lo + hi)), j, target);
          if (!z) continue;
          const Complex best = detail::polish_ulps(*z, 3, [&](Complex q) {
            return U.contains(q) ? landing_score(q, m, t_star) : INFINITY;
          });
          if (landing_score(best, m, t_star) <= 1.0)
            return make_escaping(U, t_star, m_max, best, m, "scan-newton", attempts);
        }
      }
    }
  }
  throw Error(ErrorCode::NotFound, "find_escaping_point: no landing found up to stage " +
                                       std::to_string(m_max));
}

namespace {

double stepwise_sum(const std::vector<Complex>& trace, const LiftedPoint& pen, Complex v) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) sum += detail::rel_step(trace[k], trace[k + 1]);
  if (!trace.empty()) sum += detail::rel_step(trace.back(), pen.to_complex());
  sum += std::abs(pen.exp() - v) / std::abs(v);
  return sum;
}

void fill_report(TransitivityWitness& w, const Disc& U, Complex v, int n_min, std::uint64_t seed,
                 const char* method) {
  auto& r = w.report;
  r.kind = WitnessKind::Transitivity;
  r.seed = seed;
  r.inputs = {{"disc", detail::disc_json(U)}, {"target", cjson(v)}, {"n_min", n_min}};
  nlohmann::json tr = nlohmann::json::array();
  for (auto q : w.trace) tr.push_back(cjson(q));
  r.outputs = {{"z", cjson(w.z)},
               {"n", w.n},
               {"trace", tr},
               {"penultimate", detail::lifted_json(w.penultimate)},
               {"residual", w.residual}};
  r.diagnostics["method"] = method;
  r.diagnostics["tolerance"] = kStepwiseTolerance;
  r.diagnostics["note"] = kSearchNote;
}

// Preimages reached in one or two logarithm steps.
bool direct_preimage(const Disc& U, Complex v, int n_min, TransitivityWitness& out) {
  const Complex lv = std::log(v);
  auto nearest = [&](Complex base) {
    return base + Complex(0.0, kTwoPi * std::round((U.center.imag() - base.imag()) / kTwoPi));
  };
  if (n_min <= 1) {
    const Complex z = nearest(lv);
    if (U.contains(z)) {
      out.z = z;
      out.n = 1;
      out.trace.clear();
      out.penultimate = LiftedPoint::from_complex(z);
      return true;
    }
  }
  if (n_min <= 2) {
    for (int a = 0; a <= 400; ++a)
      for (int sgn : {1, -1}) {
        if (a == 0 && sgn < 0) continue;
        const Complex w = lv + Complex(0.0, kTwoPi * sgn * a);
        const Complex z = nearest(std::log(w));
        if (U.contains(z)) {
          out.z = z;
          out.n = 2;
          out.trace = {z};
          out.penultimate = LiftedPoint::from_complex(w);
          return true;
        }
      }
  }
  return false;
}

}  // namespace

TransitivityWitness transitivity_witness(const Disc& U, Complex v, int n_min, std::uint64_t seed) {
  if (v == Complex(0.0, 0.0)) throw Error(ErrorCode::TargetZero, "transitivity target v = 0");
  check_disc(U);
  if (n_min < 0) throw Error(ErrorCode::InvalidArgument, "n_min must be >= 0");
  const double rho = rho_for_target(v);

  TransitivityWitness out;
  if (direct_preimage(U, v, n_min, out)) {
    out.residual = stepwise_sum(out.trace, out.penultimate, v);
    if (out.residual <= kStepwiseTolerance) {
      fill_report(out, U, v, n_min, seed, "direct");
      return out;
    }
  }

  const double t = std::max(50.0, rho + 1.0);
  if (t > 700.0) throw Error(ErrorCode::NotFound, "target too close to 0 for double range");
  detail::Rng rng(seed);
  int tried = 0;
  for (int m = std::max(1, n_min - 2); m <= std::max(kStageMax, n_min); ++m) {
    auto visit = [&](const std::vector<Complex>& orbit) {
      ++tried;
      try {
        const InverseF2Branch psi(v, orbit.back());
        const auto top = psi.trace(v);
        const double R = std::abs(top.value - orbit.back()) * (1.0 + 1e-9) + 1e-12;
        const PullbackChain chain = build_pullback(orbit, m, R);
        if (chain.radii[0] > U.boundary_distance(orbit.front())) return false;
        auto tr = chain.trace(top.value);
        if (!U.contains(tr.front())) return false;
        TransitivityWitness w;
        w.z = tr.front();
        w.n = m + 2;
        w.trace = std::move(tr);
        w.penultimate = top.first;
        w.residual = stepwise_sum(w.trace, w.penultimate, v);
        if (w.residual > kStepwiseTolerance) return false;
        fill_report(w, U, v, n_min, seed, "inverse-f2-pullback");
        w.report.chain = chain.to_json();
        w.report.diagnostics["anchor_stage"] = m;
        w.report.diagnostics["anchor"] = cjson(orbit.back());
        w.report.diagnostics["rho"] = rho;
        w.report.diagnostics["branch_turns"] = psi.n0();
        w.report.diagnostics["strip_index"] = psi.m();
        w.report.diagnostics["candidates_tried"] = tried;
        out = std::move(w);
        return true;
      } catch (const Error&) {
        return false;
      }
    };
    if (detail::for_each_anchor(U, m, t, rho, 700.0, rng, visit)) break;
  }
  if (out.n == 0)
    throw Error(ErrorCode::NotFound, "transitivity_witness: no admissible anchor orbit found");
  return out;
}

SensitivityWitness sensitivity_witness(const Disc& U, double s, std::uint64_t seed) {
  check_disc(U);
  if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "s must be finite");
  const EscapingPoint esc = find_escaping_point(U);

  // Past the landing the orbit follows the real exponential, which is increasing.
  int n0 = esc.stage;
  double h = esc.height;
  while (h < 2.0) {
    h = std::exp(h);
    ++n0;
  }
  const Complex v(-std::exp(s), 0.0);
  const TransitivityWitness tw = transitivity_witness(U, v, n0, seed);
  const int n = tw.n + 1;
  double lower = h;
  for (int k = n0; k < n && lower <= 700.0; ++k) lower = std::exp(lower);

  SensitivityWitness out;
  out.z = tw.z;
  out.w = esc.point;
  out.n = n;
  out.fz_abs = std::exp(v.real());
  out.fw_abs_lower = lower;
  out.separation_lower = lower - out.fz_abs;
  auto& r = out.report;
  r.kind = WitnessKind::Sensitivity;
  r.seed = seed;
  r.inputs = {{"disc", detail::disc_json(U)}, {"s", s}};
  r.outputs = {{"z", cjson(out.z)},
               {"w", cjson(out.w)},
               {"n", n},
               {"fz_abs", out.fz_abs},
               {"fw_abs_lower", lower},
               {"separation_lower", out.separation_lower},
               {"escaping", esc.report.to_json()},
               {"transitivity", tw.report.to_json()}};
  r.diagnostics = {{"escape_stage", esc.stage}, {"growth_stage", n0}, {"note", kSearchNote}};
  return out;
}

}  // namespace expchaos
