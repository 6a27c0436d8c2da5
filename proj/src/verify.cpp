#include <cmath>
#include <string>

#include "expchaos/inverse.hpp"
#include "expchaos/witness.hpp"
#include "json_util.hpp"
#include "search_util.hpp"

namespace expchaos {

using detail::cfrom;
using detail::LComplex;

namespace {

// Replay allowance over the claimed values.
constexpr double kReplaySlack = 10.0;

struct Checker {
  VerifyResult& res;
  void expect(bool cond, const std::string& what) {
    if (!cond) res.failures.push_back(what);
  }
};

void verify_escaping(const nlohmann::json& in, const nlohmann::json& out, Checker& ck,
                     nlohmann::json& rec) {
  const Disc U = detail::disc_from(in.at("disc"));
  const Complex z = cfrom(out.at("point"));
  const int m = out.at("stage").get<int>();
  const double t_star = in.at("t_star").get<double>();
  ck.expect(U.contains(z), "escaping point outside the disc");
  std::vector<LComplex> orbit;
  if (!detail::forward_ld(z, m, orbit)) {
    ck.expect(false, "escaping orbit not representable up to its stage");
    return;
  }
  const double re = static_cast<double>(orbit.back().real());
  const double im = static_cast<double>(orbit.back().imag());
  rec["landing"] = detail::cjson({re, im});
  ck.expect(re >= 0.0, "landing has negative real part");
  ck.expect(std::abs(im) <= kReplaySlack * kAxisTolerance * std::max(1.0, re),
            "landing is off the real axis");
  // Stage 0 points sit on the axis at their own height.
  if (m > 0)
    ck.expect(std::abs(re - t_star) <= kReplaySlack * kHeightTolerance,
              "landing height differs from t_star");
  ck.expect(std::abs(re - out.at("height").get<double>()) <= 1e-6 * std::max(1.0, re),
            "claimed height not reproduced");
}

void verify_transitivity(const nlohmann::json& in, const nlohmann::json& out,
                         const std::optional<nlohmann::json>& chain, Checker& ck,
                         nlohmann::json& rec) {
  const Disc U = detail::disc_from(in.at("disc"));
  const Complex v = cfrom(in.at("target"));
  const Complex z = cfrom(out.at("z"));
  const int n = out.at("n").get<int>();
  std::vector<Complex> trace;
  for (const auto& q : out.at("trace")) trace.push_back(cfrom(q));
  const LiftedPoint pen = detail::lifted_from(out.at("penultimate"));

  ck.expect(U.contains(z), "z outside the disc");
  ck.expect(n >= in.value("n_min", 0) && n >= 1, "hit time below n_min");
  ck.expect(static_cast<int>(trace.size()) == n - 1, "trace length differs from n - 1");
  if (!trace.empty()) ck.expect(trace.front() == z, "trace does not start at z");
  else ck.expect(pen.to_complex() == z, "penultimate point differs from z for n = 1");

  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) sum += detail::rel_step(trace[k], trace[k + 1]);
  if (!trace.empty()) sum += detail::rel_step(trace.back(), pen.to_complex());
  sum += std::abs(pen.exp() - v) / std::abs(v);
  rec["residual"] = sum;
  const double claimed = out.at("residual").get<double>();
  ck.expect(sum <= kStepwiseTolerance, "stepwise residual above tolerance");
  ck.expect(sum <= kReplaySlack * claimed + 1e-15, "stepwise residual not reproduced");

  if (chain) {
    // Re-run the branch inversions from the recorded orbit.
    const PullbackChain stored = PullbackChain::from_json(*chain);
    const PullbackChain rebuilt =
        build_pullback(stored.base_orbit, stored.depth(), stored.disc_radius);
    const Complex zz = rebuilt.evaluate(trace.back());
    rec["chain_replay"] = detail::cjson(zz);
    ck.expect(std::abs(zz - z) <= 1e-12 * std::max(1.0, std::abs(z)), "chain replay moved z");
    ck.expect(rebuilt.radii.front() <= U.boundary_distance(stored.base_orbit.front()) * (1 + 1e-12),
              "pullback disc not contained in U");
  }
}

void verify_periodic(const nlohmann::json& in, const nlohmann::json& out, Checker& ck,
                     nlohmann::json& rec) {
  const Disc U = detail::disc_from(in.at("disc"));
  const Complex p = cfrom(out.at("point"));
  const int period = out.at("period").get<int>();
  ck.expect(U.contains(p), "periodic point outside the disc");
  const Complex lo = out.contains("point_lo") ? cfrom(out.at("point_lo")) : Complex{};
  const CycleCheck cc = check_cycle(p, period, lo);
  rec["residual"] = cc.residual;
  rec["log_multiplier"] = cc.log_multiplier;
  ck.expect(cc.representable, "cycle not representable");
  ck.expect(cc.residual <= kPeriodicResidual, "periodic residual above tolerance");
  ck.expect(cc.residual <= kReplaySlack * out.at("residual").get<double>() + 1e-15,
            "periodic residual not reproduced");
  ck.expect(cc.log_multiplier > 0.0, "multiplier modulus not above 1");
  const double claimed = out.at("log_multiplier").get<double>();
  ck.expect(std::abs(cc.log_multiplier - claimed) <= 1e-9 * std::max(1.0, std::abs(claimed)),
            "multiplier not reproduced");
}

void verify_sensitivity(const nlohmann::json& in, const nlohmann::json& out, Checker& ck,
                        nlohmann::json& rec) {
  const VerifyResult esc = verify_report(out.at("escaping"));
  const VerifyResult tr = verify_report(out.at("transitivity"));
  for (const auto& f : esc.failures) ck.expect(false, "escaping: " + f);
  for (const auto& f : tr.failures) ck.expect(false, "transitivity: " + f);
  const Disc U = detail::disc_from(in.at("disc"));
  const int n = out.at("n").get<int>();
  const auto& tro = out.at("transitivity").at("outputs");
  const auto& eo = out.at("escaping").at("outputs");
  ck.expect(cfrom(tro.at("z")) == cfrom(out.at("z")) && cfrom(eo.at("point")) == cfrom(out.at("w")),
            "sub-reports disagree with z, w");
  ck.expect(U.contains(cfrom(out.at("z"))) && U.contains(cfrom(out.at("w"))), "z or w outside U");
  ck.expect(n == tro.at("n").get<int>() + 1, "n is not the hit time plus one");
  const Complex v = cfrom(out.at("transitivity").at("inputs").at("target"));
  const double fz = std::abs(std::exp(v));
  // Real orbit from the landing height, which only grows.
  const int stage = eo.at("stage").get<int>();
  double lower = eo.at("height").get<double>();
  for (int k = stage; k < n && lower <= 700.0; ++k) lower = std::exp(lower);
  rec["fz_abs"] = fz;
  rec["fw_abs_lower"] = lower;
  ck.expect(fz <= 1.0, "|f^n(z)| > 1");
  ck.expect(lower - fz >= 1.0, "separation below 1");
}

}  // namespace

VerifyResult verify_report(const nlohmann::json& report) {
  VerifyResult res;
  Checker ck{res};
  try {
    const WitnessReport r = WitnessReport::from_json(report);
    switch (r.kind) {
      case WitnessKind::Escaping: verify_escaping(r.inputs, r.outputs, ck, res.recomputed); break;
      case WitnessKind::Transitivity:
        verify_transitivity(r.inputs, r.outputs, r.chain, ck, res.recomputed);
        break;
      case WitnessKind::Periodic: verify_periodic(r.inputs, r.outputs, ck, res.recomputed); break;
      case WitnessKind::Sensitivity: verify_sensitivity(r.inputs, r.outputs, ck, res.recomputed); break;
    }
  } catch (const Error& e) {
    ck.expect(false, std::string(error_code_name(e.code())) + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    ck.expect(false, std::string("malformed report: ") + e.what());
  }
  res.ok = res.failures.empty();
  return res;
}

}  // namespace expchaos
