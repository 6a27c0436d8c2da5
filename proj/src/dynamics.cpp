#include "expchaos/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace expchaos {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
    case ErrorCode::OnCut: return "OnCut";
    case ErrorCode::DiscContainsOrigin: return "DiscContainsOrigin";
    case ErrorCode::AnchorMismatch: return "AnchorMismatch";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::ParameterOutsideDisc: return "ParameterOutsideDisc";
    case ErrorCode::DiscTouchesOrigin: return "DiscTouchesOrigin";
    case ErrorCode::OrbitMismatch: return "OrbitMismatch";
    case ErrorCode::EmptyK: return "EmptyK";
    case ErrorCode::ZeroInK: return "ZeroInK";
    case ErrorCode::TargetZero: return "TargetZero";
    case ErrorCode::CenterTooFarLeft: return "CenterTooFarLeft";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

Complex LogPolarPoint::to_complex() const {
  if (log_mod > kExpOverflowRe)
    throw Error(ErrorCode::Overflow, "log-polar point beyond double range");
  const double m = std::exp(log_mod);
  return {m * std::cos(arg), m * std::sin(arg)};
}

LogPolarPoint LogPolarPoint::from_complex(Complex z) {
  return {std::log(std::abs(z)), std::arg(z)};
}

double LiftedPoint::abs() const { return std::hypot(re, im()); }

double LiftedPoint::arg() const { return std::atan2(im(), re); }

Complex LiftedPoint::exp() const {
  if (re > kExpOverflowRe)
    throw Error(ErrorCode::Overflow, "exp of lifted point beyond double range");
  const double m = std::exp(re);
  return {m * std::cos(im_reduced), m * std::sin(im_reduced)};
}

LiftedPoint LiftedPoint::from_complex(Complex z) { return {z.real(), z.imag(), 0.0}; }

Complex exp_map(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorCode::InvalidArgument, "exp_map: non-finite argument");
  if (z.real() > kExpOverflowRe)
    throw Error(ErrorCode::Overflow, "exp_map: real part exceeds 709");
  const double m = std::exp(z.real());
  return {m * std::cos(z.imag()), m * std::sin(z.imag())};
}

const char* orbit_class_name(OrbitClass c) noexcept {
  switch (c) {
    case OrbitClass::EscapingCertified: return "EscapingCertified";
    case OrbitClass::EscapingHeuristic: return "EscapingHeuristic";
    case OrbitClass::PeriodicDetected: return "PeriodicDetected";
    case OrbitClass::Unresolved: return "Unresolved";
    case OrbitClass::Overflowed: return "Overflowed";
  }
  return "Unknown";
}

int detect_period(std::span<const Complex> points, int scan_limit, double tol) {
  if (points.size() < 2) return 0;
  const std::size_t n = points.size() - 1;
  const std::size_t limit = std::min<std::size_t>(static_cast<std::size_t>(scan_limit), n);
  for (std::size_t p = 1; p <= limit; ++p) {
    if (std::abs(points[n] - points[n - p]) <= tol) return static_cast<int>(p);
  }
  return 0;
}

OrbitRecord iterate(Complex z0, int max_steps, const ClassifyParams& params) {
  if (max_steps < 0) throw Error(ErrorCode::InvalidArgument, "iterate: max_steps must be >= 0");
  OrbitRecord rec;
  rec.start = z0;
  rec.points.push_back(z0);
  rec.shadows.push_back(LogPolarPoint::from_complex(z0));
  for (int step = 1; step <= max_steps; ++step) {
    const Complex prev = rec.points.back();
    // log|e^z| = Re z and arg e^z = Im z, no exponentiation needed.
    rec.shadows.push_back({prev.real(), prev.imag()});
    if (prev.real() > kExpOverflowRe) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      rec.points.emplace_back(std::copysign(inf, std::cos(prev.imag())),
                              std::copysign(inf, std::sin(prev.imag())));
      rec.overflow_step = step;
      break;
    }
    rec.points.push_back(exp_map(prev));
    if (detect_period(rec.points, params.period_scan_limit, params.periodic_tol) > 0) break;
  }
  rec.classification = classify_orbit(rec, params);
  return rec;
}

Classification classify_orbit(const OrbitRecord& record, const ClassifyParams& params) {
  const auto& pts = record.points;
  const std::size_t finite = record.overflow_step > 0 ? pts.size() - 1 : pts.size();

  for (std::size_t k = 0; k < finite; ++k) {
    if (std::abs(pts[k].imag()) <= params.tol_axis && pts[k].real() >= 0.0)
      return {OrbitClass::EscapingCertified, 0, 0};
  }

  for (std::size_t n = 1; n < finite; ++n) {
    const int p = detect_period(std::span(pts.data(), n + 1), params.period_scan_limit,
                                params.periodic_tol);
    if (p > 0) return {OrbitClass::PeriodicDetected, p, static_cast<int>(n)};
  }

  int run = 0;
  for (std::size_t k = 0; k < finite; ++k) {
    run = pts[k].real() > params.escape_re_threshold ? run + 1 : 0;
    if (run >= params.k_consec) return {OrbitClass::EscapingHeuristic, 0, 0};
  }

  if (record.overflow_step > 0) {
    const bool increasing = finite < 2 || pts[finite - 1].real() > pts[finite - 2].real();
    if (increasing) return {OrbitClass::EscapingHeuristic, 0, 0};
    return {OrbitClass::Overflowed, 0, record.overflow_step};
  }
  return {OrbitClass::Unresolved, 0, 0};
}

Multiplier multiplier_along(std::span<const Complex> points) {
  if (points.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "multiplier_along: need at least two points");
  Multiplier m;
  // |f'(z_k)| = |z_{k+1}| = exp(Re z_k)
  for (std::size_t k = 0; k + 1 < points.size(); ++k) m.log_modulus += points[k].real();
  if (m.log_modulus <= std::log(1e300)) {
    Complex prod{1.0, 0.0};
    for (std::size_t k = 1; k < points.size(); ++k) prod *= points[k];
    m.value = prod;
  }
  return m;
}

namespace {

nlohmann::json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

std::string OrbitRecord::to_csv() const {
  std::string out = "step,re,im,log_mod,arg\n";
  char buf[160];
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", k, points[k].real(),
                  points[k].imag(), shadows[k].log_mod, shadows[k].arg);
    out += buf;
  }
  return out;
}

std::string OrbitRecord::to_json() const {
  nlohmann::json j;
  j["start"] = {start.real(), start.imag()};
  j["length"] = points.size();
  j["classification"] = {{"kind", orbit_class_name(classification.kind)},
                         {"period", classification.period},
                         {"at_step", classification.at_step}};
  j["overflow_step"] = overflow_step;
  auto& steps = j["steps"] = nlohmann::json::array();
  for (std::size_t k = 0; k < points.size(); ++k) {
    steps.push_back({{"step", k},
                     {"re", number_or_null(points[k].real())},
                     {"im", number_or_null(points[k].imag())},
                     {"log_mod", number_or_null(shadows[k].log_mod)},
                     {"arg", number_or_null(shadows[k].arg)}});
  }
  return j.dump(2);
}

}  // namespace expchaos
