#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "expchaos/types.hpp"

namespace expchaos {

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr double kAxisTolerance = 1e-10;
inline constexpr double kHeightTolerance = 1e-8;
inline constexpr double kStepwiseTolerance = 1e-8;
inline constexpr double kPeriodicResidual = 1e-9;

struct Disc {
  Complex center;
  double radius = 0.0;

  bool contains(Complex z) const { return std::abs(z - center) < radius; }
  double boundary_distance(Complex z) const { return radius - std::abs(z - center); }
};

enum class WitnessKind { Escaping, Transitivity, Sensitivity, Periodic };

const char* witness_kind_name(WitnessKind k) noexcept;
WitnessKind parse_witness_kind(const std::string& s);

struct WitnessReport {
  WitnessKind kind = WitnessKind::Escaping;
  std::uint64_t seed = kDefaultSeed;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  nlohmann::json diagnostics = nlohmann::json::object();
  std::optional<nlohmann::json> chain;

  nlohmann::json to_json() const;
  static WitnessReport from_json(const nlohmann::json& j);
};

struct EscapingPoint {
  Complex point;
  int stage = 0;        // f^stage(point) sits on [0, inf) up to tolerance
  double height = 0.0;  // Re f^stage(point)
  WitnessReport report;
};

/// Searches U for z with f^m(z) on the positive real axis at height t_star.
/// When U itself meets [0, inf) the axis point is returned at stage 0 unless
/// some log^j(t_star) lies in U.
EscapingPoint find_escaping_point(const Disc& U, double t_star = 50.0, int m_max = 12);

struct TransitivityWitness {
  Complex z;
  int n = 0;                        // f^n(z) == v
  std::vector<Complex> trace;       // z, f(z), ..., f^{n-2}(z)
  LiftedPoint penultimate;          // f^{n-1}(z), exact turn count
  double residual = 0.0;            // sum of relative stepwise residuals
  WitnessReport report;
};

TransitivityWitness transitivity_witness(const Disc& U, Complex v, int n_min = 0,
                                         std::uint64_t seed = kDefaultSeed);

struct PeriodicPointResult {
  Complex point;
  Complex point_lo;  // low-order part: the periodic point is point + point_lo
  int period = 0;
  double multiplier_modulus = 0.0;
  double residual = 0.0;
  int contraction_steps = 0;
  std::vector<Complex> cycle;
  WitnessReport report;
};

PeriodicPointResult find_periodic(const Disc& U, std::uint64_t seed = kDefaultSeed);

struct SensitivityWitness {
  Complex z, w;
  int n = 0;
  double fz_abs = 0.0;        // |f^n(z)|, from the exact target
  double fw_abs_lower = 0.0;  // lower bound on |f^n(w)|
  double separation_lower = 0.0;
  WitnessReport report;
};

/// Target v = -e^s, so |f^n(z)| = e^{-e^s}.
SensitivityWitness sensitivity_witness(const Disc& U, double s = 0.0,
                                       std::uint64_t seed = kDefaultSeed);

struct VerifyResult {
  bool ok = false;
  std::vector<std::string> failures;
  nlohmann::json recomputed = nlohmann::json::object();
};

VerifyResult verify_report(const nlohmann::json& report);

/// |f^n(z) - z| and log|(f^n)'(z)| evaluated in extended precision at the
/// unevaluated sum z + lo.
struct CycleCheck {
  double residual = 0.0;
  double log_multiplier = 0.0;
  bool representable = true;
};
CycleCheck check_cycle(Complex z, int n, Complex lo = {});

}  // namespace expchaos
