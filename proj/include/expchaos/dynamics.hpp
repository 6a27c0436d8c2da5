#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expchaos/types.hpp"

namespace expchaos {

/// Largest real part accepted by exp_map (just under log(DBL_MAX)).
inline constexpr double kExpOverflowRe = 709.0;

Complex exp_map(Complex z);

enum class OrbitClass {
  EscapingCertified,
  EscapingHeuristic,
  PeriodicDetected,
  Unresolved,
  Overflowed,
};

const char* orbit_class_name(OrbitClass c) noexcept;

struct Classification {
  OrbitClass kind = OrbitClass::Unresolved;
  int period = 0;   // PeriodicDetected only
  int at_step = 0;  // Overflowed only; also the detection index for periodic orbits

  bool operator==(const Classification&) const = default;
};

struct ClassifyParams {
  double escape_re_threshold = 50.0;
  int k_consec = 3;
  double tol_axis = 1e-10;
  double periodic_tol = 1e-9;
  int period_scan_limit = 64;
};

struct OrbitRecord {
  Complex start;
  std::vector<Complex> points;         // points[0] == start
  std::vector<LogPolarPoint> shadows;  // same length as points
  Classification classification;

  // Step index whose point exceeded double range (0 = none). Only the shadow
  // of that last entry is meaningful; its point holds signed infinities.
  int overflow_step = 0;

  std::size_t length() const { return points.size(); }
  std::string to_csv() const;
  std::string to_json() const;
};

/// Forward orbit up to max_steps, stopping early on overflow or when the
/// periodicity detector fires. Never throws on overflow.
OrbitRecord iterate(Complex z0, int max_steps, const ClassifyParams& params = {});

Classification classify_orbit(const OrbitRecord& record, const ClassifyParams& params = {});

/// Smallest p in [1, scan_limit] with |points[n] - points[n-p]| <= tol at the
/// newest index n, or 0.
int detect_period(std::span<const Complex> points, int scan_limit, double tol);

struct Multiplier {
  double log_modulus = 0.0;
  std::optional<Complex> value;  // present when |product| <= 1e300
};

/// (f^n)'(z0) = prod_{k<n} z_{k+1} for a forward orbit prefix z0..zn.
Multiplier multiplier_along(std::span<const Complex> points);

}  // namespace expchaos
