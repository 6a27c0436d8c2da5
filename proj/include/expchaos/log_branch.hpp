#pragma once

#include "expchaos/types.hpp"

namespace expchaos {

/// Angular distance from the cut below which windowed_log raises OnCut.
inline constexpr double kCutTolerance = 1e-14;

/// A branch of log whose imaginary parts lie in (center - pi, center + pi).
struct BranchSpec {
  double window_center = 0.0;

  static BranchSpec from_index(double base, long long k) {
    return {base + kTwoPi * static_cast<double>(k)};
  }
};

Complex windowed_log(Complex w, BranchSpec spec);

/// Same branch on a log-polar input (log|w|, lifted argument). Works past the
/// double range of |w|.
Complex windowed_log(const LogPolarPoint& w, BranchSpec spec);

/// Branch whose window center is split as `center_reduced + 2*pi*turns`; the
/// result keeps the same split so that a huge imaginary part stays exact.
LiftedPoint windowed_log_lifted(Complex w, double center_reduced, double turns);

/// A logarithm branch restricted to a closed disc that omits the origin,
/// anchored so that L(exp(anchor)) == anchor.
class DiscBranch {
 public:
  DiscBranch(Complex center, double radius, Complex anchor);

  Complex operator()(Complex w) const;
  Complex derivative(Complex w) const;  // 1/w
  bool contains(Complex w) const;

  Complex center() const { return center_; }
  double radius() const { return radius_; }
  Complex anchor() const { return anchor_; }
  BranchSpec spec() const { return spec_; }

 private:
  Complex center_;
  double radius_;
  Complex anchor_;
  BranchSpec spec_;
};

DiscBranch disc_branch(Complex center, double radius, Complex anchor);

}  // namespace expchaos
