#include "expchaos/log_branch.hpp"

#include <cmath>
#include <numbers>

#include "expchaos/dynamics.hpp"

namespace expchaos {

namespace {

double rotated_arg(Complex w, double theta) {
  // Arg(w / e^{i theta}) via multiplication by e^{-i theta}.
  const Complex r = w * Complex(std::cos(theta), -std::sin(theta));
  return std::atan2(r.imag(), r.real());
}

void check_cut(double a) {
  if (std::numbers::pi - std::abs(a) <= kCutTolerance)
    throw Error(ErrorCode::OnCut, "windowed_log: argument on the excluded ray");
}

}  // namespace

Complex windowed_log(Complex w, BranchSpec spec) {
  if (w == Complex(0.0, 0.0)) throw Error(ErrorCode::ZeroArgument, "windowed_log: w = 0");
  const double a = rotated_arg(w, spec.window_center);
  check_cut(a);
  return {std::log(std::abs(w)), spec.window_center + a};
}

Complex windowed_log(const LogPolarPoint& w, BranchSpec spec) {
  if (std::isinf(w.log_mod) && w.log_mod < 0)
    throw Error(ErrorCode::ZeroArgument, "windowed_log: w = 0");
  const double a = std::remainder(w.arg - spec.window_center, kTwoPi);
  check_cut(a);
  return {w.log_mod, spec.window_center + a};
}

LiftedPoint windowed_log_lifted(Complex w, double center_reduced, double turns) {
  if (w == Complex(0.0, 0.0)) throw Error(ErrorCode::ZeroArgument, "windowed_log: w = 0");
  // e^{i (c + 2 pi n)} == e^{i c}, so only the reduced center enters the rotation.
  const double a = rotated_arg(w, center_reduced);
  check_cut(a);
  return {std::log(std::abs(w)), center_reduced + a, turns};
}

DiscBranch::DiscBranch(Complex center, double radius, Complex anchor)
    : center_(center), radius_(radius), anchor_(anchor), spec_{anchor.imag()} {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "disc_branch: radius must be > 0");
  if (std::abs(center) <= radius)
    throw Error(ErrorCode::DiscContainsOrigin, "disc_branch: closed disc contains 0");
  const Complex image = exp_map(anchor);
  if (std::abs(image - center) >= radius)
    throw Error(ErrorCode::AnchorMismatch, "disc_branch: exp(anchor) outside the disc");
}

bool DiscBranch::contains(Complex w) const {
  return std::abs(w - center_) <= radius_ * (1.0 + 1e-12);
}

Complex DiscBranch::operator()(Complex w) const {
  if (!contains(w)) throw Error(ErrorCode::OutsideDomain, "disc branch evaluated outside its disc");
  return windowed_log(w, spec_);
}

Complex DiscBranch::derivative(Complex w) const {
  if (!contains(w)) throw Error(ErrorCode::OutsideDomain, "disc branch evaluated outside its disc");
  return 1.0 / w;
}

DiscBranch disc_branch(Complex center, double radius, Complex anchor) {
  return DiscBranch(center, radius, anchor);
}

}  // namespace expchaos
