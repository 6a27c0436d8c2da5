#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace expchaos {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorCode {
  InvalidArgument = 1,
  Overflow,
  ZeroArgument,
  OnCut,
  DiscContainsOrigin,
  AnchorMismatch,
  OutsideDomain,
  ParameterOutsideDisc,
  DiscTouchesOrigin,
  OrbitMismatch,
  EmptyK,
  ZeroInK,
  TargetZero,
  CenterTooFarLeft,
  NotFound,
  Io,
  Parse,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// exp(log_mod) * (cos arg + i sin arg), with arg kept unreduced.
struct LogPolarPoint {
  double log_mod = 0.0;
  double arg = 0.0;

  Complex to_complex() const;  // throws Overflow when log_mod > 709
  static LogPolarPoint from_complex(Complex z);
};

// re + i*(im_reduced + 2*pi*turns). `turns` is an integer-valued double, so the
// value stays exact even when |turns| exceeds 2^53; exp() only ever sees the
// reduced part.
struct LiftedPoint {
  double re = 0.0;
  double im_reduced = 0.0;
  double turns = 0.0;

  double im() const { return im_reduced + kTwoPi * turns; }
  double abs() const;
  double arg() const;  // principal Arg of the lifted value
  Complex to_complex() const { return {re, im()}; }
  Complex exp() const;  // throws Overflow when re > 709

  static LiftedPoint from_complex(Complex z);
};

}  // namespace expchaos
