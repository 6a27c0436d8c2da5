#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "expchaos/log_branch.hpp"
#include "expchaos/types.hpp"

namespace expchaos {

/// A branch phi_n of f^{-n} on the disc D_{disc_radius}(z_n), built from
/// logarithm branches anchored along a forward orbit z_0..z_n.
///
/// radii[k] is the radius of a disc around z_k that contains the image of the
/// chain tail at level k, from the recursion r_{k-1} = r_k / (|z_k| - r_k).
/// The recursion is what bounds |phi_n'| on the whole disc; when every
/// |z_k| >= 2pi + 2 each factor is at most 1/2.
struct PullbackChain {
  std::vector<Complex> base_orbit;        // z_0 .. z_n
  std::vector<BranchSpec> branch_specs;   // branch_specs[k-1] is L_k, centered at Im z_{k-1}
  std::vector<double> radii;              // r_0 .. r_n, r_n == disc_radius
  double deriv_bound = 0.0;               // >= sup |phi_n'| on the disc
  double disc_radius = kTwoPi;

  int depth() const { return static_cast<int>(branch_specs.size()); }
  Complex tip() const { return base_orbit.back(); }

  Complex evaluate(Complex w) const;
  /// First step taken in log-polar form, for |z_n| beyond double range.
  Complex evaluate(const LogPolarPoint& w) const;

  /// trace[k] is the value at level k: trace[depth] == w, trace[0] == phi_n(w).
  std::vector<Complex> trace(Complex w) const;

  /// phi_n'(w) = prod 1/trace[k], k = 1..depth.
  Complex derivative(Complex w) const;

  nlohmann::json to_json() const;
  static PullbackChain from_json(const nlohmann::json& j);
};

/// Checks orbit[k+1] == exp(orbit[k]) (relative 1e-9) for k < n and builds the
/// chain on D_{disc_radius}(orbit[n]).
PullbackChain build_pullback(std::span<const Complex> orbit, int n, double disc_radius = kTwoPi);

/// max_k |exp(trace[k-1]) - trace[k]| / |trace[k]|.
double stepwise_residual(std::span<const Complex> trace);

struct AnnulusSpec {
  double r_minus = 0.0;
  double r_plus = 0.0;
};

/// Image under exp of the closed square with left edge at Re = a and side 2pi.
AnnulusSpec annulus_of_square(double a);

/// 3pi + max |log|z|| over K.
double rho_for_compact(std::span<const Complex> K);

/// max(|w_0| + 3, log 4 - log|v|) with w_0 the principal log of v.
double rho_for_target(Complex v);

/// A branch psi of f^{-2} on Delta = D_{|v|/2}(v) with values in
/// D_{2pi}(disc_center): a log branch into V_{n0} (imaginary parts near
/// Arg v + 2pi n0, with |w_{n0}| within pi of e^{Re center}) followed by the
/// upper-half-plane branch into the strip 2pi m < Im < (2m+1)pi.
class InverseF2Branch {
 public:
  InverseF2Branch(Complex v, Complex disc_center);

  struct Trace {
    LiftedPoint first;  // L_{n0}(z), exact turn count
    Complex value;      // psi(z)
  };

  Trace trace(Complex z) const;
  Complex operator()(Complex z) const { return trace(z).value; }
  double derivative_abs(Complex z) const;  // |psi'(z)| = 1 / (|z| |L_{n0}(z)|)
  /// Upper bound on |psi'| over D_s(v), s <= |v|/2.
  double derivative_bound(double s) const;

  Complex target() const { return v_; }
  double delta_radius() const { return std::abs(v_) / 2.0; }
  Complex disc_center() const { return center_; }
  double rho() const { return rho_; }
  double n0() const { return n0_; }
  double m() const { return m_; }

 private:
  Complex v_;
  Complex center_;
  double rho_;
  double x0_, y0_;  // principal log of v
  double n0_;       // integer-valued
  double m_;        // integer-valued
};

InverseF2Branch inverse_f2_branch(Complex v, Complex disc_center);

}  // namespace expchaos
