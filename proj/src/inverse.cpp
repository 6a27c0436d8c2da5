#include "expchaos/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "expchaos/dynamics.hpp"
#include "json_util.hpp"

namespace expchaos {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOrbitRelTol = 1e-9;
constexpr double kMembershipSlack = 1e-9;

// Computed points carry a few ulps of |center| whatever the radius, which
// matters once the nested radii shrink toward 1e-11.
bool within(Complex w, Complex center, double radius) {
  const double ulps = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(center));
  return std::abs(w - center) <= radius * (1.0 + kMembershipSlack) + ulps;
}

}  // namespace

PullbackChain build_pullback(std::span<const Complex> orbit, int n, double disc_radius) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "build_pullback: n must be >= 1");
  if (orbit.size() < static_cast<std::size_t>(n) + 1)
    throw Error(ErrorCode::InvalidArgument, "build_pullback: orbit shorter than n + 1");
  if (!(disc_radius > 0.0))
    throw Error(ErrorCode::InvalidArgument, "build_pullback: disc radius must be > 0");

  for (int k = 0; k < n; ++k) {
    const Complex image = exp_map(orbit[k]);
    if (std::abs(image - orbit[k + 1]) > kOrbitRelTol * std::abs(orbit[k + 1]))
      throw Error(ErrorCode::OrbitMismatch, "build_pullback: orbit[" + std::to_string(k + 1) +
                                                "] != exp(orbit[" + std::to_string(k) + "])");
  }

  PullbackChain chain;
  chain.base_orbit.assign(orbit.begin(), orbit.begin() + n + 1);
  chain.disc_radius = disc_radius;
  chain.radii.assign(n + 1, 0.0);
  chain.radii[n] = disc_radius;
  chain.deriv_bound = 1.0;
  for (int k = n; k >= 1; --k) {
    const double modulus = std::abs(orbit[k]);
    const double r = chain.radii[k];
    if (modulus <= r)
      throw Error(ErrorCode::DiscTouchesOrigin,
                  "build_pullback: disc around orbit[" + std::to_string(k) + "] reaches 0");
    // sup of |L_k'| = 1/|w| over D_r(z_k)
    const double factor = 1.0 / (modulus - r);
    chain.radii[k - 1] = r * factor;
    chain.deriv_bound *= factor;
  }
  chain.branch_specs.reserve(n);
  for (int k = 1; k <= n; ++k) chain.branch_specs.push_back({orbit[k - 1].imag()});
  return chain;
}

std::vector<Complex> PullbackChain::trace(Complex w) const {
  const int n = depth();
  if (!within(w, base_orbit[n], radii[n]))
    throw Error(ErrorCode::OutsideDomain, "pullback chain evaluated outside its disc");
  std::vector<Complex> out(n + 1);
  out[n] = w;
  for (int k = n; k >= 1; --k) {
    out[k - 1] = windowed_log(out[k], branch_specs[k - 1]);
    if (!within(out[k - 1], base_orbit[k - 1], radii[k - 1]))
      throw Error(ErrorCode::OutsideDomain, "pullback chain left its nested discs");
  }
  return out;
}

Complex PullbackChain::evaluate(Complex w) const { return trace(w).front(); }

Complex PullbackChain::evaluate(const LogPolarPoint& w) const {
  const int n = depth();
  Complex cur = windowed_log(w, branch_specs[n - 1]);
  if (!within(cur, base_orbit[n - 1], radii[n - 1]))
    throw Error(ErrorCode::OutsideDomain, "pullback chain evaluated outside its disc");
  for (int k = n - 1; k >= 1; --k) {
    cur = windowed_log(cur, branch_specs[k - 1]);
    if (!within(cur, base_orbit[k - 1], radii[k - 1]))
      throw Error(ErrorCode::OutsideDomain, "pullback chain left its nested discs");
  }
  return cur;
}

Complex PullbackChain::derivative(Complex w) const {
  const auto t = trace(w);
  Complex d{1.0, 0.0};
  for (std::size_t k = 1; k < t.size(); ++k) d /= t[k];
  return d;
}

nlohmann::json PullbackChain::to_json() const {
  nlohmann::json j;
  auto& orbit = j["orbit"] = nlohmann::json::array();
  for (auto z : base_orbit) orbit.push_back(detail::cjson(z));
  auto& centers = j["window_centers"] = nlohmann::json::array();
  for (auto s : branch_specs) centers.push_back(s.window_center);
  j["radii"] = radii;
  j["deriv_bound"] = deriv_bound;
  j["disc_radius"] = disc_radius;
  return j;
}

PullbackChain PullbackChain::from_json(const nlohmann::json& j) {
  try {
    PullbackChain c;
    for (const auto& z : j.at("orbit")) c.base_orbit.push_back(detail::cfrom(z));
    for (const auto& s : j.at("window_centers")) c.branch_specs.push_back({s.get<double>()});
    c.radii = j.at("radii").get<std::vector<double>>();
    c.deriv_bound = j.at("deriv_bound").get<double>();
    c.disc_radius = j.at("disc_radius").get<double>();
    if (c.base_orbit.size() != c.branch_specs.size() + 1 || c.radii.size() != c.base_orbit.size())
      throw Error(ErrorCode::Parse, "pullback chain: inconsistent array lengths");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("pullback chain: ") + e.what());
  }
}

double stepwise_residual(std::span<const Complex> trace) {
  double worst = 0.0;
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const double scale = std::abs(trace[k]);
    worst = std::max(worst, std::abs(exp_map(trace[k - 1]) - trace[k]) / scale);
  }
  return worst;
}

AnnulusSpec annulus_of_square(double a) {
  if (!std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "annulus_of_square: a not finite");
  if (a > 700.0 - kTwoPi) throw Error(ErrorCode::Overflow, "annulus_of_square: a > 700 - 2pi");
  return {std::exp(a), std::exp(a + kTwoPi)};
}

double rho_for_compact(std::span<const Complex> K) {
  if (K.empty()) throw Error(ErrorCode::EmptyK, "rho_for_compact: K is empty");
  double worst = 0.0;
  for (auto z : K) {
    if (z == Complex(0.0, 0.0)) throw Error(ErrorCode::ZeroInK, "rho_for_compact: 0 in K");
    worst = std::max(worst, std::abs(std::log(std::abs(z))));
  }
  return 3.0 * kPi + worst;
}

double rho_for_target(Complex v) {
  if (v == Complex(0.0, 0.0)) throw Error(ErrorCode::TargetZero, "target v = 0");
  const Complex w0 = windowed_log(v, BranchSpec{std::arg(v)});
  return std::max(std::abs(w0) + 3.0, std::log(4.0) - std::log(std::abs(v)));
}

InverseF2Branch::InverseF2Branch(Complex v, Complex disc_center)
    : v_(v), center_(disc_center), rho_(rho_for_target(v)) {
  if (disc_center.real() < rho_)
    throw Error(ErrorCode::CenterTooFarLeft, "inverse_f2_branch: Re(center) < rho(v)");
  if (disc_center.real() > 700.0)
    throw Error(ErrorCode::Overflow, "inverse_f2_branch: Re(center) > 700");
  x0_ = std::log(std::abs(v));
  y0_ = std::arg(v);

  // |w_n| = |x0 + i(y0 + 2 pi n)| must sit within pi of R = |e^center|.
  const double R = std::exp(disc_center.real());
  const double q = x0_ / R;
  const double height = R * std::sqrt(1.0 - q * q);
  n0_ = std::max(1.0, std::round((height - y0_) / kTwoPi));
  // |Im center - (4m + 1) pi / 2| <= pi
  m_ = std::round((disc_center.imag() - kPi / 2.0) / kTwoPi);
}

InverseF2Branch::Trace InverseF2Branch::trace(Complex z) const {
  if (std::abs(z - v_) > delta_radius() * (1.0 + 1e-12))
    throw Error(ErrorCode::OutsideDomain, "inverse_f2_branch: z outside D_{|v|/2}(v)");
  Trace t;
  t.first = windowed_log_lifted(z, y0_, n0_);
  const double im_total = t.first.im();
  if (!(im_total > 0.0))
    throw Error(ErrorCode::OnCut, "inverse_f2_branch: first branch left the upper half plane");
  // Upper-half-plane branch onto the strip 2 pi m < Im < (2m + 1) pi.
  const double arg = std::atan2(im_total, t.first.re);
  t.value = Complex(std::log(t.first.abs()), kTwoPi * m_ + arg);
  return t;
}

double InverseF2Branch::derivative_abs(Complex z) const {
  const auto t = trace(z);
  return 1.0 / (std::abs(z) * t.first.abs());
}

double InverseF2Branch::derivative_bound(double s) const {
  const double modv = std::abs(v_);
  if (!(s > 0.0) || s > modv / 2.0 * (1.0 + 1e-12))
    throw Error(ErrorCode::InvalidArgument, "derivative_bound: need 0 < s <= |v|/2");
  const double min_z = modv - s;
  const double w_center = std::hypot(x0_, y0_ + kTwoPi * n0_);
  const double min_w = w_center - s / min_z;  // |L'| <= 1/min_z on D_s(v)
  return 1.0 / (min_z * min_w);
}

InverseF2Branch inverse_f2_branch(Complex v, Complex disc_center) {
  return InverseF2Branch(v, disc_center);
}

}  // namespace expchaos
