#pragma once

#include <functional>
#include <vector>

#include "search_util.hpp"

namespace expchaos::detail {

using AnchorVisitor = std::function<bool(const std::vector<Complex>&)>;

// Visits forward orbits z_0..z_m with z_0 in U and Re z_m in [re_lo, re_hi].
// Candidates come from Newton on Re f^m = t (optionally pinned further to
// Im f^m = pi/2 mod 2pi) seeded at the center, a ring and rng draws, then from
// plain forward orbits of the same seeds. Stops at the first visit that
// returns true.
bool for_each_anchor(const Disc& U, int m, double t, double re_lo, double re_hi, Rng& rng,
                     const AnchorVisitor& visit, int random_seeds = 24);

}  // namespace expchaos::detail
