#pragma once

#include <cmath>

#include <json.hpp>

#include "expchaos/types.hpp"

namespace expchaos::detail {

inline nlohmann::json cjson(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline Complex cfrom(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorCode::Parse, "expected [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json lifted_json(const LiftedPoint& p) {
  return {{"re", p.re}, {"im_reduced", p.im_reduced}, {"turns", p.turns}};
}

inline LiftedPoint lifted_from(const nlohmann::json& j) {
  return {j.at("re").get<double>(), j.at("im_reduced").get<double>(), j.at("turns").get<double>()};
}

}  // namespace expchaos::detail
