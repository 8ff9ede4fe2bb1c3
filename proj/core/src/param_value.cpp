// Copyright 2026 The Matforge Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "matforge/param_value.hpp"

#include <algorithm>

namespace matforge {

const char* param_kind_name(ParamKind kind) {
  switch (kind) {
    case ParamKind::Float: return "float";
    case ParamKind::Int: return "int";
    case ParamKind::Vector: return "vector";
    case ParamKind::Color: return "color";
    case ParamKind::ColorRamp: return "ramp";
    case ParamKind::Enum: return "enum";
    case ParamKind::Bool: return "bool";
  }
  return "?";
}

const char* ramp_interpolation_name(RampInterpolation interp) {
  switch (interp) {
    case RampInterpolation::Linear: return "LINEAR";
    case RampInterpolation::Constant: return "CONSTANT";
    case RampInterpolation::Ease: return "EASE";
  }
  return "?";
}

bool ramp_interpolation_from_name(const std::string& name, RampInterpolation& out) {
  if (name == "LINEAR") { out = RampInterpolation::Linear; return true; }
  if (name == "CONSTANT") { out = RampInterpolation::Constant; return true; }
  if (name == "EASE") { out = RampInterpolation::Ease; return true; }
  return false;
}

Color4 ColorRampValue::sample(double t) const {
  t = clamp01(t);
  if (stops.empty()) return {0.0, 0.0, 0.0, 1.0};
  if (t <= stops.front().position) return stops.front().color;
  if (t >= stops.back().position) return stops.back().color;

  // stops are sorted; find the enclosing segment
  std::size_t hi = 1;
  while (hi < stops.size() && stops[hi].position < t) ++hi;
  const RampStop& a = stops[hi - 1];
  const RampStop& b = stops[hi];

  if (interpolation == RampInterpolation::Constant) return a.color;

  double span = b.position - a.position;
  double f = span > 0.0 ? (t - a.position) / span : 0.0;
  if (interpolation == RampInterpolation::Ease) {
    f = f * f * (3.0 - 2.0 * f);  // smoothstep
  }
  return lerp(a.color, b.color, f);
}

bool ParamValue::well_formed() const {
  switch (kind()) {
    case ParamKind::Color: {
      Color4 c = as_color();
      return c == clamped(c);
    }
    case ParamKind::ColorRamp: {
      const ColorRampValue& ramp = as_ramp();
      if (ramp.stops.empty()) return false;
      double prev = 0.0;
      for (std::size_t i = 0; i < ramp.stops.size(); ++i) {
        const RampStop& s = ramp.stops[i];
        if (s.position < 0.0 || s.position > 1.0) return false;
        if (i > 0 && s.position < prev) return false;
        prev = s.position;
        if (!(s.color == clamped(s.color))) return false;
      }
      return true;
    }
    default:
      return true;
  }
}

}  // namespace matforge
