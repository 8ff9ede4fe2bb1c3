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

#include "matforge/color.hpp"

namespace matforge {

Hsv rgb_to_hsv(Color4 c) {
  double mx = std::max({c.r, c.g, c.b});
  double mn = std::min({c.r, c.g, c.b});
  double delta = mx - mn;

  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta <= 0.0) {
    out.h = 0.0;
  } else if (mx == c.r) {
    out.h = (c.g - c.b) / delta;
  } else if (mx == c.g) {
    out.h = 2.0 + (c.b - c.r) / delta;
  } else {
    out.h = 4.0 + (c.r - c.g) / delta;
  }
  out.h /= 6.0;
  if (out.h < 0.0) out.h += 1.0;
  return out;
}

Color4 hsv_to_rgb(Hsv hsv, double alpha) {
  double h = hsv.h - std::floor(hsv.h);  // wrap hue
  double s = clamp01(hsv.s);
  double v = hsv.v;
  if (s <= 0.0) return {v, v, v, alpha};

  h *= 6.0;
  int sector = static_cast<int>(h);
  if (sector > 5) sector = 5;
  double f = h - sector;
  double p = v * (1.0 - s);
  double q = v * (1.0 - s * f);
  double t = v * (1.0 - s * (1.0 - f));

  switch (sector) {
    case 0: return {v, t, p, alpha};
    case 1: return {q, v, p, alpha};
    case 2: return {p, v, t, alpha};
    case 3: return {p, q, v, alpha};
    case 4: return {t, p, v, alpha};
    default: return {v, p, q, alpha};
  }
}

}  // namespace matforge
