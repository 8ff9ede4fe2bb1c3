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

#pragma once

#include <algorithm>
#include <cmath>

namespace matforge {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend Vec3 operator*(double s, Vec3 a) { return a * s; }
  friend Vec3 operator*(Vec3 a, Vec3 b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }
  bool operator==(const Vec3&) const = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) {
  double len = length(a);
  return len > 0.0 ? a * (1.0 / len) : Vec3{0.0, 0.0, 0.0};
}

// RGBA color. Stored parameter colors keep channels in [0, 1]; transient
// evaluation values may leave that range and are clamped at image output.
struct Color4 {
  double r = 0.0, g = 0.0, b = 0.0, a = 1.0;
  bool operator==(const Color4&) const = default;
};

inline Vec3 lerp(Vec3 a, Vec3 b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, a.z + (b.z - a.z) * t};
}

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

inline Color4 clamped(Color4 c) {
  return {clamp01(c.r), clamp01(c.g), clamp01(c.b), clamp01(c.a)};
}

inline Color4 lerp(Color4 a, Color4 b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t,
          a.a + (b.a - a.a) * t};
}

// Rec. 709 luma; the fixed Color -> Scalar conversion rule.
inline double luminance(Color4 c) {
  return 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b;
}

struct Hsv {
  double h = 0.0, s = 0.0, v = 0.0;
};

Hsv rgb_to_hsv(Color4 c);
Color4 hsv_to_rgb(Hsv hsv, double alpha = 1.0);

}  // namespace matforge
