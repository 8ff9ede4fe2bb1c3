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

#include <string>
#include <variant>
#include <vector>

#include "matforge/color.hpp"

namespace matforge {

enum class ParamKind { Float, Int, Vector, Color, ColorRamp, Enum, Bool };

const char* param_kind_name(ParamKind kind);

enum class RampInterpolation { Linear, Constant, Ease };

struct RampStop {
  double position = 0.0;  // in [0, 1]
  Color4 color;
  bool operator==(const RampStop&) const = default;
};

// Piecewise color mapping over [0, 1]. Stops are kept sorted by position.
struct ColorRampValue {
  std::vector<RampStop> stops;
  RampInterpolation interpolation = RampInterpolation::Linear;

  bool operator==(const ColorRampValue&) const = default;

  // Evaluates the ramp at t (clamped to [0, 1]). Requires >= 1 stop.
  Color4 sample(double t) const;
};

// Heterogeneous node-parameter value. Continuous kinds: Float, Vector,
// Color, ColorRamp. Discrete kinds: Int, Enum, Bool.
class ParamValue {
 public:
  ParamValue() : value_(0.0) {}

  static ParamValue of_float(double v) { return ParamValue(v); }
  static ParamValue of_int(long long v) { return ParamValue(v); }
  static ParamValue of_vector(Vec3 v) { return ParamValue(v); }
  static ParamValue of_color(Color4 c) { return ParamValue(c); }
  static ParamValue of_ramp(ColorRampValue r) { return ParamValue(std::move(r)); }
  static ParamValue of_enum(std::string variant) { return ParamValue(EnumTag{}, std::move(variant)); }
  static ParamValue of_bool(bool b) { return ParamValue(b); }

  ParamKind kind() const { return static_cast<ParamKind>(value_.index()); }

  double as_float() const { return std::get<double>(value_); }
  long long as_int() const { return std::get<long long>(value_); }
  Vec3 as_vector() const { return std::get<Vec3>(value_); }
  Color4 as_color() const { return std::get<Color4>(value_); }
  const ColorRampValue& as_ramp() const { return std::get<ColorRampValue>(value_); }
  const std::string& as_enum() const { return std::get<EnumValue>(value_).variant; }
  bool as_bool() const { return std::get<bool>(value_); }

  // Numeric coercion used when evaluating scalar inputs.
  double as_number() const {
    if (kind() == ParamKind::Int) return static_cast<double>(as_int());
    return as_float();
  }

  bool operator==(const ParamValue&) const = default;

  // True when every embedded channel respects its documented range
  // (color channels and ramp stop positions in [0, 1], sorted stops).
  bool well_formed() const;

 private:
  struct EnumTag {};
  struct EnumValue {
    std::string variant;
    bool operator==(const EnumValue&) const = default;
  };

  explicit ParamValue(double v) : value_(v) {}
  explicit ParamValue(long long v) : value_(v) {}
  explicit ParamValue(Vec3 v) : value_(v) {}
  explicit ParamValue(Color4 v) : value_(v) {}
  explicit ParamValue(ColorRampValue v) : value_(std::move(v)) {}
  ParamValue(EnumTag, std::string v) : value_(EnumValue{std::move(v)}) {}
  explicit ParamValue(bool v) : value_(v) {}

  // Variant order must match ParamKind.
  std::variant<double, long long, Vec3, Color4, ColorRampValue, EnumValue, bool> value_;
};

const char* ramp_interpolation_name(RampInterpolation interp);
bool ramp_interpolation_from_name(const std::string& name, RampInterpolation& out);

}  // namespace matforge
