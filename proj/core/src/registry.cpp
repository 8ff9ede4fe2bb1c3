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

#include "matforge/registry.hpp"

#include <utility>

namespace matforge {

void NodeTypeRegistry::register_type(NodeTypeDef def) {
  std::string id = def.type_id;
  if (id.empty()) throw GraphError("register_type: empty type_id");
  auto [it, inserted] = types_.emplace(std::move(id), std::move(def));
  if (!inserted) {
    throw GraphError("register_type: duplicate type_id '" + it->first + "'");
  }
}

const NodeTypeDef* NodeTypeRegistry::find(const std::string& type_id) const {
  auto it = types_.find(type_id);
  return it == types_.end() ? nullptr : &it->second;
}

namespace {

using Range = std::pair<double, double>;

SocketSpec in_scalar(std::string name, double def,
                     std::optional<Range> range = std::nullopt,
                     std::optional<Range> stat = std::nullopt) {
  SocketSpec s;
  s.name = std::move(name);
  s.data_kind = SocketKind::Scalar;
  s.default_value = ParamValue::of_float(def);
  s.range = range;
  s.statistical_range = stat;
  return s;
}

SocketSpec in_color(std::string name, Color4 def) {
  SocketSpec s;
  s.name = std::move(name);
  s.data_kind = SocketKind::Color;
  s.default_value = ParamValue::of_color(def);
  s.range = Range{0.0, 1.0};
  return s;
}

SocketSpec in_vector(std::string name, std::optional<Vec3> def = std::nullopt,
                     std::optional<Range> stat = std::nullopt) {
  SocketSpec s;
  s.name = std::move(name);
  s.data_kind = SocketKind::Vector;
  if (def) s.default_value = ParamValue::of_vector(*def);
  s.statistical_range = stat;
  return s;
}

SocketSpec in_shader(std::string name) {
  SocketSpec s;
  s.name = std::move(name);
  s.data_kind = SocketKind::Shader;
  return s;
}

SocketSpec out(std::string name, SocketKind kind) {
  SocketSpec s;
  s.name = std::move(name);
  s.data_kind = kind;
  return s;
}

ParamSpec param_enum(std::string name, std::vector<std::string> variants,
                     const std::string& def) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::Enum;
  p.default_value = ParamValue::of_enum(def);
  p.enum_variants = std::move(variants);
  return p;
}

ParamSpec param_float(std::string name, double def,
                      std::optional<Range> range = std::nullopt,
                      std::optional<Range> stat = std::nullopt) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::Float;
  p.default_value = ParamValue::of_float(def);
  p.range = range;
  p.statistical_range = stat;
  return p;
}

ParamSpec param_int(std::string name, long long def,
                    std::optional<Range> range = std::nullopt) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::Int;
  p.default_value = ParamValue::of_int(def);
  p.range = range;
  return p;
}

ParamSpec param_bool(std::string name, bool def) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::Bool;
  p.default_value = ParamValue::of_bool(def);
  return p;
}

ParamSpec param_ramp(std::string name) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::ColorRamp;
  ColorRampValue ramp;
  ramp.interpolation = RampInterpolation::Linear;
  ramp.stops = {{0.0, {0.0, 0.0, 0.0, 1.0}}, {1.0, {1.0, 1.0, 1.0, 1.0}}};
  p.default_value = ParamValue::of_ramp(std::move(ramp));
  return p;
}

NodeTypeDef builtin(std::string type_id, BuiltinOp op) {
  NodeTypeDef def;
  def.type_id = std::move(type_id);
  def.body = BuiltinBody{op};
  return def;
}

}  // namespace

NodeTypeRegistry NodeTypeRegistry::builtins() {
  NodeTypeRegistry reg;

  {
    NodeTypeDef d = builtin("TexCoord", BuiltinOp::TexCoord);
    d.outputs = {out("UV", SocketKind::Vector), out("Object", SocketKind::Vector)};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("Mapping", BuiltinOp::Mapping);
    d.inputs = {
        in_vector("Vector"),
        in_vector("Location", Vec3{0.0, 0.0, 0.0}, Range{-2.0, 2.0}),
        // Rotation is Euler angles in radians, applied XYZ around the origin.
        in_vector("Rotation", Vec3{0.0, 0.0, 0.0}, Range{-3.141592653589793, 3.141592653589793}),
        in_vector("Scale", Vec3{1.0, 1.0, 1.0}, Range{-10.0, 10.0}),
    };
    d.outputs = {out("Vector", SocketKind::Vector)};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("TexNoise", BuiltinOp::TexNoise);
    d.inputs = {
        in_vector("Vector"),
        in_scalar("W", 0.0, std::nullopt, Range{-10.0, 10.0}),
        in_scalar("Scale", 5.0, std::nullopt, Range{0.1, 50.0}),
        in_scalar("Detail", 2.0, Range{0.0, 15.0}),
        in_scalar("Roughness", 0.5, Range{0.0, 1.0}),
        in_scalar("Distortion", 0.0, std::nullopt, Range{-5.0, 5.0}),
    };
    d.outputs = {out("Fac", SocketKind::Scalar), out("Color", SocketKind::Color)};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("TexVoronoi", BuiltinOp::TexVoronoi);
    d.inputs = {
        in_vector("Vector"),
        in_scalar("W", 0.0, std::nullopt, Range{-10.0, 10.0}),
        in_scalar("Scale", 5.0, std::nullopt, Range{0.1, 50.0}),
        in_scalar("Randomness", 1.0, Range{0.0, 1.0}),
    };
    d.outputs = {out("Distance", SocketKind::Scalar), out("Color", SocketKind::Color),
                 out("Position", SocketKind::Vector)};
    d.params = {
        param_enum("Feature", {"F1", "F2"}, "F1"),
        param_enum("Metric", {"EUCLIDEAN", "MANHATTAN", "CHEBYSHEV"}, "EUCLIDEAN"),
    };
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("TexChecker", BuiltinOp::TexChecker);
    d.inputs = {
        in_vector("Vector"),
        in_color("Color1", {0.8, 0.8, 0.8, 1.0}),
        in_color("Color2", {0.2, 0.2, 0.2, 1.0}),
        in_scalar("Scale", 5.0, std::nullopt, Range{0.1, 50.0}),
    };
    d.outputs = {out("Color", SocketKind::Color), out("Fac", SocketKind::Scalar)};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("TexBrick", BuiltinOp::TexBrick);
    d.inputs = {
        in_vector("Vector"),
        in_color("Color1", {0.8, 0.8, 0.8, 1.0}),
        in_color("Color2", {0.2, 0.2, 0.2, 1.0}),
        in_color("Mortar", {0.0, 0.0, 0.0, 1.0}),
        in_scalar("Scale", 5.0, std::nullopt, Range{0.1, 50.0}),
        in_scalar("MortarSize", 0.02, Range{0.0, 0.125}),
        in_scalar("MortarSmooth", 0.1, Range{0.0, 1.0}),
        in_scalar("Bias", 0.0, Range{-1.0, 1.0}),
        in_scalar("BrickWidth", 0.5, Range{0.01, 10.0}),
        in_scalar("RowHeight", 0.25, Range{0.01, 10.0}),
    };
    d.outputs = {out("Color", SocketKind::Color), out("Fac", SocketKind::Scalar)};
    d.params = {
        param_float("Offset", 0.5, Range{0.0, 1.0}),
        param_int("OffsetFrequency", 2, Range{1.0, 99.0}),
        param_float("Squash", 1.0, Range{0.0, 99.0}),
        param_int("SquashFrequency", 2, Range{1.0, 99.0}),
    };
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("TexWave", BuiltinOp::TexWave);
    d.inputs = {
        in_vector("Vector"),
        in_scalar("Scale", 5.0, std::nullopt, Range{0.1, 50.0}),
        in_scalar("Distortion", 0.0, std::nullopt, Range{-10.0, 10.0}),
        in_scalar("Detail", 2.0, Range{0.0, 15.0}),
        in_scalar("DetailScale", 1.0, std::nullopt, Range{0.0, 5.0}),
        in_scalar("DetailRoughness", 0.5, Range{0.0, 1.0}),
        in_scalar("PhaseOffset", 0.0, std::nullopt, Range{-10.0, 10.0}),
    };
    d.outputs = {out("Color", SocketKind::Color), out("Fac", SocketKind::Scalar)};
    d.params = {
        param_enum("WaveType", {"BANDS", "RINGS"}, "BANDS"),
        param_enum("Direction", {"X", "Y", "DIAGONAL"}, "X"),
        param_enum("Profile", {"SINE", "SAW", "TRIANGLE"}, "SINE"),
    };
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("TexGradient", BuiltinOp::TexGradient);
    d.inputs = {in_vector("Vector")};
    d.outputs = {out("Color", SocketKind::Color), out("Fac", SocketKind::Scalar)};
    d.params = {param_enum(
        "GradientType",
        {"LINEAR", "QUADRATIC", "DIAGONAL", "SPHERICAL", "RADIAL"}, "LINEAR")};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("TexMagic", BuiltinOp::TexMagic);
    d.inputs = {
        in_vector("Vector"),
        in_scalar("Scale", 5.0, std::nullopt, Range{0.1, 50.0}),
        in_scalar("Distortion", 1.0, std::nullopt, Range{-5.0, 5.0}),
    };
    d.outputs = {out("Color", SocketKind::Color), out("Fac", SocketKind::Scalar)};
    d.params = {param_int("Depth", 2, Range{0.0, 10.0})};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("Math", BuiltinOp::Math);
    d.inputs = {
        in_scalar("Value1", 0.5, std::nullopt, Range{-10.0, 10.0}),
        in_scalar("Value2", 0.5, std::nullopt, Range{-10.0, 10.0}),
    };
    d.outputs = {out("Value", SocketKind::Scalar)};
    d.params = {
        param_enum("Operation",
                   {"ADD", "SUBTRACT", "MULTIPLY", "DIVIDE", "POWER", "MINIMUM",
                    "MAXIMUM", "ABSOLUTE", "SINE", "COSINE", "FLOOR", "MODULO",
                    "SQRT", "FRACTION", "ROUND", "GREATER_THAN", "LESS_THAN"},
                   "ADD"),
        param_bool("UseClamp", false),
    };
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("VectorMath", BuiltinOp::VectorMath);
    d.inputs = {
        in_vector("Vector1", Vec3{0.0, 0.0, 0.0}, Range{-10.0, 10.0}),
        in_vector("Vector2", Vec3{0.0, 0.0, 0.0}, Range{-10.0, 10.0}),
        in_scalar("Scale", 1.0, std::nullopt, Range{-10.0, 10.0}),
    };
    d.outputs = {out("Vector", SocketKind::Vector), out("Value", SocketKind::Scalar)};
    d.params = {param_enum("Operation",
                           {"ADD", "SUBTRACT", "MULTIPLY", "DIVIDE", "SCALE",
                            "CROSS_PRODUCT", "DOT_PRODUCT", "DISTANCE", "LENGTH",
                            "NORMALIZE", "FLOOR", "FRACTION", "ABSOLUTE",
                            "MINIMUM", "MAXIMUM"},
                           "ADD")};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("MixColor", BuiltinOp::MixColor);
    d.inputs = {
        in_scalar("Fac", 0.5, Range{0.0, 1.0}),
        in_color("Color1", {0.5, 0.5, 0.5, 1.0}),
        in_color("Color2", {0.5, 0.5, 0.5, 1.0}),
    };
    d.outputs = {out("Color", SocketKind::Color)};
    d.params = {
        param_enum("BlendType",
                   {"MIX", "MULTIPLY", "SCREEN", "OVERLAY", "ADD", "SUBTRACT",
                    "DIFFERENCE", "DARKEN", "LIGHTEN", "DIVIDE"},
                   "MIX"),
        param_bool("UseClamp", false),
    };
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("ColorRamp", BuiltinOp::ColorRampNode);
    d.inputs = {in_scalar("Fac", 0.5, Range{0.0, 1.0})};
    d.outputs = {out("Color", SocketKind::Color), out("Alpha", SocketKind::Scalar)};
    d.params = {param_ramp("Ramp")};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("SeparateColor", BuiltinOp::SeparateColor);
    d.inputs = {in_color("Color", {0.8, 0.8, 0.8, 1.0})};
    d.outputs = {out("Red", SocketKind::Scalar), out("Green", SocketKind::Scalar),
                 out("Blue", SocketKind::Scalar)};
    d.params = {param_enum("Mode", {"RGB", "HSV"}, "RGB")};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("CombineColor", BuiltinOp::CombineColor);
    d.inputs = {
        in_scalar("Red", 0.0, Range{0.0, 1.0}),
        in_scalar("Green", 0.0, Range{0.0, 1.0}),
        in_scalar("Blue", 0.0, Range{0.0, 1.0}),
    };
    d.outputs = {out("Color", SocketKind::Color)};
    d.params = {param_enum("Mode", {"RGB", "HSV"}, "RGB")};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("HueSatVal", BuiltinOp::HueSatVal);
    d.inputs = {
        in_scalar("Hue", 0.5, Range{0.0, 1.0}),
        in_scalar("Saturation", 1.0, Range{0.0, 2.0}),
        in_scalar("Value", 1.0, Range{0.0, 2.0}),
        in_scalar("Fac", 1.0, Range{0.0, 1.0}),
        in_color("Color", {0.8, 0.8, 0.8, 1.0}),
    };
    d.outputs = {out("Color", SocketKind::Color)};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("Invert", BuiltinOp::Invert);
    d.inputs = {
        in_scalar("Fac", 1.0, Range{0.0, 1.0}),
        in_color("Color", {0.0, 0.0, 0.0, 1.0}),
    };
    d.outputs = {out("Color", SocketKind::Color)};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("Bump", BuiltinOp::Bump);
    d.inputs = {
        in_scalar("Strength", 1.0, Range{0.0, 1.0}),
        in_scalar("Distance", 0.1, Range{0.0, 1.0}),
        in_scalar("Height", 1.0),
    };
    d.outputs = {out("Normal", SocketKind::Vector)};
    d.params = {param_bool("Invert", false)};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("PrincipledBSDF", BuiltinOp::PrincipledBsdf);
    d.inputs = {
        in_color("BaseColor", {0.8, 0.8, 0.8, 1.0}),
        in_scalar("Metallic", 0.0, Range{0.0, 1.0}),
        in_scalar("Roughness", 0.5, Range{0.0, 1.0}),
        // Unconnected Normal falls back to the flat geometric normal, not a
        // stored default, so it carries no default value.
        in_vector("Normal"),
    };
    d.outputs = {out("BSDF", SocketKind::Shader)};
    reg.register_type(std::move(d));
  }
  {
    NodeTypeDef d = builtin("MaterialOutput", BuiltinOp::MaterialOutput);
    d.inputs = {in_shader("Surface")};
    d.is_material_output = true;
    reg.register_type(std::move(d));
  }

  return reg;
}

}  // namespace matforge
