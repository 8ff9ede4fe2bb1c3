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

#include "fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "matforge/dsl.hpp"

namespace testutil {

using namespace matforge;

// ---------------------------------------------------------------------------
// Fixture corpus

namespace {

const std::map<std::string, std::string>& fixture_table() {
  static const std::map<std::string, std::string> table = {
      {"brick", R"(coord = node("TexCoord", "coord")
brick = node("TexBrick", "brick")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(coord.UV, brick.Vector)
link(brick.Color, bsdf.BaseColor)
link(bsdf.BSDF, out.Surface)
brick.Scale = 4
brick.Color1 = color(0.55, 0.2, 0.15, 1)
brick.Color2 = color(0.45, 0.18, 0.12, 1)
)"},
      {"checker", R"(coord = node("TexCoord", "coord")
check = node("TexChecker", "check")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(coord.UV, check.Vector)
link(check.Color, bsdf.BaseColor)
link(bsdf.BSDF, out.Surface)
check.Scale = 6
)"},
      {"noise", R"(coord = node("TexCoord", "coord")
noise = node("TexNoise", "noise")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(coord.UV, noise.Vector)
link(noise.Color, bsdf.BaseColor)
link(bsdf.BSDF, out.Surface)
noise.Scale = 8
)"},
      {"gradient", R"(grad = node("TexGradient", "grad")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(grad.Color, bsdf.BaseColor)
link(bsdf.BSDF, out.Surface)
)"},
      {"voronoi", R"(vor = node("TexVoronoi", "vor")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(vor.Color, bsdf.BaseColor)
link(bsdf.BSDF, out.Surface)
vor.Scale = 7
)"},
      {"wave", R"(wave = node("TexWave", "wave")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(wave.Color, bsdf.BaseColor)
link(bsdf.BSDF, out.Surface)
wave.Scale = 6
)"},
      {"magic", R"(magic = node("TexMagic", "magic")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(magic.Color, bsdf.BaseColor)
link(bsdf.BSDF, out.Surface)
)"},
      {"rampnoise", R"(noise = node("TexNoise", "noise")
ramp = node("ColorRamp", "ramp")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(noise.Fac, ramp.Fac)
link(ramp.Color, bsdf.BaseColor)
link(bsdf.BSDF, out.Surface)
noise.Scale = 6
ramp.Ramp = ramp("LINEAR", stop(0.1, color(0.1, 0.12, 0.3, 1)), stop(0.55, color(0.75, 0.6, 0.35, 1)), stop(0.95, color(0.95, 0.95, 0.9, 1)))
)"},
      {"mixed", R"(check = node("TexChecker", "check")
noise = node("TexNoise", "noise")
mix = node("MixColor", "mix")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(check.Color, mix.Color1)
link(noise.Color, mix.Color2)
link(mix.Color, bsdf.BaseColor)
link(bsdf.BSDF, out.Surface)
check.Scale = 4
noise.Scale = 10
mix.Fac = 0.35
)"},
      {"bumpbrick", R"(brick = node("TexBrick", "brick")
bump = node("Bump", "bump")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(brick.Color, bsdf.BaseColor)
link(brick.Fac, bump.Height)
link(bump.Normal, bsdf.Normal)
link(bsdf.BSDF, out.Surface)
brick.Scale = 3
brick.Color1 = color(0.6, 0.35, 0.2, 1)
brick.Color2 = color(0.5, 0.3, 0.18, 1)
)"},
      {"flat", R"(bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(bsdf.BSDF, out.Surface)
)"},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> all;
    for (const auto& [name, text] : fixture_table()) all.push_back(name);
    return all;
  }();
  return names;
}

const std::vector<std::string>& textured_fixture_names() {
  static const std::vector<std::string> names = {
      "brick", "checker", "noise",     "gradient", "voronoi",
      "wave",  "magic",   "rampnoise", "mixed",    "bumpbrick",
  };
  return names;
}

const std::string& fixture_source(const std::string& name) {
  auto it = fixture_table().find(name);
  if (it == fixture_table().end()) {
    throw std::runtime_error("unknown fixture: " + name);
  }
  return it->second;
}

MaterialGraph fixture_graph(const std::string& name, const NodeTypeRegistry& registry) {
  return parse(fixture_source(name), registry);
}

// ---------------------------------------------------------------------------
// Random values and graphs

ParamValue random_param_value(Pcg32& rng, const ParamSpec& spec, const ParamValue& avoid) {
  auto draw = [&]() -> ParamValue {
    switch (spec.kind) {
      case ParamKind::Float: {
        const auto range = spec.range ? *spec.range
                                      : std::pair<double, double>{
                                            spec.default_value.as_float() - 3.0,
                                            spec.default_value.as_float() + 3.0};
        return ParamValue::of_float(rng.uniform(range.first, range.second));
      }
      case ParamKind::Int: {
        const auto range = spec.range ? *spec.range : std::pair<double, double>{-8.0, 8.0};
        const int lo = static_cast<int>(std::ceil(range.first));
        const int hi = static_cast<int>(std::floor(range.second));
        long long v = rng.uniform_int(lo, hi);
        if (ParamValue::of_int(v) == avoid && hi > lo) {
          v = (v == hi) ? lo : v + 1;
        }
        return ParamValue::of_int(v);
      }
      case ParamKind::Vector: {
        const auto range = spec.range ? *spec.range : std::pair<double, double>{-2.0, 2.0};
        return ParamValue::of_vector({rng.uniform(range.first, range.second),
                                      rng.uniform(range.first, range.second),
                                      rng.uniform(range.first, range.second)});
      }
      case ParamKind::Color:
        return ParamValue::of_color(
            hsv_to_rgb({rng.uniform(), rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)}));
      case ParamKind::ColorRamp: {
        ColorRampValue ramp;
        const int stops = rng.uniform_int(2, 4);
        for (int i = 0; i < stops; ++i) {
          ramp.stops.push_back(
              {rng.uniform(),
               clamped({rng.uniform(), rng.uniform(), rng.uniform(), 1.0})});
        }
        std::sort(ramp.stops.begin(), ramp.stops.end(),
                  [](const RampStop& a, const RampStop& b) { return a.position < b.position; });
        const RampInterpolation kinds[] = {RampInterpolation::Linear,
                                           RampInterpolation::Constant,
                                           RampInterpolation::Ease};
        ramp.interpolation = kinds[rng.uniform_int(0, 2)];
        return ParamValue::of_ramp(std::move(ramp));
      }
      case ParamKind::Enum: {
        std::vector<std::string> candidates;
        for (const std::string& variant : spec.enum_variants) {
          if (!(ParamValue::of_enum(variant) == avoid)) candidates.push_back(variant);
        }
        if (candidates.empty()) return avoid;
        const int i = rng.uniform_int(0, static_cast<int>(candidates.size()) - 1);
        return ParamValue::of_enum(candidates[i]);
      }
      case ParamKind::Bool:
        return ParamValue::of_bool(!avoid.as_bool());
    }
    return spec.default_value;
  };

  for (int attempt = 0; attempt < 16; ++attempt) {
    ParamValue value = draw();
    if (!(value == avoid)) return value;
  }
  return draw();  // single-valued spec; caller skips the override
}

namespace {

// Decorates `node` with random overrides drawn from its type definition.
void randomize_node(Pcg32& rng, const NodeTypeDef& def, Node& node,
                    const MaterialGraph& graph) {
  for (const ParamSpec& spec : def.params) {
    if (!rng.bernoulli(0.45)) continue;
    ParamValue value = random_param_value(rng, spec, spec.default_value);
    if (value == spec.default_value) continue;
    node.param_overrides[spec.name] = std::move(value);
  }
  for (const SocketSpec& socket : def.inputs) {
    if (!socket.default_value) continue;
    if (graph.has_edge_into(node.node_id, socket.name)) continue;
    if (!rng.bernoulli(0.3)) continue;
    ParamSpec as_param;
    as_param.name = socket.name;
    as_param.kind = socket.default_value->kind();
    as_param.default_value = *socket.default_value;
    as_param.range = socket.range;
    as_param.statistical_range = socket.statistical_range;
    ParamValue value = random_param_value(rng, as_param, *socket.default_value);
    if (value == *socket.default_value) continue;
    node.input_defaults[socket.name] = std::move(value);
  }
}

const char* kTextureTypes[] = {"TexNoise", "TexVoronoi", "TexChecker", "TexBrick",
                               "TexWave",  "TexGradient", "TexMagic"};

struct GraphBuilder {
  MaterialGraph graph;
  int counter = 0;

  std::string add(const std::string& type_id) {
    std::string id = "n" + std::to_string(counter++);
    graph.nodes.push_back({id, type_id, {}, {}});
    return id;
  }
  void link(const std::string& from_node, const std::string& from_socket,
            const std::string& to_node, const std::string& to_socket) {
    graph.edges.push_back({{from_node, from_socket}, {to_node, to_socket}});
  }
};

}  // namespace

MaterialGraph random_graph(Pcg32& rng, const NodeTypeRegistry& registry) {
  GraphBuilder b;
  const std::string out = b.add("MaterialOutput");
  b.graph.output_node = out;
  const std::string bsdf = b.add("PrincipledBSDF");
  b.link(bsdf, "BSDF", out, "Surface");

  std::string vector_src, vector_socket;
  if (rng.bernoulli(0.5)) {
    const std::string coord = b.add("TexCoord");
    vector_src = coord;
    vector_socket = "UV";
    if (rng.bernoulli(0.5)) {
      const std::string mapping = b.add("Mapping");
      b.link(coord, "UV", mapping, "Vector");
      vector_src = mapping;
      vector_socket = "Vector";
    }
  }

  auto add_texture = [&]() {
    const std::string id = b.add(kTextureTypes[rng.uniform_int(0, 6)]);
    if (!vector_src.empty() && rng.bernoulli(0.8)) {
      b.link(vector_src, vector_socket, id, "Vector");
    }
    return id;
  };

  const std::string t1 = add_texture();
  std::string color_src = t1, color_socket = "Color";
  if (rng.bernoulli(0.5)) {
    const std::string t2 = add_texture();
    const std::string mix = b.add("MixColor");
    b.link(t1, "Color", mix, "Color1");
    b.link(t2, "Color", mix, "Color2");
    color_src = mix;
    color_socket = "Color";
  }
  if (rng.bernoulli(0.4)) {
    switch (rng.uniform_int(0, 2)) {
      case 0: {
        const std::string ramp = b.add("ColorRamp");
        b.link(t1, "Fac", ramp, "Fac");
        color_src = ramp;
        color_socket = "Color";
        break;
      }
      case 1: {
        const std::string hsv = b.add("HueSatVal");
        b.link(color_src, color_socket, hsv, "Color");
        color_src = hsv;
        color_socket = "Color";
        break;
      }
      default: {
        const std::string inv = b.add("Invert");
        b.link(color_src, color_socket, inv, "Color");
        color_src = inv;
        color_socket = "Color";
        break;
      }
    }
  }
  b.link(color_src, color_socket, bsdf, "BaseColor");

  if (rng.bernoulli(0.3)) {
    std::string src = t1, socket = "Fac";
    const int chain = rng.uniform_int(1, 2);
    for (int i = 0; i < chain; ++i) {
      const std::string math = b.add("Math");
      b.link(src, socket, math, "Value1");
      src = math;
      socket = "Value";
    }
    b.link(src, socket, bsdf, "Roughness");
  }
  if (rng.bernoulli(0.25)) {
    const std::string bump = b.add("Bump");
    b.link(t1, "Fac", bump, "Height");
    b.link(bump, "Normal", bsdf, "Normal");
  }

  for (Node& node : b.graph.nodes) {
    randomize_node(rng, *registry.find(node.type_id), node, b.graph);
  }
  return b.graph;
}

// ---------------------------------------------------------------------------
// Group registries

namespace {

SocketSpec group_scalar_input(const std::string& name, double def,
                              std::optional<std::pair<double, double>> range,
                              std::optional<std::pair<double, double>> stat) {
  SocketSpec s;
  s.name = name;
  s.data_kind = SocketKind::Scalar;
  s.default_value = ParamValue::of_float(def);
  s.range = range;
  s.statistical_range = stat;
  return s;
}

SocketSpec group_vector_input(const std::string& name) {
  SocketSpec s;
  s.name = name;
  s.data_kind = SocketKind::Vector;
  return s;
}

SocketSpec group_output(const std::string& name, SocketKind kind) {
  SocketSpec s;
  s.name = name;
  s.data_kind = kind;
  return s;
}

ColorRampValue tan_ramp() {
  ColorRampValue ramp;
  ramp.stops = {{0.0, {0.08, 0.1, 0.25, 1.0}},
                {0.6, {0.7, 0.55, 0.3, 1.0}},
                {1.0, {0.95, 0.93, 0.85, 1.0}}};
  return ramp;
}

NodeTypeDef make_group_noise() {
  NodeTypeDef def;
  def.type_id = "GroupNoise";
  def.inputs = {group_vector_input("Vector"),
                group_scalar_input("Scale", 5.0, std::nullopt,
                                   std::pair<double, double>{0.1, 50.0})};
  def.outputs = {group_output("Color", SocketKind::Color)};

  GroupBody body;
  body.inner.nodes = {
      {"noise", "TexNoise", {}, {}},
      {"ramp", "ColorRamp", {{"Ramp", ParamValue::of_ramp(tan_ramp())}}, {}},
  };
  body.inner.edges = {{{"noise", "Fac"}, {"ramp", "Fac"}}};
  body.input_bindings = {{"Vector", {{"noise", "Vector"}}}, {"Scale", {{"noise", "Scale"}}}};
  body.output_bindings = {{"Color", {"ramp", "Color"}}};
  def.body = std::move(body);
  return def;
}

NodeTypeDef make_group_nested() {
  NodeTypeDef def;
  def.type_id = "GroupNested";
  def.inputs = {group_scalar_input("Scale", 5.0, std::nullopt,
                                   std::pair<double, double>{0.1, 50.0})};
  def.outputs = {group_output("Color", SocketKind::Color)};

  GroupBody body;
  body.inner.nodes = {
      {"g", "GroupNoise", {}, {}},
      {"inv", "Invert", {}, {}},
  };
  body.inner.edges = {{{"g", "Color"}, {"inv", "Color"}}};
  body.input_bindings = {{"Scale", {{"g", "Scale"}}}};
  body.output_bindings = {{"Color", {"inv", "Color"}}};
  def.body = std::move(body);
  return def;
}

NodeTypeDef make_group_wide() {
  NodeTypeDef def;
  def.type_id = "GroupWide";
  def.inputs = {group_scalar_input("Scale", 5.0, std::nullopt,
                                   std::pair<double, double>{0.1, 50.0})};
  def.outputs = {group_output("Color", SocketKind::Color)};

  GroupBody body;
  body.inner.nodes = {
      {"coordg", "TexCoord", {}, {}},
      {"mapg", "Mapping", {}, {{"Scale", ParamValue::of_vector({2.0, 1.5, 1.0})}}},
      {"check", "TexChecker", {}, {}},
      {"hsv", "HueSatVal", {}, {{"Saturation", ParamValue::of_float(1.4)}}},
  };
  body.inner.edges = {{{"coordg", "UV"}, {"mapg", "Vector"}},
                      {{"mapg", "Vector"}, {"check", "Vector"}},
                      {{"check", "Color"}, {"hsv", "Color"}}};
  body.input_bindings = {{"Scale", {{"check", "Scale"}}}};
  body.output_bindings = {{"Color", {"hsv", "Color"}}};
  def.body = std::move(body);
  return def;
}

}  // namespace

NodeTypeRegistry registry_with_groups() {
  NodeTypeRegistry reg = NodeTypeRegistry::builtins();
  reg.register_type(make_group_noise());
  reg.register_type(make_group_nested());
  reg.register_type(make_group_wide());
  return reg;
}

MaterialGraph random_messy_graph(Pcg32& rng, const NodeTypeRegistry& registry,
                                 int* unreachable_count) {
  MaterialGraph graph = random_graph(rng, registry);
  GraphBuilder b;
  b.graph = std::move(graph);
  b.counter = static_cast<int>(b.graph.nodes.size()) + 10;

  // A group instance mixed into the base-color path keeps groups reachable.
  if (rng.bernoulli(0.7)) {
    const char* kGroupTypes[] = {"GroupNoise", "GroupNested", "GroupWide"};
    const std::string inst = b.add(kGroupTypes[rng.uniform_int(0, 2)]);
    if (rng.bernoulli(0.5)) {
      b.graph.find_node(inst)->input_defaults["Scale"] =
          ParamValue::of_float(rng.uniform(2.0, 9.0));
    }
    const std::string mix = b.add("MixColor");

    // Re-route the edge currently feeding BaseColor through the mixer.
    std::string bsdf_id;
    for (const Node& node : b.graph.nodes) {
      if (node.type_id == "PrincipledBSDF") bsdf_id = node.node_id;
    }
    for (Edge& edge : b.graph.edges) {
      if (edge.to.node_id == bsdf_id && edge.to.socket == "BaseColor") {
        edge.to = {mix, "Color1"};
        break;
      }
    }
    b.link(inst, "Color", mix, "Color2");
    b.link(mix, "Color", bsdf_id, "BaseColor");
  }

  // Unreachable clutter: a chain hanging off nothing, sometimes fed from the
  // live part (an edge into a dead node does not make it live).
  const int extra = rng.uniform_int(1, 5);
  std::string prev;
  for (int i = 0; i < extra; ++i) {
    std::string id;
    if (rng.bernoulli(0.2)) {
      id = b.add("GroupNoise");
    } else {
      id = b.add(kTextureTypes[rng.uniform_int(0, 6)]);
    }
    randomize_node(rng, *registry.find(b.graph.find_node(id)->type_id),
                   *b.graph.find_node(id), b.graph);
    if (!prev.empty() && rng.bernoulli(0.6)) {
      b.link(prev, "Color", id, "Vector");
    }
    prev = id;
  }
  if (rng.bernoulli(0.4)) {
    // Feed the first dead node from a live texture output.
    std::string live;
    for (const Node& node : b.graph.nodes) {
      if (node.type_id == std::string("PrincipledBSDF")) continue;
      for (const Edge& edge : b.graph.edges) {
        if (edge.from.node_id == node.node_id && edge.to.node_id != node.node_id) {
          live = node.node_id;
          break;
        }
      }
      if (!live.empty()) break;
    }
    if (!live.empty() && !prev.empty() &&
        !b.graph.has_edge_into(prev, "W")) {
      const NodeTypeDef* def = registry.find(b.graph.find_node(prev)->type_id);
      const NodeTypeDef* live_def = registry.find(b.graph.find_node(live)->type_id);
      if (def->find_input("W") && !live_def->outputs.empty() &&
          live_def->outputs[0].data_kind != SocketKind::Shader) {
        b.link(live, live_def->outputs[0].name, prev, "W");
      }
    }
  }
  if (unreachable_count) *unreachable_count = extra;
  return b.graph;
}

// ---------------------------------------------------------------------------
// One-knob material

NodeTypeRegistry registry_with_knob() {
  NodeTypeRegistry reg = NodeTypeRegistry::builtins();

  NodeTypeDef def;
  def.type_id = "KnobMat";
  def.inputs = {group_scalar_input("Fac", 0.3, std::pair<double, double>{0.0, 1.0},
                                   std::nullopt)};
  def.outputs = {group_output("BSDF", SocketKind::Shader)};

  GroupBody body;
  body.inner.nodes = {
      {"mix",
       "MixColor",
       {},
       {{"Color1", ParamValue::of_color({0.0, 0.0, 0.0, 1.0})},
        {"Color2", ParamValue::of_color({1.0, 1.0, 1.0, 1.0})}}},
      {"kb", "PrincipledBSDF", {}, {}},
  };
  body.inner.edges = {{{"mix", "Color"}, {"kb", "BaseColor"}}};
  body.input_bindings = {{"Fac", {{"mix", "Fac"}}}};
  body.output_bindings = {{"BSDF", {"kb", "BSDF"}}};
  def.body = std::move(body);
  reg.register_type(std::move(def));
  return reg;
}

MaterialGraph knob_graph(double fac) {
  MaterialGraph graph;
  Node knob{"knob", "KnobMat", {}, {}};
  if (fac >= 0.0) knob.input_defaults["Fac"] = ParamValue::of_float(fac);
  graph.nodes.push_back(std::move(knob));
  graph.nodes.push_back({"out", "MaterialOutput", {}, {}});
  graph.edges.push_back({{"knob", "BSDF"}, {"out", "Surface"}});
  graph.output_node = "out";
  return graph;
}

// ---------------------------------------------------------------------------
// Statistics

double ks_uniform_pvalue(std::vector<double> samples) {
  if (samples.empty()) return 1.0;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = std::clamp(samples[i], 0.0, 1.0);
    const double hi = (static_cast<double>(i) + 1.0) / n - cdf;
    const double lo = cdf - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  // Asymptotic Kolmogorov distribution with the small-sample correction.
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    p += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-12) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

namespace {

std::vector<double> ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> rank(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mean;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("spearman: need two equal-length lists");
  }
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  return cov / std::sqrt(va * vb);
}

// ---------------------------------------------------------------------------
// Filesystem

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("matforge_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool images_identical(const TextureImage& a, const TextureImage& b) {
  return a.same_shape(b) && a.data == b.data;
}

}  // namespace testutil
