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

#include "matforge/render.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <variant>

#include "matforge/noise.hpp"
#include "matforge/parallel.hpp"
#include "matforge/rng.hpp"

namespace matforge {

double mean_luminance(const TextureImage& image) {
  if (image.pixel_count() == 0) return 0.0;
  double sum = 0.0;
  const std::size_t n = image.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const float* px = image.data.data() + i * 3;
    sum += 0.2126 * px[0] + 0.7152 * px[1] + 0.0722 * px[2];
  }
  return sum / static_cast<double>(n);
}

Vec3 channel_variance(const TextureImage& image) {
  const std::size_t n = image.pixel_count();
  if (n == 0) return {};
  double mean[3] = {0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) mean[c] += image.data[i * 3 + c];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  double var[3] = {0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      const double d = image.data[i * 3 + c] - mean[c];
      var[c] += d * d;
    }
  }
  return {var[0] / n, var[1] / n, var[2] / n};
}

double max_abs_difference(const TextureImage& a, const TextureImage& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("max_abs_difference: image shapes differ");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    worst = std::max(worst, std::fabs(static_cast<double>(a.data[i]) - b.data[i]));
  }
  return worst;
}

RenderConfig RenderConfig::flat_lighting(int resolution, std::uint64_t seed) {
  RenderConfig config;
  config.resolution = resolution;
  config.seed = seed;
  config.light_position = {0.5, 0.5, 1000.0};
  config.light_intensity = 1.0e6;
  return config;
}

namespace {

// ---------------------------------------------------------------------------
// Evaluation values

struct ShaderSample {
  Color4 base_color{0.0, 0.0, 0.0, 1.0};
  double roughness = 1.0;
  double metallic = 0.0;
  Vec3 normal{0.0, 0.0, 1.0};
};

using Value = std::variant<double, Vec3, Color4, ShaderSample>;

double to_scalar(const Value& v, const std::string& node_id) {
  if (const double* s = std::get_if<double>(&v)) return *s;
  if (const Vec3* vec = std::get_if<Vec3>(&v)) return (vec->x + vec->y + vec->z) / 3.0;
  if (const Color4* c = std::get_if<Color4>(&v)) {
    return 0.2126 * c->r + 0.7152 * c->g + 0.0722 * c->b;
  }
  throw EvalError("shader value used as scalar at node '" + node_id + "'");
}

Vec3 to_vector(const Value& v, const std::string& node_id) {
  if (const double* s = std::get_if<double>(&v)) return {*s, *s, *s};
  if (const Vec3* vec = std::get_if<Vec3>(&v)) return *vec;
  if (const Color4* c = std::get_if<Color4>(&v)) return {c->r, c->g, c->b};
  throw EvalError("shader value used as vector at node '" + node_id + "'");
}

Color4 to_color(const Value& v, const std::string& node_id) {
  if (const double* s = std::get_if<double>(&v)) return {*s, *s, *s, 1.0};
  if (const Vec3* vec = std::get_if<Vec3>(&v)) return {vec->x, vec->y, vec->z, 1.0};
  if (const Color4* c = std::get_if<Color4>(&v)) return *c;
  throw EvalError("shader value used as color at node '" + node_id + "'");
}

ShaderSample to_shader(const Value& v, const std::string& node_id) {
  if (const ShaderSample* s = std::get_if<ShaderSample>(&v)) return *s;
  throw EvalError("non-shader value used as shader at node '" + node_id + "'");
}

Value value_from_param(const ParamValue& p, const std::string& node_id) {
  switch (p.kind()) {
    case ParamKind::Float: return p.as_float();
    case ParamKind::Int: return static_cast<double>(p.as_int());
    case ParamKind::Vector: return p.as_vector();
    case ParamKind::Color: return p.as_color();
    case ParamKind::Bool: return p.as_bool() ? 1.0 : 0.0;
    default:
      throw EvalError("parameter kind has no socket value at node '" + node_id + "'");
  }
}

// ---------------------------------------------------------------------------
// Compiled plan. Node groups are flattened at compile time; the graph itself
// is never rewritten, so render(G) trivially matches render(expand(G)).

struct InputSlot {
  enum class Source {
    Edge,        // another plan node's output
    Constant,    // socket default or explicit override
    ImplicitUV,  // unconnected Vector input of a texture/mapping node
    GeomNormal,  // unconnected Normal input: flat geometric normal
    Missing,     // unconnected input with no default (Shader sockets)
  };
  Source source = Source::Missing;
  int src_node = -1;
  int src_socket = -1;
  ParamValue constant;
};

struct PlanNode {
  BuiltinOp op = BuiltinOp::TexCoord;
  const NodeTypeDef* def = nullptr;
  std::string node_id;  // qualified with group-instance path for diagnostics
  std::vector<InputSlot> inputs;
  std::vector<ParamValue> params;
  int memo_base = 0;
};

struct EvalPlan {
  std::vector<PlanNode> nodes;
  int memo_slots = 0;
  // MaterialOutput's Surface input, when the graph has a usable output node.
  InputSlot surface;
};

struct GraphCtx {
  const MaterialGraph* graph = nullptr;
  std::string prefix;
  // Group-instance context: the enclosing graph, the instance node in it,
  // and the group's type definition.
  GraphCtx* parent = nullptr;
  const Node* instance = nullptr;
  const NodeTypeDef* instance_def = nullptr;

  std::map<std::string, int> builtin_index;           // node_id -> plan node
  std::map<std::string, std::unique_ptr<GraphCtx>> groups;  // node_id -> inner ctx
};

class Compiler {
 public:
  Compiler(const NodeTypeRegistry& registry) : registry_(registry) {}

  EvalPlan compile(const MaterialGraph& graph) {
    root_ = std::make_unique<GraphCtx>();
    root_->graph = &graph;
    allocate(*root_);
    wire(*root_);
    for (PlanNode& node : plan_.nodes) {
      node.memo_base = plan_.memo_slots;
      plan_.memo_slots += static_cast<int>(node.def->outputs.size());
    }
    if (const Node* out = graph.find_node(graph.output_node)) {
      const NodeTypeDef* def = find_def(*out);
      if (def->is_material_output && !def->inputs.empty()) {
        plan_.surface = resolve_input(*root_, *out, *def, def->inputs[0]);
      }
    }
    return std::move(plan_);
  }

  // Plan location of an output socket, descending through group bindings.
  std::pair<int, int> resolve_output_of(const std::string& node_id,
                                        const std::string& socket) {
    return resolve_output(*root_, node_id, socket);
  }

  // compile() must be called first; contexts stay alive with the compiler.
  GraphCtx& root() { return *root_; }

 private:
  const NodeTypeDef* find_def(const Node& node) const {
    const NodeTypeDef* def = registry_.find(node.type_id);
    if (!def) {
      throw EvalError("unknown node type '" + node.type_id + "' at node '" +
                      node.node_id + "'");
    }
    return def;
  }

  void allocate(GraphCtx& ctx) {
    for (const Node& node : ctx.graph->nodes) {
      const NodeTypeDef* def = find_def(node);
      if (def->is_group()) {
        auto inner = std::make_unique<GraphCtx>();
        inner->graph = &def->group().inner;
        inner->prefix = ctx.prefix + node.node_id + ".";
        inner->parent = &ctx;
        inner->instance = &node;
        inner->instance_def = def;
        allocate(*inner);
        ctx.groups.emplace(node.node_id, std::move(inner));
      } else {
        PlanNode plan_node;
        plan_node.op = def->builtin_op();
        plan_node.def = def;
        plan_node.node_id = ctx.prefix + node.node_id;
        ctx.builtin_index.emplace(node.node_id, static_cast<int>(plan_.nodes.size()));
        plan_.nodes.push_back(std::move(plan_node));
      }
    }
  }

  std::pair<int, int> resolve_output(GraphCtx& ctx, const std::string& node_id,
                                     const std::string& socket) {
    const Node* node = ctx.graph->find_node(node_id);
    if (!node) throw EvalError("edge references missing node '" + node_id + "'");
    const NodeTypeDef* def = find_def(*node);
    if (def->is_group()) {
      auto binding = def->group().output_bindings.find(socket);
      if (binding == def->group().output_bindings.end()) {
        throw EvalError("group '" + def->type_id + "' has no output binding for '" +
                        socket + "'");
      }
      return resolve_output(*ctx.groups.at(node_id), binding->second.node_id,
                            binding->second.socket);
    }
    const SocketSpec* out = def->find_output(socket);
    if (!out) {
      throw EvalError("node '" + node_id + "' has no output socket '" + socket + "'");
    }
    const int socket_index =
        static_cast<int>(out - def->outputs.data());
    return {ctx.builtin_index.at(node_id), socket_index};
  }

  // Resolution of a group instance's input as seen from its enclosing graph.
  // Returns nullopt when unconnected with no stored default, in which case
  // the inner socket's own fallback applies.
  std::optional<InputSlot> resolve_instance_input(GraphCtx& inner,
                                                  const std::string& group_input) {
    GraphCtx& outer = *inner.parent;
    const Node& instance = *inner.instance;
    if (const Edge* edge = outer.graph->edge_into(instance.node_id, group_input)) {
      InputSlot slot;
      slot.source = InputSlot::Source::Edge;
      std::tie(slot.src_node, slot.src_socket) =
          resolve_output(outer, edge->from.node_id, edge->from.socket);
      return slot;
    }
    if (auto it = instance.input_defaults.find(group_input);
        it != instance.input_defaults.end()) {
      InputSlot slot;
      slot.source = InputSlot::Source::Constant;
      slot.constant = it->second;
      return slot;
    }
    const SocketSpec* spec = inner.instance_def->find_input(group_input);
    if (spec && spec->default_value) {
      InputSlot slot;
      slot.source = InputSlot::Source::Constant;
      slot.constant = *spec->default_value;
      return slot;
    }
    return std::nullopt;
  }

  InputSlot resolve_input(GraphCtx& ctx, const Node& node, const NodeTypeDef& def,
                          const SocketSpec& socket) {
    if (const Edge* edge = ctx.graph->edge_into(node.node_id, socket.name)) {
      InputSlot slot;
      slot.source = InputSlot::Source::Edge;
      std::tie(slot.src_node, slot.src_socket) =
          resolve_output(ctx, edge->from.node_id, edge->from.socket);
      return slot;
    }
    // A socket bound to a group input takes what the instance provides,
    // shadowing the inner node's stored default.
    if (ctx.instance_def) {
      for (const auto& [group_input, targets] : ctx.instance_def->group().input_bindings) {
        for (const SocketRef& ref : targets) {
          if (ref.node_id == node.node_id && ref.socket == socket.name) {
            if (auto slot = resolve_instance_input(ctx, group_input)) return *slot;
          }
        }
      }
    }
    if (auto it = node.input_defaults.find(socket.name);
        it != node.input_defaults.end()) {
      InputSlot slot;
      slot.source = InputSlot::Source::Constant;
      slot.constant = it->second;
      return slot;
    }
    if (socket.default_value) {
      InputSlot slot;
      slot.source = InputSlot::Source::Constant;
      slot.constant = *socket.default_value;
      return slot;
    }
    InputSlot slot;
    if (socket.data_kind == SocketKind::Vector) {
      const bool wants_geometry_normal =
          !def.is_group() && def.builtin_op() == BuiltinOp::PrincipledBsdf &&
          socket.name == "Normal";
      slot.source = wants_geometry_normal ? InputSlot::Source::GeomNormal
                                          : InputSlot::Source::ImplicitUV;
    } else {
      slot.source = InputSlot::Source::Missing;
    }
    return slot;
  }

  void wire(GraphCtx& ctx) {
    for (const Node& node : ctx.graph->nodes) {
      const NodeTypeDef* def = find_def(node);
      if (def->is_group()) {
        wire(*ctx.groups.at(node.node_id));
        continue;
      }
      PlanNode& plan_node = plan_.nodes[ctx.builtin_index.at(node.node_id)];
      plan_node.inputs.reserve(def->inputs.size());
      for (const SocketSpec& socket : def->inputs) {
        plan_node.inputs.push_back(resolve_input(ctx, node, *def, socket));
      }
      plan_node.params.reserve(def->params.size());
      for (const ParamSpec& param : def->params) {
        auto it = node.param_overrides.find(param.name);
        plan_node.params.push_back(it != node.param_overrides.end()
                                       ? it->second
                                       : param.default_value);
      }
    }
  }

  const NodeTypeRegistry& registry_;
  EvalPlan plan_;
  std::unique_ptr<GraphCtx> root_;
};

// ---------------------------------------------------------------------------
// Per-thread evaluator: demand-driven recursion with per-query memoization.

double safe_divide(double a, double b) { return b != 0.0 ? a / b : 0.0; }

double fract(double v) { return v - std::floor(v); }

double smoothstep_unit(double edge, double x) {
  if (edge <= 0.0) return x > 0.0 ? 1.0 : 0.0;
  const double t = std::clamp(x / edge, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

// Per-node-family seed streams. Derived from the render seed only: noise
// fields depend on position and parameters, never on node identity, so
// pruning, group expansion, and renames leave renders bit-identical.
struct SeedBank {
  std::uint64_t noise;
  std::uint64_t noise_g;
  std::uint64_t noise_b;
  std::uint64_t distort_x;
  std::uint64_t distort_y;
  std::uint64_t distort_z;
  std::uint64_t voronoi;
  std::uint64_t brick;
  std::uint64_t wave;

  explicit SeedBank(std::uint64_t seed)
      : noise(derive_seed(seed, 1)),
        noise_g(derive_seed(seed, 2)),
        noise_b(derive_seed(seed, 3)),
        distort_x(derive_seed(seed, 4)),
        distort_y(derive_seed(seed, 5)),
        distort_z(derive_seed(seed, 6)),
        voronoi(derive_seed(seed, 7)),
        brick(derive_seed(seed, 8)),
        wave(derive_seed(seed, 9)) {}
};

class Evaluator {
 public:
  Evaluator(const EvalPlan& plan, const RenderConfig& config)
      : plan_(plan),
        config_(config),
        seeds_(config.seed),
        stamps_(plan.memo_slots, 0),
        memo_(plan.memo_slots) {}

  // Shader sample feeding the material output at this UV. Missing surface
  // input shades as black.
  ShaderSample surface_at(Vec3 uv) {
    begin_query(uv);
    if (plan_.surface.source == InputSlot::Source::Missing) return ShaderSample{};
    return to_shader(eval_slot(plan_.surface), "<output>");
  }

  Value output_at(int node, int socket, Vec3 uv) {
    begin_query(uv);
    return eval_output(node, socket);
  }

 private:
  void begin_query(Vec3 uv) {
    uv_ = uv;
    ++epoch_;
  }

  Value eval_slot(const InputSlot& slot) {
    switch (slot.source) {
      case InputSlot::Source::Edge:
        return eval_output(slot.src_node, slot.src_socket);
      case InputSlot::Source::Constant:
        return value_from_param(slot.constant, "<const>");
      case InputSlot::Source::ImplicitUV:
        return uv_;
      case InputSlot::Source::GeomNormal:
        return Vec3{0.0, 0.0, 1.0};
      case InputSlot::Source::Missing:
        return 0.0;
    }
    return 0.0;
  }

  Value eval_output(int node_index, int socket_index) {
    const PlanNode& node = plan_.nodes[node_index];
    const int slot = node.memo_base + socket_index;
    if (stamps_[slot] == epoch_) return memo_[slot];
    Value value = compute(node, socket_index);
    // compute() may have advanced the epoch (Bump re-samples its height
    // input at offset coordinates); only cache when the tag still matches.
    stamps_[slot] = epoch_;
    memo_[slot] = value;
    return value;
  }

  double scalar_input(const PlanNode& node, int index) {
    return to_scalar(eval_slot(node.inputs[index]), node.node_id);
  }
  Vec3 vector_input(const PlanNode& node, int index) {
    return to_vector(eval_slot(node.inputs[index]), node.node_id);
  }
  Color4 color_input(const PlanNode& node, int index) {
    return to_color(eval_slot(node.inputs[index]), node.node_id);
  }

  const std::string& enum_param(const PlanNode& node, int index) {
    return node.params[index].as_enum();
  }

  Value compute(const PlanNode& node, int socket);

  // Height input of a Bump node re-evaluated at an offset coordinate. Each
  // offset gets a fresh memo epoch; the caller's epoch is restored after.
  double height_at(const PlanNode& node, Vec3 uv) {
    const Vec3 saved_uv = uv_;
    const std::uint64_t saved_epoch = epoch_;
    uv_ = uv;
    epoch_ = ++scratch_epoch_counter_;
    const double h = scalar_input(node, 2);
    uv_ = saved_uv;
    epoch_ = saved_epoch;
    return h;
  }

  const EvalPlan& plan_;
  const RenderConfig& config_;
  SeedBank seeds_;
  std::vector<std::uint64_t> stamps_;
  std::vector<Value> memo_;
  Vec3 uv_;
  std::uint64_t epoch_ = 0;
  // Scratch epochs must never collide with query epochs; queries count up
  // from 0, scratch counts down from the top.
  std::uint64_t scratch_epoch_counter_ = ~std::uint64_t{0} / 2;
};

double math_op(const std::string& op, double a, double b, const std::string& node_id) {
  if (op == "ADD") return a + b;
  if (op == "SUBTRACT") return a - b;
  if (op == "MULTIPLY") return a * b;
  if (op == "DIVIDE") return safe_divide(a, b);
  if (op == "POWER") {
    if (a < 0.0 && b != std::floor(b)) return 0.0;
    if (a == 0.0 && b < 0.0) return 0.0;
    return std::pow(a, b);
  }
  if (op == "MINIMUM") return std::min(a, b);
  if (op == "MAXIMUM") return std::max(a, b);
  if (op == "ABSOLUTE") return std::fabs(a);
  if (op == "SINE") return std::sin(a);
  if (op == "COSINE") return std::cos(a);
  if (op == "FLOOR") return std::floor(a);
  if (op == "MODULO") return b != 0.0 ? std::fmod(a, b) : 0.0;
  if (op == "SQRT") return a >= 0.0 ? std::sqrt(a) : 0.0;
  if (op == "FRACTION") return fract(a);
  if (op == "ROUND") return std::round(a);
  if (op == "GREATER_THAN") return a > b ? 1.0 : 0.0;
  if (op == "LESS_THAN") return a < b ? 1.0 : 0.0;
  throw EvalError("unknown math operation '" + op + "' at node '" + node_id + "'");
}

struct VectorMathResult {
  Vec3 vector;
  double value = 0.0;
};

VectorMathResult vector_math_op(const std::string& op, Vec3 a, Vec3 b, double scale,
                                const std::string& node_id) {
  VectorMathResult r;
  auto vec = [&](Vec3 v) {
    r.vector = v;
    r.value = (v.x + v.y + v.z) / 3.0;
    return r;
  };
  auto scalar = [&](double s) {
    r.value = s;
    r.vector = {s, s, s};
    return r;
  };
  if (op == "ADD") return vec(a + b);
  if (op == "SUBTRACT") return vec(a - b);
  if (op == "MULTIPLY") return vec(a * b);
  if (op == "DIVIDE") {
    return vec({safe_divide(a.x, b.x), safe_divide(a.y, b.y), safe_divide(a.z, b.z)});
  }
  if (op == "SCALE") return vec(a * scale);
  if (op == "CROSS_PRODUCT") return vec(cross(a, b));
  if (op == "DOT_PRODUCT") return scalar(dot(a, b));
  if (op == "DISTANCE") return scalar(length(a - b));
  if (op == "LENGTH") return scalar(length(a));
  if (op == "NORMALIZE") return vec(normalized(a));
  if (op == "FLOOR") return vec({std::floor(a.x), std::floor(a.y), std::floor(a.z)});
  if (op == "FRACTION") return vec({fract(a.x), fract(a.y), fract(a.z)});
  if (op == "ABSOLUTE") return vec({std::fabs(a.x), std::fabs(a.y), std::fabs(a.z)});
  if (op == "MINIMUM") {
    return vec({std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)});
  }
  if (op == "MAXIMUM") {
    return vec({std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)});
  }
  throw EvalError("unknown vector operation '" + op + "' at node '" + node_id + "'");
}

double blend_channel(const std::string& mode, double c1, double c2, double fac,
                     const std::string& node_id) {
  const double facm = 1.0 - fac;
  if (mode == "MIX") return facm * c1 + fac * c2;
  if (mode == "MULTIPLY") return c1 * (facm + fac * c2);
  if (mode == "SCREEN") return 1.0 - (facm + fac * (1.0 - c2)) * (1.0 - c1);
  if (mode == "OVERLAY") {
    if (c1 < 0.5) return c1 * (facm + 2.0 * fac * c2);
    return 1.0 - (facm + 2.0 * fac * (1.0 - c2)) * (1.0 - c1);
  }
  if (mode == "ADD") return c1 + fac * c2;
  if (mode == "SUBTRACT") return c1 - fac * c2;
  if (mode == "DIFFERENCE") return facm * c1 + fac * std::fabs(c1 - c2);
  if (mode == "DARKEN") return facm * c1 + fac * std::min(c1, c2);
  if (mode == "LIGHTEN") return facm * c1 + fac * std::max(c1, c2);
  if (mode == "DIVIDE") return facm * c1 + fac * safe_divide(c1, c2);
  throw EvalError("unknown blend type '" + mode + "' at node '" + node_id + "'");
}

Vec3 rotate_euler_xyz(Vec3 v, Vec3 angles) {
  const double cx = std::cos(angles.x), sx = std::sin(angles.x);
  const double cy = std::cos(angles.y), sy = std::sin(angles.y);
  const double cz = std::cos(angles.z), sz = std::sin(angles.z);
  Vec3 r;
  // X axis
  r = {v.x, cx * v.y - sx * v.z, sx * v.y + cx * v.z};
  // Y axis
  r = {cy * r.x + sy * r.z, r.y, -sy * r.x + cy * r.z};
  // Z axis
  r = {cz * r.x - sz * r.y, sz * r.x + cz * r.y, r.z};
  return r;
}

Vec3 distorted(const SeedBank& seeds, Vec3 p, double distortion) {
  if (distortion == 0.0) return p;
  return {p.x + distortion * noise::perlin3(seeds.distort_x, p.x, p.y, p.z),
          p.y + distortion * noise::perlin3(seeds.distort_y, p.x, p.y, p.z),
          p.z + distortion * noise::perlin3(seeds.distort_z, p.x, p.y, p.z)};
}

Value Evaluator::compute(const PlanNode& node, int socket) {
  switch (node.op) {
    case BuiltinOp::TexCoord: {
      if (socket == 0) return uv_;                          // UV
      return uv_ - Vec3{0.5 * config_.uv_scale, 0.5 * config_.uv_scale, 0.0};  // Object
    }
    case BuiltinOp::Mapping: {
      const Vec3 v = vector_input(node, 0);
      const Vec3 location = vector_input(node, 1);
      const Vec3 rotation = vector_input(node, 2);
      const Vec3 scale = vector_input(node, 3);
      return location + rotate_euler_xyz(v * scale, rotation);
    }
    case BuiltinOp::TexNoise: {
      const Vec3 v = vector_input(node, 0);
      const double w = scalar_input(node, 1);
      const double scale = scalar_input(node, 2);
      const double detail = scalar_input(node, 3);
      const double roughness = scalar_input(node, 4);
      const double distortion = scalar_input(node, 5);
      Vec3 p = v * scale;
      p.z += w;
      p = distorted(seeds_, p, distortion);
      const double fac =
          std::clamp(0.5 + 0.5 * noise::fbm3(seeds_.noise, p, detail, roughness), 0.0, 1.0);
      if (socket == 0) return fac;  // Fac
      const double g =
          std::clamp(0.5 + 0.5 * noise::fbm3(seeds_.noise_g, p, detail, roughness), 0.0, 1.0);
      const double b =
          std::clamp(0.5 + 0.5 * noise::fbm3(seeds_.noise_b, p, detail, roughness), 0.0, 1.0);
      return Color4{fac, g, b, 1.0};  // Color
    }
    case BuiltinOp::TexVoronoi: {
      const Vec3 v = vector_input(node, 0);
      const double w = scalar_input(node, 1);
      const double scale = scalar_input(node, 2);
      const double randomness = scalar_input(node, 3);
      const std::string& feature = enum_param(node, 0);
      const std::string& metric = enum_param(node, 1);
      Vec3 p = v * scale;
      p.z += w;
      noise::VoronoiFeature f = feature == "F2" ? noise::VoronoiFeature::F2
                                                : noise::VoronoiFeature::F1;
      noise::VoronoiMetric m = noise::VoronoiMetric::Euclidean;
      if (metric == "MANHATTAN") m = noise::VoronoiMetric::Manhattan;
      if (metric == "CHEBYSHEV") m = noise::VoronoiMetric::Chebyshev;
      const noise::VoronoiResult r = noise::voronoi3(seeds_.voronoi, p, randomness, f, m);
      if (socket == 0) return r.distance;  // Distance
      if (socket == 1) return Color4{r.color.x, r.color.y, r.color.z, 1.0};  // Color
      const double inv = std::fabs(scale) > 1e-9 ? 1.0 / scale : 0.0;
      return r.position * inv;  // Position
    }
    case BuiltinOp::TexChecker: {
      const Vec3 v = vector_input(node, 0);
      const Color4 c1 = color_input(node, 1);
      const Color4 c2 = color_input(node, 2);
      const double scale = scalar_input(node, 3);
      const Vec3 p = v * scale;
      const long long parity = static_cast<long long>(std::floor(p.x)) +
                               static_cast<long long>(std::floor(p.y)) +
                               static_cast<long long>(std::floor(p.z));
      const bool even = (parity % 2 + 2) % 2 == 0;
      if (socket == 1) return even ? 1.0 : 0.0;  // Fac
      return even ? c1 : c2;                     // Color
    }
    case BuiltinOp::TexBrick: {
      const Vec3 v = vector_input(node, 0);
      const Color4 c1 = color_input(node, 1);
      const Color4 c2 = color_input(node, 2);
      const Color4 mortar = color_input(node, 3);
      const double scale = scalar_input(node, 4);
      const double mortar_size = scalar_input(node, 5);
      const double mortar_smooth = scalar_input(node, 6);
      const double bias = scalar_input(node, 7);
      double brick_width = scalar_input(node, 8);
      const double row_height = scalar_input(node, 9);
      const double offset_amount = node.params[0].as_float();
      const long long offset_frequency = node.params[1].as_int();
      const double squash_amount = node.params[2].as_float();
      const long long squash_frequency = node.params[3].as_int();

      const Vec3 p = v * scale;
      double offset = 0.0;
      const long long rownum =
          static_cast<long long>(std::floor(safe_divide(p.y, row_height)));
      if (offset_frequency > 0 && squash_frequency > 0) {
        brick_width *= (rownum % squash_frequency) ? 1.0 : squash_amount;
        offset = (rownum % offset_frequency) ? 0.0 : brick_width * offset_amount;
      }
      const long long bricknum =
          static_cast<long long>(std::floor(safe_divide(p.x + offset, brick_width)));
      const double x = (p.x + offset) - brick_width * static_cast<double>(bricknum);
      const double y = p.y - row_height * static_cast<double>(rownum);
      const double tint = std::clamp(
          noise::hash_to_unit(noise::lattice_hash(seeds_.brick, bricknum, rownum, 0)) +
              bias,
          0.0, 1.0);
      const double min_dist =
          std::min(std::min(x, y), std::min(brick_width - x, row_height - y));
      double f = 0.0;
      if (min_dist < mortar_size) {
        f = mortar_smooth <= 0.0
                ? 1.0
                : smoothstep_unit(mortar_smooth, 1.0 - min_dist / mortar_size);
      }
      if (socket == 1) return f;  // Fac
      Color4 brick_color = lerp(c1, c2, tint);
      return lerp(brick_color, mortar, f);  // Color
    }
    case BuiltinOp::TexWave: {
      const Vec3 v = vector_input(node, 0);
      const double scale = scalar_input(node, 1);
      const double distortion = scalar_input(node, 2);
      const double detail = scalar_input(node, 3);
      const double detail_scale = scalar_input(node, 4);
      const double detail_roughness = scalar_input(node, 5);
      const double phase = scalar_input(node, 6);
      const std::string& wave_type = enum_param(node, 0);
      const std::string& direction = enum_param(node, 1);
      const std::string& profile = enum_param(node, 2);

      const Vec3 p = v * scale;
      double t;
      if (wave_type == "RINGS") {
        t = length(p);
      } else {
        if (direction == "Y") {
          t = p.y;
        } else if (direction == "DIAGONAL") {
          t = (p.x + p.y) * 0.7071067811865476;
        } else {
          t = p.x;
        }
      }
      t += phase;
      if (distortion != 0.0) {
        t += distortion *
             noise::fbm3(seeds_.wave, p * detail_scale, detail, detail_roughness);
      }
      double value;
      if (profile == "SAW") {
        value = fract(t);
      } else if (profile == "TRIANGLE") {
        value = 1.0 - std::fabs(2.0 * fract(t) - 1.0);
      } else {
        value = 0.5 + 0.5 * std::sin(t * 6.283185307179586);
      }
      if (socket == 1) return value;                        // Fac
      return Color4{value, value, value, 1.0};              // Color
    }
    case BuiltinOp::TexGradient: {
      const Vec3 v = vector_input(node, 0);
      const std::string& type = enum_param(node, 0);
      double t;
      if (type == "QUADRATIC") {
        const double r = std::max(v.x, 0.0);
        t = r * r;
      } else if (type == "DIAGONAL") {
        t = (v.x + v.y) * 0.5;
      } else if (type == "SPHERICAL") {
        t = std::max(1.0 - length(v), 0.0);
      } else if (type == "RADIAL") {
        t = std::atan2(v.y, v.x) / 6.283185307179586 + 0.5;
      } else {
        t = v.x;  // LINEAR
      }
      const double fac = std::clamp(t, 0.0, 1.0);
      if (socket == 1) return fac;              // Fac
      return Color4{fac, fac, fac, 1.0};        // Color
    }
    case BuiltinOp::TexMagic: {
      const Vec3 v = vector_input(node, 0);
      const double scale = scalar_input(node, 1);
      double distortion = scalar_input(node, 2);
      const long long depth = node.params[0].as_int();
      const Vec3 p = v * scale;

      double x = std::sin((p.x + p.y + p.z) * 5.0);
      double y = std::cos((-p.x + p.y - p.z) * 5.0);
      double z = -std::cos((-p.x - p.y + p.z) * 5.0);
      if (depth > 0) {
        x *= distortion;
        y *= distortion;
        z *= distortion;
        y = -std::cos(x - y + z) * distortion;
        if (depth > 1) x = std::cos(x - y - z) * distortion;
        if (depth > 2) z = std::sin(-x - y - z) * distortion;
        if (depth > 3) x = -std::cos(-x + y - z) * distortion;
        if (depth > 4) y = -std::sin(-x + y + z) * distortion;
        if (depth > 5) y = -std::cos(-x + y + z) * distortion;
        if (depth > 6) x = std::cos(x + y + z) * distortion;
        if (depth > 7) z = std::sin(x + y - z) * distortion;
        if (depth > 8) x = -std::cos(-x - y + z) * distortion;
        if (depth > 9) y = -std::sin(x - y + z) * distortion;
      }
      if (distortion != 0.0) {
        const double norm = 2.0 * distortion;
        x /= norm;
        y /= norm;
        z /= norm;
      }
      const Color4 color{std::clamp(0.5 - x, 0.0, 1.0), std::clamp(0.5 - y, 0.0, 1.0),
                         std::clamp(0.5 - z, 0.0, 1.0), 1.0};
      if (socket == 1) return (color.r + color.g + color.b) / 3.0;  // Fac
      return color;                                                 // Color
    }
    case BuiltinOp::Math: {
      const double a = scalar_input(node, 0);
      const double b = scalar_input(node, 1);
      const std::string& op = enum_param(node, 0);
      double value = math_op(op, a, b, node.node_id);
      if (node.params[1].as_bool()) value = std::clamp(value, 0.0, 1.0);
      return value;
    }
    case BuiltinOp::VectorMath: {
      const Vec3 a = vector_input(node, 0);
      const Vec3 b = vector_input(node, 1);
      const double scale = scalar_input(node, 2);
      const VectorMathResult r =
          vector_math_op(enum_param(node, 0), a, b, scale, node.node_id);
      if (socket == 1) return r.value;
      return r.vector;
    }
    case BuiltinOp::MixColor: {
      const double fac = std::clamp(scalar_input(node, 0), 0.0, 1.0);
      const Color4 c1 = color_input(node, 1);
      const Color4 c2 = color_input(node, 2);
      const std::string& mode = enum_param(node, 0);
      Color4 out{blend_channel(mode, c1.r, c2.r, fac, node.node_id),
                 blend_channel(mode, c1.g, c2.g, fac, node.node_id),
                 blend_channel(mode, c1.b, c2.b, fac, node.node_id), c1.a};
      if (node.params[1].as_bool()) out = clamped(out);
      return out;
    }
    case BuiltinOp::ColorRampNode: {
      const double fac = scalar_input(node, 0);
      const Color4 c = node.params[0].as_ramp().sample(fac);
      if (socket == 1) return c.a;  // Alpha
      return c;                     // Color
    }
    case BuiltinOp::SeparateColor: {
      const Color4 c = color_input(node, 0);
      double channels[3];
      if (enum_param(node, 0) == "HSV") {
        const Hsv hsv = rgb_to_hsv(c);
        channels[0] = hsv.h;
        channels[1] = hsv.s;
        channels[2] = hsv.v;
      } else {
        channels[0] = c.r;
        channels[1] = c.g;
        channels[2] = c.b;
      }
      return channels[socket];
    }
    case BuiltinOp::CombineColor: {
      const double a = scalar_input(node, 0);
      const double b = scalar_input(node, 1);
      const double c = scalar_input(node, 2);
      if (enum_param(node, 0) == "HSV") {
        return hsv_to_rgb({fract(a), std::clamp(b, 0.0, 1.0), std::max(c, 0.0)});
      }
      return Color4{a, b, c, 1.0};
    }
    case BuiltinOp::HueSatVal: {
      const double hue = scalar_input(node, 0);
      const double sat = scalar_input(node, 1);
      const double val = scalar_input(node, 2);
      const double fac = std::clamp(scalar_input(node, 3), 0.0, 1.0);
      const Color4 c = color_input(node, 4);
      Hsv hsv = rgb_to_hsv(c);
      hsv.h = fract(hsv.h + hue + 0.5);
      hsv.s = std::clamp(hsv.s * sat, 0.0, 1.0);
      hsv.v = std::max(hsv.v * val, 0.0);
      const Color4 shifted = hsv_to_rgb(hsv, c.a);
      return Color4{std::max(fac * shifted.r + (1.0 - fac) * c.r, 0.0),
                    std::max(fac * shifted.g + (1.0 - fac) * c.g, 0.0),
                    std::max(fac * shifted.b + (1.0 - fac) * c.b, 0.0), c.a};
    }
    case BuiltinOp::Invert: {
      const double fac = std::clamp(scalar_input(node, 0), 0.0, 1.0);
      const Color4 c = color_input(node, 1);
      return Color4{fac * (1.0 - c.r) + (1.0 - fac) * c.r,
                    fac * (1.0 - c.g) + (1.0 - fac) * c.g,
                    fac * (1.0 - c.b) + (1.0 - fac) * c.b, c.a};
    }
    case BuiltinOp::Bump: {
      const double strength = std::clamp(scalar_input(node, 0), 0.0, 1.0);
      const double distance = scalar_input(node, 1);
      const double sign = node.params[0].as_bool() ? -1.0 : 1.0;
      // Central differences over the height field, step of one pixel in
      // plane units (uv offsets scale with uv_scale).
      const double step = 1.0 / static_cast<double>(config_.resolution);
      const double uv_step = step * config_.uv_scale;
      const Vec3 uv = uv_;
      const double hx1 = height_at(node, {uv.x + uv_step, uv.y, uv.z});
      const double hx0 = height_at(node, {uv.x - uv_step, uv.y, uv.z});
      const double hy1 = height_at(node, {uv.x, uv.y + uv_step, uv.z});
      const double hy0 = height_at(node, {uv.x, uv.y - uv_step, uv.z});
      const double dhdx = (hx1 - hx0) / (2.0 * step);
      const double dhdy = (hy1 - hy0) / (2.0 * step);
      const double k = sign * strength * distance;
      return normalized(Vec3{-k * dhdx, -k * dhdy, 1.0});
    }
    case BuiltinOp::PrincipledBsdf: {
      ShaderSample sample;
      sample.base_color = clamped(color_input(node, 0));
      sample.metallic = std::clamp(scalar_input(node, 1), 0.0, 1.0);
      sample.roughness = std::clamp(scalar_input(node, 2), 0.0, 1.0);
      const Vec3 n = vector_input(node, 3);
      const double len = length(n);
      sample.normal = len > 1e-9 ? n * (1.0 / len) : Vec3{0.0, 0.0, 1.0};
      if (sample.normal.z < 0.0) sample.normal = sample.normal * -1.0;
      return sample;
    }
    case BuiltinOp::MaterialOutput:
      throw EvalError("material output node '" + node.node_id + "' has no output socket");
  }
  throw EvalError("unsupported builtin semantics at node '" + node.node_id + "'");
}

// ---------------------------------------------------------------------------
// Shading

Vec3 shade(const ShaderSample& sample, Vec3 plane_point, const RenderConfig& config) {
  const Vec3 base{sample.base_color.r, sample.base_color.g, sample.base_color.b};
  const Vec3 n = sample.normal;
  const Vec3 view{0.0, 0.0, 1.0};

  const Vec3 to_light = config.light_position - plane_point;
  const double dist2 = dot(to_light, to_light);
  const double dist = std::sqrt(dist2);
  if (dist < 1e-9) return base;
  const Vec3 l = to_light * (1.0 / dist);
  const double attenuation = config.light_intensity / dist2;

  const double ndl = std::max(dot(n, l), 0.0);
  const double ndv = std::max(dot(n, view), 0.0);

  Vec3 color = base * config.ambient;
  if (ndl > 0.0) {
    const Vec3 h = normalized(l + view);
    const double ndh = std::max(dot(n, h), 0.0);
    const double vdh = std::max(dot(view, h), 0.0);

    const double alpha_r = std::clamp(sample.roughness, 0.03, 1.0);
    const double alpha = alpha_r * alpha_r;
    const double a2 = alpha * alpha;
    const double denom = ndh * ndh * (a2 - 1.0) + 1.0;
    const double d_term = a2 / (3.141592653589793 * denom * denom);

    const Vec3 f0 = lerp(Vec3{0.04, 0.04, 0.04}, base, sample.metallic);
    const double fresnel_pow = std::pow(1.0 - vdh, 5.0);
    const Vec3 f_term = f0 + (Vec3{1.0, 1.0, 1.0} - f0) * fresnel_pow;

    const double k = alpha / 2.0;
    auto g1 = [k](double x) { return x / (x * (1.0 - k) + k); };
    const double g_term = g1(ndl) * (ndv > 0.0 ? g1(ndv) : 0.0);

    const Vec3 specular =
        f_term * (d_term * g_term / std::max(4.0 * ndl * ndv, 1e-7));
    const Vec3 diffuse = base * (1.0 - sample.metallic);
    color = color + (diffuse + specular) * (attenuation * ndl);
  }
  return {std::clamp(color.x, 0.0, 1.0), std::clamp(color.y, 0.0, 1.0),
          std::clamp(color.z, 0.0, 1.0)};
}

void check_config(const RenderConfig& config) {
  if (config.resolution < 16) {
    throw std::invalid_argument("render: resolution must be at least 16");
  }
  if (!(config.light_intensity > 0.0)) {
    throw std::invalid_argument("render: light_intensity must be positive");
  }
}

}  // namespace

ParamValue evaluate_field(const MaterialGraph& graph, const NodeTypeRegistry& registry,
                          const std::string& node_id, const std::string& socket,
                          Vec3 uv, const RenderConfig& config) {
  Compiler compiler(registry);
  EvalPlan plan = compiler.compile(graph);
  const auto [plan_node, plan_socket] = compiler.resolve_output_of(node_id, socket);
  const PlanNode& node = plan.nodes[plan_node];
  if (node.def->outputs[plan_socket].data_kind == SocketKind::Shader) {
    throw EvalError("shader socket '" + socket + "' has no field value");
  }

  Evaluator evaluator(plan, config);
  const Value value = evaluator.output_at(plan_node, plan_socket, uv);
  switch (node.def->outputs[plan_socket].data_kind) {
    case SocketKind::Scalar:
      return ParamValue::of_float(to_scalar(value, node_id));
    case SocketKind::Vector:
      return ParamValue::of_vector(to_vector(value, node_id));
    case SocketKind::Color:
      return ParamValue::of_color(clamped(to_color(value, node_id)));
    case SocketKind::Shader:
      break;
  }
  throw EvalError("shader socket '" + socket + "' has no field value");
}

TextureImage render(const MaterialGraph& graph, const NodeTypeRegistry& registry,
                    const RenderConfig& config) {
  check_config(config);
  Compiler compiler(registry);
  const EvalPlan plan = compiler.compile(graph);

  const int res = config.resolution;
  TextureImage image(res, res);

  parallel_chunks(static_cast<std::size_t>(res), [&](std::size_t row_begin,
                                                     std::size_t row_end) {
    Evaluator evaluator(plan, config);
    for (std::size_t y = row_begin; y < row_end; ++y) {
      for (int x = 0; x < res; ++x) {
        const double u = (static_cast<double>(x) + 0.5) / res;
        const double v = (static_cast<double>(y) + 0.5) / res;
        const Vec3 uv{u * config.uv_scale, v * config.uv_scale, 0.0};
        const ShaderSample sample = evaluator.surface_at(uv);
        const Vec3 rgb = shade(sample, {u, v, 0.0}, config);
        float* px = image.pixel(x, static_cast<int>(y));
        px[0] = static_cast<float>(rgb.x);
        px[1] = static_cast<float>(rgb.y);
        px[2] = static_cast<float>(rgb.z);
      }
    }
  }, config.threads);

  return image;
}

}  // namespace matforge
