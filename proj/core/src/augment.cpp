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

#include "matforge/augment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "matforge/curate.hpp"
#include "matforge/dsl.hpp"
#include "matforge/render.hpp"
#include "matforge/rng.hpp"

namespace matforge {

namespace {

using Bounds = std::optional<std::pair<double, double>>;

Bounds feasible_range(const Bounds& range, const Bounds& statistical_range) {
  if (range) return range;
  return statistical_range;
}

// Uniform draw from [v - delta, v + delta] intersected with bounds. An empty
// intersection (v outside the feasible range) clamps instead of drawing.
double sample_interval(Pcg32& rng, double v, double delta, const Bounds& bounds) {
  double lo = v - delta;
  double hi = v + delta;
  if (bounds) {
    lo = std::max(lo, bounds->first);
    hi = std::min(hi, bounds->second);
    if (lo > hi) return std::clamp(v, bounds->first, bounds->second);
  }
  return rng.uniform(lo, hi);
}

double half_width(const ParamSampleConfig& cfg, double v) {
  return std::max(cfg.rel_interval * std::abs(v), cfg.abs_min_interval);
}

double sample_float(Pcg32& rng, const ParamSampleConfig& cfg, double v, const Bounds& bounds) {
  return sample_interval(rng, v, half_width(cfg, v), bounds);
}

long long sample_int(Pcg32& rng, const ParamSampleConfig& cfg, long long v, const Bounds& bounds) {
  double x = sample_float(rng, cfg, static_cast<double>(v), bounds);
  long long r = std::llround(x);
  if (bounds) {
    long long lo = static_cast<long long>(std::ceil(bounds->first));
    long long hi = static_cast<long long>(std::floor(bounds->second));
    if (lo <= hi) r = std::clamp(r, lo, hi);
  }
  return r;
}

Vec3 sample_vector(Pcg32& rng, const ParamSampleConfig& cfg, Vec3 v, const Bounds& bounds) {
  return Vec3{sample_float(rng, cfg, v.x, bounds),
              sample_float(rng, cfg, v.y, bounds),
              sample_float(rng, cfg, v.z, bounds)};
}

Color4 sample_color(Pcg32& rng, const ParamSampleConfig& cfg, Color4 c) {
  Hsv hsv = rgb_to_hsv(c);
  double h;
  if (cfg.hue_full_range) {
    h = rng.uniform();
  } else {
    h = hsv.h + rng.uniform(-cfg.sv_interval, cfg.sv_interval);
    h -= std::floor(h);  // hue wraps
  }
  Bounds unit = std::pair<double, double>{0.0, 1.0};
  double s = sample_interval(rng, hsv.s, cfg.sv_interval, unit);
  double v = sample_interval(rng, hsv.v, cfg.sv_interval, unit);
  return hsv_to_rgb(Hsv{h, s, v}, c.a);
}

ColorRampValue sample_ramp(Pcg32& rng, const ParamSampleConfig& cfg, ColorRampValue ramp) {
  Bounds unit = std::pair<double, double>{0.0, 1.0};
  for (RampStop& stop : ramp.stops) {
    stop.position = sample_interval(rng, stop.position, half_width(cfg, stop.position), unit);
    stop.color = sample_color(rng, cfg, stop.color);
  }
  std::stable_sort(ramp.stops.begin(), ramp.stops.end(),
                   [](const RampStop& a, const RampStop& b) { return a.position < b.position; });
  return ramp;
}

}  // namespace

ParamValue sample_param_value(Pcg32& rng, const ParamSampleConfig& cfg, const ParamSpec& spec,
                              const ParamValue& current) {
  Bounds bounds = feasible_range(spec.range, spec.statistical_range);
  switch (spec.kind) {
    case ParamKind::Float:
      return ParamValue::of_float(sample_float(rng, cfg, current.as_float(), bounds));
    case ParamKind::Int:
      return ParamValue::of_int(sample_int(rng, cfg, current.as_int(), bounds));
    case ParamKind::Vector:
      return ParamValue::of_vector(sample_vector(rng, cfg, current.as_vector(), bounds));
    case ParamKind::Color:
      return ParamValue::of_color(sample_color(rng, cfg, current.as_color()));
    case ParamKind::ColorRamp:
      return ParamValue::of_ramp(sample_ramp(rng, cfg, current.as_ramp()));
    case ParamKind::Enum: {
      if (!rng.bernoulli(cfg.categorical_prob) || spec.enum_variants.empty()) return current;
      int i = rng.uniform_int(0, static_cast<int>(spec.enum_variants.size()) - 1);
      return ParamValue::of_enum(spec.enum_variants[i]);
    }
    case ParamKind::Bool: {
      if (!rng.bernoulli(cfg.categorical_prob)) return current;
      return ParamValue::of_bool(rng.bernoulli(0.5));
    }
  }
  return current;
}

ParamValue sample_socket_default(Pcg32& rng, const ParamSampleConfig& cfg, const SocketSpec& spec,
                                 const ParamValue& current) {
  Bounds bounds = feasible_range(spec.range, spec.statistical_range);
  switch (current.kind()) {
    case ParamKind::Float:
      return ParamValue::of_float(sample_float(rng, cfg, current.as_float(), bounds));
    case ParamKind::Int:
      return ParamValue::of_int(sample_int(rng, cfg, current.as_int(), bounds));
    case ParamKind::Vector:
      return ParamValue::of_vector(sample_vector(rng, cfg, current.as_vector(), bounds));
    case ParamKind::Color:
      return ParamValue::of_color(sample_color(rng, cfg, current.as_color()));
    default:
      return current;
  }
}

std::vector<ParamSlot> eligible_parameters(const MaterialGraph& graph,
                                           const NodeTypeRegistry& registry) {
  std::vector<ParamSlot> slots;
  for (const Node& node : graph.nodes) {
    const NodeTypeDef* def = registry.find(node.type_id);
    if (def == nullptr) continue;
    for (const ParamSpec& spec : def->params) {
      slots.push_back({node.node_id, spec.name, true});
    }
    for (const SocketSpec& spec : def->inputs) {
      if (!spec.default_value) continue;
      if (graph.has_edge_into(node.node_id, spec.name)) continue;
      slots.push_back({node.node_id, spec.name, false});
    }
  }
  return slots;
}

void resample_slot(MaterialGraph& graph, const NodeTypeRegistry& registry,
                   const ParamSlot& slot, const ParamSampleConfig& config, Pcg32& rng) {
  Node* node = graph.find_node(slot.node_id);
  if (node == nullptr) return;
  const NodeTypeDef* def = registry.find(node->type_id);
  if (def == nullptr) return;
  if (slot.is_param) {
    const ParamSpec* spec = def->find_param(slot.name);
    if (spec == nullptr) return;
    auto it = node->param_overrides.find(slot.name);
    const ParamValue& current =
        (it != node->param_overrides.end()) ? it->second : spec->default_value;
    node->param_overrides[slot.name] = sample_param_value(rng, config, *spec, current);
  } else {
    const SocketSpec* spec = def->find_input(slot.name);
    if (spec == nullptr || !spec->default_value) return;
    auto it = node->input_defaults.find(slot.name);
    const ParamValue& current =
        (it != node->input_defaults.end()) ? it->second : *spec->default_value;
    node->input_defaults[slot.name] = sample_socket_default(rng, config, *spec, current);
  }
}

namespace {

// Entries that differ from their spec default, i.e. the ones costing tokens.
struct OverrideRef {
  std::string node_id;
  std::string name;
  bool is_param = false;
};

std::vector<OverrideRef> non_default_entries(const MaterialGraph& graph,
                                             const NodeTypeRegistry& registry) {
  std::vector<OverrideRef> entries;
  for (const Node& node : graph.nodes) {
    const NodeTypeDef* def = registry.find(node.type_id);
    if (def == nullptr) continue;
    for (const auto& [name, value] : node.param_overrides) {
      const ParamSpec* spec = def->find_param(name);
      if (spec != nullptr && value == spec->default_value) continue;
      entries.push_back({node.node_id, name, true});
    }
    for (const auto& [name, value] : node.input_defaults) {
      const SocketSpec* spec = def->find_input(name);
      if (spec != nullptr && spec->default_value && value == *spec->default_value) continue;
      entries.push_back({node.node_id, name, false});
    }
  }
  return entries;
}

}  // namespace

ParamSampleResult sample_parameters(const MaterialGraph& graph,
                                    const NodeTypeRegistry& registry,
                                    const ParamSampleConfig& config,
                                    std::optional<int> token_limit) {
  ParamSampleResult result{graph, false};
  Pcg32 rng(config.rng_seed);

  for (const ParamSlot& slot : eligible_parameters(result.graph, registry)) {
    Node* node = result.graph.find_node(slot.node_id);
    const NodeTypeDef* def = registry.find(node->type_id);
    ParamValue spec_default;
    const ParamValue* current = nullptr;
    if (slot.is_param) {
      spec_default = def->find_param(slot.name)->default_value;
      auto it = node->param_overrides.find(slot.name);
      current = (it != node->param_overrides.end()) ? &it->second : &spec_default;
    } else {
      spec_default = *def->find_input(slot.name)->default_value;
      auto it = node->input_defaults.find(slot.name);
      current = (it != node->input_defaults.end()) ? &it->second : &spec_default;
    }
    bool at_default = (*current == spec_default);
    if (at_default && !rng.bernoulli(config.default_param_prob)) continue;
    resample_slot(result.graph, registry, slot, config, rng);
  }

  if (!token_limit) return result;

  int tokens = emit(result.graph, registry).token_count;
  std::vector<OverrideRef> pool = non_default_entries(result.graph, registry);
  while (tokens > *token_limit && !pool.empty()) {
    int idx = rng.uniform_int(0, static_cast<int>(pool.size()) - 1);
    OverrideRef entry = pool[idx];
    pool[idx] = pool.back();
    pool.pop_back();
    Node* node = result.graph.find_node(entry.node_id);
    if (node == nullptr) continue;
    if (entry.is_param) {
      node->param_overrides.erase(entry.name);
    } else {
      node->input_defaults.erase(entry.name);
    }
    tokens = emit(result.graph, registry).token_count;
  }

  if (tokens > *token_limit) {
    // Even the bare program is too large; return it anyway, flagged.
    for (Node& node : result.graph.nodes) {
      node.param_overrides.clear();
      node.input_defaults.clear();
    }
    result.forced_all_default = true;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Built-in splice crossover

namespace {

std::string fresh_graft_id(const std::set<std::string>& taken, const std::string& base) {
  std::string id = base;
  while (taken.count(id) != 0) id += "_g";
  return id;
}

}  // namespace

std::optional<std::string> SpliceBackend::propose(const std::string& parent_a,
                                                  const std::string& parent_b,
                                                  std::uint64_t trial_seed) {
  try {
    const NodeTypeRegistry& reg = *registry_;
    MaterialGraph a = expand_groups(parse(parent_a, reg), reg, std::numeric_limits<int>::max());
    MaterialGraph b = expand_groups(parse(parent_b, reg), reg, std::numeric_limits<int>::max());
    Pcg32 rng(trial_seed);

    // Cut candidates: nodes of A with at least one connected input.
    std::vector<const Node*> cuts;
    for (const Node& node : a.nodes) {
      bool has_in = std::any_of(a.edges.begin(), a.edges.end(), [&](const Edge& e) {
        return e.to.node_id == node.node_id;
      });
      if (has_in) cuts.push_back(&node);
    }
    if (cuts.empty()) return std::nullopt;
    const std::string cut_id = cuts[rng.uniform_int(0, static_cast<int>(cuts.size()) - 1)]->node_id;
    const NodeTypeDef* cut_def = reg.find(a.find_node(cut_id)->type_id);
    if (cut_def == nullptr) return std::nullopt;

    // Disconnect the cut node's inputs; prune later drops what this orphans.
    std::vector<std::pair<std::string, SocketKind>> freed;
    for (const SocketSpec& in : cut_def->inputs) {
      if (a.has_edge_into(cut_id, in.name)) freed.emplace_back(in.name, in.data_kind);
    }
    std::erase_if(a.edges, [&](const Edge& e) { return e.to.node_id == cut_id; });

    // Donor candidates in B: output sockets kind-compatible with a freed input.
    struct Donor {
      std::string node_id;
      std::string socket;
      SocketKind kind;
    };
    std::vector<Donor> donors;
    for (const Node& node : b.nodes) {
      const NodeTypeDef* def = reg.find(node.type_id);
      if (def == nullptr) continue;
      for (const SocketSpec& out : def->outputs) {
        bool fits = std::any_of(freed.begin(), freed.end(), [&](const auto& f) {
          return socket_kinds_compatible(out.data_kind, f.second);
        });
        if (fits) donors.push_back({node.node_id, out.name, out.data_kind});
      }
    }
    if (donors.empty()) return std::nullopt;
    const Donor donor = donors[rng.uniform_int(0, static_cast<int>(donors.size()) - 1)];

    // Copy the donor's upstream closure out of B.
    std::set<std::string> keep;
    std::vector<std::string> stack{donor.node_id};
    while (!stack.empty()) {
      std::string id = stack.back();
      stack.pop_back();
      if (!keep.insert(id).second) continue;
      for (const Edge& e : b.edges) {
        if (e.to.node_id == id) stack.push_back(e.from.node_id);
      }
    }

    std::set<std::string> taken;
    for (const Node& node : a.nodes) taken.insert(node.node_id);
    std::map<std::string, std::string> renamed;
    for (const Node& node : b.nodes) {
      if (keep.count(node.node_id) == 0) continue;
      std::string id = fresh_graft_id(taken, node.node_id);
      taken.insert(id);
      renamed[node.node_id] = id;
      Node copy = node;
      copy.node_id = id;
      a.nodes.push_back(std::move(copy));
    }
    for (const Edge& e : b.edges) {
      if (keep.count(e.from.node_id) == 0 || keep.count(e.to.node_id) == 0) continue;
      a.edges.push_back(Edge{{renamed[e.from.node_id], e.from.socket},
                             {renamed[e.to.node_id], e.to.socket}});
    }

    // Feed every compatible freed socket from the grafted output.
    for (const auto& [socket, kind] : freed) {
      if (!socket_kinds_compatible(donor.kind, kind)) continue;
      a.edges.push_back(Edge{{renamed[donor.node_id], donor.socket}, {cut_id, socket}});
    }

    MaterialGraph child = prune_unreachable(a).first;
    return emit(child, reg).source;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// HTTP backend

const std::string& default_crossover_instruction() {
  static const std::string text =
      "Combine the two material programs below into one new program in the "
      "same language. Reuse pieces of both parents. Only use node types that "
      "appear in the parents. Declare every node before linking it, keep at "
      "most 30 nodes, and end with exactly one MaterialOutput node whose "
      "Surface input is linked. Reply with the program text only.\n";
  return text;
}

std::optional<std::string> HttpBackend::propose(const std::string& parent_a,
                                                const std::string& parent_b,
                                                std::uint64_t trial_seed) {
  nlohmann::json request = {
      {"instruction", config_.instruction.empty() ? default_crossover_instruction()
                                                  : config_.instruction},
      {"parent_a", parent_a},
      {"parent_b", parent_b},
      {"seed", trial_seed},
  };
  const std::string body = request.dump();

  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    httplib::Client client(config_.host, config_.port);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);
    httplib::Result res = client.Post(config_.path, body, "application/json");
    if (!res || res->status != 200) continue;
    nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_object() && reply.contains("program") && reply["program"].is_string()) {
      return reply["program"].get<std::string>();
    }
    if (!res->body.empty()) return res->body;  // plain-text reply
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Crossover driver and pool evolution

std::vector<MaterialGraph> crossover(const MaterialGraph& parent_a,
                                     const MaterialGraph& parent_b,
                                     const NodeTypeRegistry& registry,
                                     const CrossoverConfig& config,
                                     CrossoverBackend* backend) {
  SpliceBackend builtin(registry);
  CrossoverBackend& gen = (backend != nullptr) ? *backend : builtin;

  const std::string text_a = emit(parent_a, registry).source;
  const std::string text_b = emit(parent_b, registry).source;

  CurationConfig curation;
  curation.max_nodes = config.max_nodes;
  const RenderConfig render_config = RenderConfig::flat_lighting(curation.resolution);

  std::vector<MaterialGraph> children;
  for (int trial = 0; trial < config.trials_per_pair; ++trial) {
    if (static_cast<int>(children.size()) >= config.max_valid_per_pair) break;
    std::optional<std::string> text;
    try {
      text = gen.propose(text_a, text_b, derive_seed(config.rng_seed, trial + 1));
    } catch (const std::exception&) {
      continue;
    }
    if (!text) continue;
    try {
      MaterialGraph child = parse(*text, registry);
      MaterialGraph processed;
      CurationReport report =
          validate_material(child, registry, curation, render_config, &processed);
      if (report.accepted) children.push_back(std::move(processed));
    } catch (const std::exception&) {
      continue;  // unparsable or unevaluable proposal
    }
  }
  return children;
}

std::vector<MaterialGraph> evolve_pool(std::vector<MaterialGraph> pool,
                                       const NodeTypeRegistry& registry,
                                       CrossoverBackend& backend,
                                       std::size_t target_count,
                                       const CrossoverConfig& config,
                                       std::ostream* log) {
  if (pool.empty() || pool.size() >= target_count) return pool;

  const std::size_t missing = target_count - pool.size();
  const std::size_t budget = 25 * missing;
  Pcg32 selector(config.rng_seed, 2);

  for (std::size_t attempt = 0; attempt < budget && pool.size() < target_count; ++attempt) {
    int i = selector.uniform_int(0, static_cast<int>(pool.size()) - 1);
    int j = selector.uniform_int(0, static_cast<int>(pool.size()) - 1);
    CrossoverConfig pair_config = config;
    pair_config.rng_seed = derive_seed(config.rng_seed, attempt + 1);
    std::vector<MaterialGraph> children =
        crossover(pool[i], pool[j], registry, pair_config, &backend);
    if (children.empty() && log != nullptr) {
      *log << "evolve_pool: attempt " << attempt << " produced no valid child\n";
    }
    for (MaterialGraph& child : children) {
      if (pool.size() >= target_count) break;
      pool.push_back(std::move(child));
    }
  }
  return pool;
}

}  // namespace matforge
