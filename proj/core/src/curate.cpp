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

#include "matforge/curate.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "matforge/dsl.hpp"

namespace matforge {

const char* curation_reason_name(CurationReason reason) {
  switch (reason) {
    case CurationReason::NoOutput: return "NoOutput";
    case CurationReason::TooManyNodes: return "TooManyNodes";
    case CurationReason::TooManyTokens: return "TooManyTokens";
    case CurationReason::EmptyRender: return "EmptyRender";
    case CurationReason::UniformRender: return "UniformRender";
    case CurationReason::LowComplexity: return "LowComplexity";
  }
  return "?";
}

std::pair<MaterialGraph, std::vector<std::string>> prune_unreachable(
    const MaterialGraph& graph) {
  if (graph.output_node.empty() || !graph.find_node(graph.output_node)) {
    throw GraphError("prune_unreachable: a valid output node does not exist");
  }

  // Reverse-edge DFS from the output: a node is live if some path of edges
  // leads from it to the output.
  std::unordered_map<std::string, std::vector<std::string>> upstream;
  for (const Edge& edge : graph.edges) {
    upstream[edge.to.node_id].push_back(edge.from.node_id);
  }
  std::unordered_set<std::string> live;
  std::vector<std::string> stack{graph.output_node};
  live.insert(graph.output_node);
  while (!stack.empty()) {
    const std::string current = std::move(stack.back());
    stack.pop_back();
    for (const std::string& source : upstream[current]) {
      if (live.insert(source).second) stack.push_back(source);
    }
  }

  MaterialGraph pruned;
  pruned.output_node = graph.output_node;
  std::vector<std::string> removed;
  for (const Node& node : graph.nodes) {
    if (live.count(node.node_id)) {
      pruned.nodes.push_back(node);
    } else {
      removed.push_back(node.node_id);
    }
  }
  for (const Edge& edge : graph.edges) {
    if (live.count(edge.from.node_id) && live.count(edge.to.node_id)) {
      pruned.edges.push_back(edge);
    }
  }
  return {std::move(pruned), std::move(removed)};
}

namespace {

std::string fresh_node_id(const MaterialGraph& graph, std::string id) {
  while (graph.find_node(id)) id += "_";
  return id;
}

// Inlines one group instance in place.
void inline_instance(MaterialGraph& graph, const Node& instance,
                     const NodeTypeDef& def) {
  const GroupBody& body = def.group();

  // Inner ids, namespaced and made collision-free against the outer graph.
  std::unordered_map<std::string, std::string> inner_id;
  for (const Node& inner : body.inner.nodes) {
    inner_id[inner.node_id] =
        fresh_node_id(graph, instance.node_id + "." + inner.node_id);
  }

  MaterialGraph next;
  next.output_node = graph.output_node;
  for (const Node& node : graph.nodes) {
    if (node.node_id != instance.node_id) next.nodes.push_back(node);
  }
  for (const Node& inner : body.inner.nodes) {
    Node copy = inner;
    copy.node_id = inner_id.at(inner.node_id);
    next.nodes.push_back(std::move(copy));
  }
  for (const Edge& edge : body.inner.edges) {
    next.edges.push_back({{inner_id.at(edge.from.node_id), edge.from.socket},
                          {inner_id.at(edge.to.node_id), edge.to.socket}});
  }

  for (const Edge& edge : graph.edges) {
    const bool into = edge.to.node_id == instance.node_id;
    const bool outof = edge.from.node_id == instance.node_id;
    if (!into && !outof) {
      next.edges.push_back(edge);
      continue;
    }
    if (into) {
      // One outer edge fans out to every inner socket bound to that input.
      auto binding = body.input_bindings.find(edge.to.socket);
      if (binding == body.input_bindings.end()) continue;
      for (const SocketRef& target : binding->second) {
        next.edges.push_back(
            {edge.from, {inner_id.at(target.node_id), target.socket}});
      }
    } else {
      auto binding = body.output_bindings.find(edge.from.socket);
      if (binding == body.output_bindings.end()) continue;
      next.edges.push_back(
          {{inner_id.at(binding->second.node_id), binding->second.socket}, edge.to});
    }
  }

  // Unconnected group inputs push their value (instance override, else the
  // group's default) onto bound inner sockets, shadowing inner defaults.
  for (const SocketSpec& input : def.inputs) {
    if (graph.has_edge_into(instance.node_id, input.name)) continue;
    auto binding = body.input_bindings.find(input.name);
    if (binding == body.input_bindings.end()) continue;

    std::optional<ParamValue> value;
    if (auto it = instance.input_defaults.find(input.name);
        it != instance.input_defaults.end()) {
      value = it->second;
    } else if (input.default_value) {
      value = *input.default_value;
    }
    if (!value) continue;
    for (const SocketRef& target : binding->second) {
      Node* inner = next.find_node(inner_id.at(target.node_id));
      inner->input_defaults.insert_or_assign(target.socket, *value);
    }
  }

  graph = std::move(next);
}

}  // namespace

MaterialGraph expand_groups(const MaterialGraph& graph, const NodeTypeRegistry& registry,
                            int max_nodes, std::vector<std::string>* expanded) {
  MaterialGraph current = graph;
  for (;;) {
    // Smallest eligible instance: fewest inner nodes, ties by type_id then
    // node_id.
    const Node* best = nullptr;
    const NodeTypeDef* best_def = nullptr;
    int best_inner = 0;
    for (const Node& node : current.nodes) {
      const NodeTypeDef* def = registry.find(node.type_id);
      if (!def || !def->is_group()) continue;
      const int inner = static_cast<int>(def->group().inner.nodes.size());
      if (node_count(current) - 1 + inner > max_nodes) continue;
      if (!best || inner < best_inner ||
          (inner == best_inner &&
           std::tie(node.type_id, node.node_id) <
               std::tie(best->type_id, best->node_id))) {
        best = &node;
        best_def = def;
        best_inner = inner;
      }
    }
    if (!best) return current;
    if (expanded) expanded->push_back(best->node_id);
    inline_instance(current, *best, *best_def);
  }
}

int complexity_score(const TextureImage& image) {
  std::vector<unsigned char> bytes(image.data.size());
  for (std::size_t i = 0; i < image.data.size(); ++i) {
    const double v = std::clamp(static_cast<double>(image.data[i]), 0.0, 1.0);
    bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  uLongf bound = compressBound(static_cast<uLong>(bytes.size()));
  std::vector<unsigned char> compressed(bound);
  const int rc = compress2(compressed.data(), &bound, bytes.data(),
                           static_cast<uLong>(bytes.size()), 6);
  if (rc != Z_OK) return static_cast<int>(bytes.size());  // incompressible fallback
  return static_cast<int>(bound);
}

CurationReport validate_material(const MaterialGraph& graph,
                                 const NodeTypeRegistry& registry,
                                 const CurationConfig& curation_config,
                                 const RenderConfig& render_config,
                                 MaterialGraph* processed) {
  CurationReport report;
  auto reject = [&report](CurationReason reason) {
    if (std::find(report.reasons.begin(), report.reasons.end(), reason) ==
        report.reasons.end()) {
      report.reasons.push_back(reason);
    }
  };

  if (graph.output_node.empty() || !graph.find_node(graph.output_node)) {
    reject(CurationReason::NoOutput);
    report.note = "a valid output node does not exist";
    return report;
  }

  ValidationReport structure = validate_structure(graph, registry);
  if (!structure.ok) {
    // Structurally broken graphs cannot be emitted or rendered; classify by
    // the first violation and stop.
    for (const Violation& violation : structure.violations) {
      report.note += violation.message + "; ";
    }
    const bool output_problem = std::any_of(
        structure.violations.begin(), structure.violations.end(),
        [](const Violation& violation) {
          return violation.code == ViolationCode::MissingOutput ||
                 violation.code == ViolationCode::WrongOutputType;
        });
    reject(output_problem ? CurationReason::NoOutput : CurationReason::EmptyRender);
    return report;
  }

  auto [pruned, removed] = prune_unreachable(graph);
  report.pruned_node_ids = std::move(removed);
  MaterialGraph expanded = expand_groups(pruned, registry, curation_config.max_nodes,
                                         &report.expanded_groups);
  if (processed) *processed = expanded;

  if (node_count(expanded) > curation_config.max_nodes) {
    reject(CurationReason::TooManyNodes);
  }
  const ProgramText program = emit(expanded, registry);
  if (program.token_count > curation_config.max_tokens) {
    reject(CurationReason::TooManyTokens);
  }

  RenderConfig rc = render_config;
  rc.resolution = curation_config.resolution;
  TextureImage image;
  try {
    image = render(expanded, registry, rc);
  } catch (const EvalError& e) {
    reject(CurationReason::EmptyRender);
    report.note += e.what();
    return report;
  }

  if (mean_luminance(image) < 0.005) reject(CurationReason::EmptyRender);
  const Vec3 variance = channel_variance(image);
  if (variance.x < 1e-5 && variance.y < 1e-5 && variance.z < 1e-5) {
    reject(CurationReason::UniformRender);
  }
  if (complexity_score(image) < curation_config.complexity_threshold) {
    reject(CurationReason::LowComplexity);
  }

  report.accepted = report.reasons.empty();
  return report;
}

}  // namespace matforge
