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

#include "matforge/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "matforge/registry.hpp"

namespace matforge {

const char* socket_kind_name(SocketKind kind) {
  switch (kind) {
    case SocketKind::Scalar: return "Scalar";
    case SocketKind::Vector: return "Vector";
    case SocketKind::Color: return "Color";
    case SocketKind::Shader: return "Shader";
  }
  return "?";
}

bool socket_kinds_compatible(SocketKind from, SocketKind to) {
  if (from == SocketKind::Shader || to == SocketKind::Shader) {
    return from == to;
  }
  return true;
}

const char* violation_code_name(ViolationCode code) {
  switch (code) {
    case ViolationCode::UnknownNodeType: return "unknown node type";
    case ViolationCode::DuplicateNodeId: return "duplicate node id";
    case ViolationCode::UnknownSocket: return "unknown socket";
    case ViolationCode::UnknownParam: return "unknown parameter";
    case ViolationCode::ParamKindMismatch: return "parameter kind mismatch";
    case ViolationCode::MalformedParamValue: return "malformed parameter value";
    case ViolationCode::EdgeEndpointMissing: return "edge endpoint missing";
    case ViolationCode::IncompatibleSocketKinds: return "incompatible socket kinds";
    case ViolationCode::DuplicateInputEdge: return "duplicate input edge";
    case ViolationCode::Cycle: return "cycle";
    case ViolationCode::MissingOutput: return "missing output";
    case ViolationCode::WrongOutputType: return "wrong output type";
    case ViolationCode::BadGroupBinding: return "bad group binding";
  }
  return "?";
}

const Node* MaterialGraph::find_node(const std::string& node_id) const {
  for (const Node& n : nodes) {
    if (n.node_id == node_id) return &n;
  }
  return nullptr;
}

Node* MaterialGraph::find_node(const std::string& node_id) {
  for (Node& n : nodes) {
    if (n.node_id == node_id) return &n;
  }
  return nullptr;
}

const Edge* MaterialGraph::edge_into(const std::string& node_id,
                                     const std::string& socket) const {
  for (const Edge& e : edges) {
    if (e.to.node_id == node_id && e.to.socket == socket) return &e;
  }
  return nullptr;
}

bool MaterialGraph::has_edge_into(const std::string& node_id,
                                  const std::string& socket) const {
  return edge_into(node_id, socket) != nullptr;
}

bool graphs_equal(const MaterialGraph& a, const MaterialGraph& b) {
  if (a.output_node != b.output_node) return false;
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;

  auto node_key = [](const Node& n) { return n.node_id; };
  std::map<std::string, const Node*> am, bm;
  for (const Node& n : a.nodes) am[node_key(n)] = &n;
  for (const Node& n : b.nodes) bm[node_key(n)] = &n;
  if (am.size() != a.nodes.size() || bm.size() != b.nodes.size()) return false;
  for (const auto& [id, na] : am) {
    auto it = bm.find(id);
    if (it == bm.end() || !(*na == *it->second)) return false;
  }

  std::set<Edge> ae(a.edges.begin(), a.edges.end());
  std::set<Edge> be(b.edges.begin(), b.edges.end());
  return ae == be;
}

const SocketSpec* NodeTypeDef::find_input(const std::string& name) const {
  for (const SocketSpec& s : inputs) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const SocketSpec* NodeTypeDef::find_output(const std::string& name) const {
  for (const SocketSpec& s : outputs) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const ParamSpec* NodeTypeDef::find_param(const std::string& name) const {
  for (const ParamSpec& p : params) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

namespace {

// Kahn's algorithm with a lexicographic ready queue. Returns std::nullopt on
// a cycle.
std::optional<std::vector<std::string>> topo_order_impl(const MaterialGraph& graph) {
  std::unordered_map<std::string, int> indegree;
  std::unordered_map<std::string, std::vector<std::string>> downstream;
  for (const Node& n : graph.nodes) indegree[n.node_id];

  for (const Edge& e : graph.edges) {
    if (!indegree.count(e.from.node_id) || !indegree.count(e.to.node_id)) continue;
    downstream[e.from.node_id].push_back(e.to.node_id);
    ++indegree[e.to.node_id];
  }

  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push(id);
  }

  std::vector<std::string> order;
  order.reserve(graph.nodes.size());
  while (!ready.empty()) {
    std::string id = ready.top();
    ready.pop();
    order.push_back(id);
    for (const std::string& next : downstream[id]) {
      if (--indegree[next] == 0) ready.push(next);
    }
  }

  if (order.size() != indegree.size()) return std::nullopt;  // cycle
  return order;
}

bool has_duplicate_ids(const MaterialGraph& graph) {
  std::unordered_set<std::string> seen;
  for (const Node& n : graph.nodes) {
    if (!seen.insert(n.node_id).second) return true;
  }
  return false;
}

void check_override(const NodeTypeDef& def, const Node& node,
                    const std::string& name, const ParamValue& value,
                    bool is_input_default, std::vector<Violation>& out) {
  const std::string where = node.node_id + "." + name;
  if (is_input_default) {
    const SocketSpec* sock = def.find_input(name);
    if (!sock) {
      out.push_back({ViolationCode::UnknownSocket,
                     "input default names no input socket: " + where});
      return;
    }
    if (!sock->default_value.has_value()) {
      out.push_back({ViolationCode::UnknownSocket,
                     "socket takes no default value: " + where});
      return;
    }
    if (sock->default_value->kind() != value.kind()) {
      out.push_back({ViolationCode::ParamKindMismatch,
                     "input default kind mismatch at " + where + ": expected " +
                         param_kind_name(sock->default_value->kind()) + ", got " +
                         param_kind_name(value.kind())});
      return;
    }
  } else {
    const ParamSpec* spec = def.find_param(name);
    if (!spec) {
      out.push_back({ViolationCode::UnknownParam,
                     "override names no parameter: " + where});
      return;
    }
    if (spec->kind != value.kind()) {
      out.push_back({ViolationCode::ParamKindMismatch,
                     "parameter kind mismatch at " + where + ": expected " +
                         param_kind_name(spec->kind) + ", got " +
                         param_kind_name(value.kind())});
      return;
    }
    if (value.kind() == ParamKind::Enum) {
      const auto& variants = spec->enum_variants;
      if (std::find(variants.begin(), variants.end(), value.as_enum()) == variants.end()) {
        out.push_back({ViolationCode::MalformedParamValue,
                       "unknown enum variant '" + value.as_enum() + "' at " + where});
        return;
      }
    }
  }
  if (!value.well_formed()) {
    out.push_back({ViolationCode::MalformedParamValue,
                   "value violates its kind invariants at " + where});
  }
}

}  // namespace

ValidationReport validate_structure(const MaterialGraph& graph,
                                    const NodeTypeRegistry& registry) {
  ValidationReport report;
  auto& v = report.violations;

  std::unordered_set<std::string> seen_ids;
  for (const Node& n : graph.nodes) {
    if (!seen_ids.insert(n.node_id).second) {
      v.push_back({ViolationCode::DuplicateNodeId, n.node_id});
    }
  }

  for (const Node& n : graph.nodes) {
    const NodeTypeDef* def = registry.find(n.type_id);
    if (!def) {
      v.push_back({ViolationCode::UnknownNodeType,
                   n.node_id + " has unknown type '" + n.type_id + "'"});
      continue;
    }
    for (const auto& [name, value] : n.param_overrides) {
      check_override(*def, n, name, value, /*is_input_default=*/false, v);
    }
    for (const auto& [name, value] : n.input_defaults) {
      check_override(*def, n, name, value, /*is_input_default=*/true, v);
    }
    if (def->is_group()) {
      // Group bindings must reference existing inner nodes/sockets.
      const GroupBody& body = def->group();
      for (const auto& [sock, targets] : body.input_bindings) {
        for (const SocketRef& ref : targets) {
          if (!body.inner.find_node(ref.node_id)) {
            v.push_back({ViolationCode::BadGroupBinding,
                         n.type_id + ": input binding '" + sock +
                             "' references missing inner node '" + ref.node_id + "'"});
          } else if (body.inner.has_edge_into(ref.node_id, ref.socket)) {
            // A bound socket is driven by the group interface; an inner edge
            // into it would be ambiguous.
            v.push_back({ViolationCode::BadGroupBinding,
                         n.type_id + ": input binding '" + sock +
                             "' targets a connected inner socket " + ref.node_id +
                             "." + ref.socket});
          }
        }
      }
      for (const auto& [sock, ref] : body.output_bindings) {
        if (!body.inner.find_node(ref.node_id)) {
          v.push_back({ViolationCode::BadGroupBinding,
                       n.type_id + ": output binding '" + sock +
                           "' references missing inner node '" + ref.node_id + "'"});
        }
      }
    }
  }

  std::set<std::pair<std::string, std::string>> input_slots;
  for (const Edge& e : graph.edges) {
    const Node* from = graph.find_node(e.from.node_id);
    const Node* to = graph.find_node(e.to.node_id);
    if (!from || !to) {
      v.push_back({ViolationCode::EdgeEndpointMissing,
                   e.from.node_id + " -> " + e.to.node_id});
      continue;
    }
    const NodeTypeDef* from_def = registry.find(from->type_id);
    const NodeTypeDef* to_def = registry.find(to->type_id);
    if (!from_def || !to_def) continue;  // already reported above

    const SocketSpec* out_sock = from_def->find_output(e.from.socket);
    const SocketSpec* in_sock = to_def->find_input(e.to.socket);
    if (!out_sock) {
      v.push_back({ViolationCode::UnknownSocket,
                   e.from.node_id + "." + e.from.socket + " (output)"});
    }
    if (!in_sock) {
      v.push_back({ViolationCode::UnknownSocket,
                   e.to.node_id + "." + e.to.socket + " (input)"});
    }
    if (out_sock && in_sock &&
        !socket_kinds_compatible(out_sock->data_kind, in_sock->data_kind)) {
      v.push_back({ViolationCode::IncompatibleSocketKinds,
                   e.from.node_id + "." + e.from.socket + " (" +
                       socket_kind_name(out_sock->data_kind) + ") -> " +
                       e.to.node_id + "." + e.to.socket + " (" +
                       socket_kind_name(in_sock->data_kind) + ")"});
    }
    if (in_sock && !input_slots.insert({e.to.node_id, e.to.socket}).second) {
      v.push_back({ViolationCode::DuplicateInputEdge,
                   e.to.node_id + "." + e.to.socket});
    }
  }

  const Node* output = graph.find_node(graph.output_node);
  if (graph.output_node.empty() || !output) {
    v.push_back({ViolationCode::MissingOutput,
                 "output node '" + graph.output_node + "' does not exist"});
  } else if (const NodeTypeDef* def = registry.find(output->type_id);
             def && !def->is_material_output) {
    v.push_back({ViolationCode::WrongOutputType,
                 graph.output_node + " is of type '" + output->type_id +
                     "', not a material output"});
  }

  if (!has_duplicate_ids(graph) && !topo_order_impl(graph).has_value()) {
    v.push_back({ViolationCode::Cycle, "graph contains a cycle"});
  }

  report.ok = v.empty();
  return report;
}

std::vector<std::string> topo_order(const MaterialGraph& graph) {
  if (has_duplicate_ids(graph)) {
    throw GraphError("topo_order: duplicate node ids");
  }
  auto order = topo_order_impl(graph);
  if (!order) throw GraphError("topo_order: graph contains a cycle");
  return *order;
}

int node_count(const MaterialGraph& graph) {
  return static_cast<int>(graph.nodes.size());
}

}  // namespace matforge
