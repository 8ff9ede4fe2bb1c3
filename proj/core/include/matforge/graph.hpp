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

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "matforge/param_value.hpp"

namespace matforge {

class NodeTypeRegistry;

// Structural failures (cycles, missing output, bad group bindings) raised by
// operations whose preconditions exclude them. Validation itself reports
// violations as data instead of throwing.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Type schema

enum class SocketKind { Scalar, Vector, Color, Shader };

const char* socket_kind_name(SocketKind kind);

// Scalar/Vector/Color values convert freely at edges (broadcast and
// luminance rules applied by the evaluator); Shader connects only to Shader.
bool socket_kinds_compatible(SocketKind from, SocketKind to);

struct SocketSpec {
  std::string name;
  SocketKind data_kind = SocketKind::Scalar;
  // Value used when the socket is unconnected. Shader sockets never carry
  // one. Vector inputs of texture nodes also omit it: unconnected, they
  // fall back to the implicit UV coordinate.
  std::optional<ParamValue> default_value;
  // Bounds for the default value, mirroring ParamSpec: hard per-component
  // range, and soft statistical bounds for the parameter sampler.
  std::optional<std::pair<double, double>> range;
  std::optional<std::pair<double, double>> statistical_range;
};

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::Float;
  ParamValue default_value;
  // Hard per-component bounds for numeric kinds.
  std::optional<std::pair<double, double>> range;
  // Enum kinds enumerate their variants here.
  std::vector<std::string> enum_variants;
  // Soft bounds observed across a dataset; used by the parameter sampler
  // when no hard range exists.
  std::optional<std::pair<double, double>> statistical_range;
};

// Evaluation semantics of built-in node types. The registry maps type ids to
// these; evaluation dispatches on them.
enum class BuiltinOp {
  TexCoord,
  Mapping,
  TexNoise,
  TexVoronoi,
  TexChecker,
  TexBrick,
  TexWave,
  TexGradient,
  TexMagic,
  Math,
  VectorMath,
  MixColor,
  ColorRampNode,
  SeparateColor,
  CombineColor,
  HueSatVal,
  Invert,
  Bump,
  PrincipledBsdf,
  MaterialOutput,
};

// ---------------------------------------------------------------------------
// Graph instances

struct Node {
  std::string node_id;
  std::string type_id;
  // Sparse: absent keys mean "use the spec default". Values equal to the
  // default are dropped at serialization time.
  std::map<std::string, ParamValue> param_overrides;
  std::map<std::string, ParamValue> input_defaults;

  bool operator==(const Node&) const = default;
};

struct SocketRef {
  std::string node_id;
  std::string socket;
  bool operator==(const SocketRef&) const = default;
  auto operator<=>(const SocketRef&) const = default;
};

struct Edge {
  SocketRef from;  // output socket
  SocketRef to;    // input socket
  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

// The material IR: a DAG of typed nodes. Treated as immutable once built;
// operations return transformed copies.
struct MaterialGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::string output_node;

  const Node* find_node(const std::string& node_id) const;
  Node* find_node(const std::string& node_id);
  // The edge terminating at (node, socket), if any. Input sockets accept at
  // most one edge.
  const Edge* edge_into(const std::string& node_id, const std::string& socket) const;
  bool has_edge_into(const std::string& node_id, const std::string& socket) const;
};

// Equality up to reordering: same node set (by id, with identical type and
// overrides), same edge set, same output node.
bool graphs_equal(const MaterialGraph& a, const MaterialGraph& b);

// ---------------------------------------------------------------------------
// Node type definitions

struct BuiltinBody {
  BuiltinOp op;
};

// A node group: a reusable subgraph behind a node-type interface. Bindings
// map the group's sockets to sockets of inner nodes.
struct GroupBody {
  MaterialGraph inner;
  // group input socket -> inner input sockets fed by it (fan-out allowed)
  std::map<std::string, std::vector<SocketRef>> input_bindings;
  // group output socket -> inner output socket providing it
  std::map<std::string, SocketRef> output_bindings;
};

struct NodeTypeDef {
  std::string type_id;
  std::vector<SocketSpec> inputs;
  std::vector<SocketSpec> outputs;
  std::vector<ParamSpec> params;
  std::variant<BuiltinBody, GroupBody> body = BuiltinBody{BuiltinOp::TexCoord};
  bool is_material_output = false;

  bool is_group() const { return std::holds_alternative<GroupBody>(body); }
  const GroupBody& group() const { return std::get<GroupBody>(body); }
  BuiltinOp builtin_op() const { return std::get<BuiltinBody>(body).op; }

  const SocketSpec* find_input(const std::string& name) const;
  const SocketSpec* find_output(const std::string& name) const;
  const ParamSpec* find_param(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationCode {
  UnknownNodeType,
  DuplicateNodeId,
  UnknownSocket,
  UnknownParam,
  ParamKindMismatch,
  MalformedParamValue,
  EdgeEndpointMissing,
  IncompatibleSocketKinds,
  DuplicateInputEdge,
  Cycle,
  MissingOutput,
  WrongOutputType,
  BadGroupBinding,
};

const char* violation_code_name(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string message;  // human-readable context (node/socket names)
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

// Checks every MaterialGraph/Node/Edge invariant against the registry.
// Violations are data, not failures; the call itself never throws.
ValidationReport validate_structure(const MaterialGraph& graph,
                                    const NodeTypeRegistry& registry);

// Deterministic topological order: sources first, ties broken by node_id
// (lexicographic). Throws GraphError on a cycle or duplicate ids.
std::vector<std::string> topo_order(const MaterialGraph& graph);

// Number of nodes; each node-group instance counts as one node.
int node_count(const MaterialGraph& graph);

}  // namespace matforge
