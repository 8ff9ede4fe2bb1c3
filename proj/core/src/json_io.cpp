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

#include "matforge/json_io.hpp"

#include <json.hpp>

namespace matforge {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json color_to_json(const Color4& c) {
  return ordered_json::array({c.r, c.g, c.b, c.a});
}

Color4 color_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw JsonError("color must be a 4-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
          j[3].get<double>()};
}

ordered_json value_to_json(const ParamValue& value) {
  ordered_json j;
  switch (value.kind()) {
    case ParamKind::Float:
      j["float"] = value.as_float();
      break;
    case ParamKind::Int:
      j["int"] = value.as_int();
      break;
    case ParamKind::Vector: {
      const Vec3 v = value.as_vector();
      j["vector"] = ordered_json::array({v.x, v.y, v.z});
      break;
    }
    case ParamKind::Color:
      j["color"] = color_to_json(value.as_color());
      break;
    case ParamKind::ColorRamp: {
      const ColorRampValue& ramp = value.as_ramp();
      ordered_json stops = ordered_json::array();
      for (const RampStop& stop : ramp.stops) {
        ordered_json s;
        s["pos"] = stop.position;
        s["color"] = color_to_json(stop.color);
        stops.push_back(std::move(s));
      }
      ordered_json r;
      r["interpolation"] = ramp_interpolation_name(ramp.interpolation);
      r["stops"] = std::move(stops);
      j["ramp"] = std::move(r);
      break;
    }
    case ParamKind::Enum:
      j["enum"] = value.as_enum();
      break;
    case ParamKind::Bool:
      j["bool"] = value.as_bool();
      break;
  }
  return j;
}

ParamValue value_from_json(const ordered_json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw JsonError("parameter value must be a single-key tagged object");
  }
  const auto& [key, body] = *j.items().begin();
  if (key == "float") return ParamValue::of_float(body.get<double>());
  if (key == "int") return ParamValue::of_int(body.get<long long>());
  if (key == "vector") {
    if (!body.is_array() || body.size() != 3) {
      throw JsonError("vector must be a 3-element array");
    }
    return ParamValue::of_vector(
        {body[0].get<double>(), body[1].get<double>(), body[2].get<double>()});
  }
  if (key == "color") return ParamValue::of_color(color_from_json(body));
  if (key == "enum") return ParamValue::of_enum(body.get<std::string>());
  if (key == "bool") return ParamValue::of_bool(body.get<bool>());
  if (key == "ramp") {
    ColorRampValue ramp;
    const std::string interp = body.at("interpolation").get<std::string>();
    if (!ramp_interpolation_from_name(interp, ramp.interpolation)) {
      throw JsonError("unknown ramp interpolation '" + interp + "'");
    }
    for (const auto& stop : body.at("stops")) {
      ramp.stops.push_back(
          {stop.at("pos").get<double>(), color_from_json(stop.at("color"))});
    }
    return ParamValue::of_ramp(std::move(ramp));
  }
  throw JsonError("unknown parameter value tag '" + key + "'");
}

ordered_json socket_ref_to_json(const SocketRef& ref) {
  return ordered_json::array({ref.node_id, ref.socket});
}

SocketRef socket_ref_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw JsonError("socket reference must be [\"id\", \"socket\"]");
  }
  return {j[0].get<std::string>(), j[1].get<std::string>()};
}

ordered_json graph_to_ordered_json(const MaterialGraph& graph) {
  ordered_json j;
  ordered_json nodes = ordered_json::array();
  for (const Node& node : graph.nodes) {
    ordered_json n;
    n["id"] = node.node_id;
    n["type"] = node.type_id;
    ordered_json params = ordered_json::object();
    for (const auto& [name, value] : node.param_overrides) {
      params[name] = value_to_json(value);
    }
    n["params"] = std::move(params);
    ordered_json defaults = ordered_json::object();
    for (const auto& [name, value] : node.input_defaults) {
      defaults[name] = value_to_json(value);
    }
    n["input_defaults"] = std::move(defaults);
    nodes.push_back(std::move(n));
  }
  j["nodes"] = std::move(nodes);

  ordered_json edges = ordered_json::array();
  for (const Edge& edge : graph.edges) {
    ordered_json e;
    e["from"] = socket_ref_to_json(edge.from);
    e["to"] = socket_ref_to_json(edge.to);
    edges.push_back(std::move(e));
  }
  j["edges"] = std::move(edges);
  j["output"] = graph.output_node;
  return j;
}

}  // namespace

std::string graph_to_json(const MaterialGraph& graph) {
  return graph_to_ordered_json(graph).dump(2);
}

MaterialGraph graph_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw JsonError(std::string("graph JSON parse failed: ") + e.what());
  }
  try {
    MaterialGraph graph;
    for (const auto& n : j.at("nodes")) {
      Node node;
      node.node_id = n.at("id").get<std::string>();
      node.type_id = n.at("type").get<std::string>();
      if (n.contains("params")) {
        for (const auto& [name, value] : n.at("params").items()) {
          node.param_overrides.emplace(name, value_from_json(value));
        }
      }
      if (n.contains("input_defaults")) {
        for (const auto& [name, value] : n.at("input_defaults").items()) {
          node.input_defaults.emplace(name, value_from_json(value));
        }
      }
      graph.nodes.push_back(std::move(node));
    }
    if (j.contains("edges")) {
      for (const auto& e : j.at("edges")) {
        graph.edges.push_back(
            {socket_ref_from_json(e.at("from")), socket_ref_from_json(e.at("to"))});
      }
    }
    graph.output_node = j.at("output").get<std::string>();
    return graph;
  } catch (const nlohmann::json::exception& e) {
    throw JsonError(std::string("graph JSON structure invalid: ") + e.what());
  }
}

std::string param_value_to_json(const ParamValue& value) {
  return value_to_json(value).dump();
}

ParamValue param_value_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw JsonError(std::string("parameter JSON parse failed: ") + e.what());
  }
  return value_from_json(j);
}

}  // namespace matforge
