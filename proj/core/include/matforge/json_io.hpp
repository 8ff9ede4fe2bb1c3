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

#include <stdexcept>
#include <string>

#include "matforge/graph.hpp"

namespace matforge {

class JsonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical graph wire format, used for fixtures and the CLI:
//   {"nodes": [{"id": ..., "type": ..., "params": {...},
//               "input_defaults": {...}}],
//    "edges": [{"from": ["id", "sock"], "to": ["id", "sock"]}],
//    "output": "id"}
// Parameter values are tagged single-key objects: {"float": x}, {"int": n},
// {"vector": [x,y,z]}, {"color": [r,g,b,a]}, {"enum": "VARIANT"},
// {"bool": b}, {"ramp": {"interpolation": "...", "stops": [{"pos": p,
// "color": [r,g,b,a]}]}}. Key order is canonical; emission is stable.
std::string graph_to_json(const MaterialGraph& graph);
MaterialGraph graph_from_json(const std::string& text);

std::string param_value_to_json(const ParamValue& value);
ParamValue param_value_from_json(const std::string& text);

}  // namespace matforge
