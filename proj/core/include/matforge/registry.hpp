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
#include <string>

#include "matforge/graph.hpp"

namespace matforge {

// Node-type registry: the built-in library plus user-registered groups.
// Data-driven so custom types extend the system without code changes.
class NodeTypeRegistry {
 public:
  // Registers a type; type_id must be unique within the registry.
  void register_type(NodeTypeDef def);

  const NodeTypeDef* find(const std::string& type_id) const;
  bool contains(const std::string& type_id) const { return find(type_id) != nullptr; }

  const std::map<std::string, NodeTypeDef>& types() const { return types_; }

  // The built-in node library (texture generators, converters, shading,
  // material output). Construct once and share; lookups are read-only.
  static NodeTypeRegistry builtins();

 private:
  std::map<std::string, NodeTypeDef> types_;
};

}  // namespace matforge
