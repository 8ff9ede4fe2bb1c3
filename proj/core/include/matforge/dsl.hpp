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
#include "matforge/registry.hpp"

namespace matforge {

// Textual material programs. Statement forms (see docs/grammar.md):
//   var = node("TypeId", "node_id")
//   link(a.OutSocket, b.InSocket)
//   var.Name = literal
// Literals: numbers, true/false, "ENUM", vector(x,y,z), color(r,g,b,a),
// ramp("LINEAR", stop(pos, color(r,g,b,a)), ...). '#' starts a comment.

enum class DslErrorKind {
  Lexical,     // malformed token
  Semantic,    // unknown type / socket / parameter, kind mismatch
  Structural,  // cycle, missing or duplicate output, failed validation
};

class DslError : public std::runtime_error {
 public:
  DslError(DslErrorKind kind, int line, int column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        kind_(kind),
        line_(line),
        column_(column) {}

  DslErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  DslErrorKind kind_;
  int line_;
  int column_;
};

struct ProgramText {
  std::string source;
  int token_count = 0;
};

// Builds a graph from a program. The result always passes validate_structure
// against the given registry. Unknown statements are rejected, not skipped.
MaterialGraph parse(const std::string& source, const NodeTypeRegistry& registry);

// Renders a graph back to a program: declarations in topological order,
// then links, then assignments for every parameter that differs from its
// spec default. Byte-identical across runs for the same graph.
ProgramText emit(const MaterialGraph& graph, const NodeTypeRegistry& registry);

// Number of lexical tokens (identifiers, literals, punctuation). Comments
// and whitespace do not count. Throws DslError on a lexical error.
int count_tokens(const std::string& source);

}  // namespace matforge
