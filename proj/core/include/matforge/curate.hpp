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

#include <string>
#include <utility>
#include <vector>

#include "matforge/graph.hpp"
#include "matforge/registry.hpp"
#include "matforge/render.hpp"

namespace matforge {

struct CurationConfig {
  int max_nodes = 30;
  int max_tokens = 2048;
  // Minimum compressed size (bytes) of the validation render; below it the
  // texture is considered featureless. Calibrated for the default 128x128
  // validation render: uniform images land near 70, the flattest accepted
  // fixtures (waves, gradients, bricks) at 500+. Scale it when changing the
  // resolution.
  int complexity_threshold = 256;
  int resolution = 128;  // validation render resolution
};

enum class CurationReason {
  NoOutput,
  TooManyNodes,
  TooManyTokens,
  EmptyRender,
  UniformRender,
  LowComplexity,
};

const char* curation_reason_name(CurationReason reason);

struct CurationReport {
  bool accepted = false;
  std::vector<CurationReason> reasons;        // empty iff accepted
  std::vector<std::string> pruned_node_ids;   // removed by reachability pruning
  std::vector<std::string> expanded_groups;   // instance ids, in expansion order
  // Diagnostic detail for failures that carry context (structural
  // violations, evaluation errors). Empty otherwise.
  std::string note;
};

// Nodes reachable from the output by reverse-edge DFS, plus the removed
// ids (in graph order). Render-equivalent to the input. Throws GraphError
// when a valid output node does not exist.
std::pair<MaterialGraph, std::vector<std::string>> prune_unreachable(
    const MaterialGraph& graph);

// Repeatedly inlines the group instance whose definition has the fewest
// inner nodes (ties: type_id, then node_id, lexicographic) while the
// post-expansion node count stays within max_nodes. Inlined ids are
// namespaced "<instance>.<inner>". Appends each expanded instance id to
// *expanded when given.
MaterialGraph expand_groups(const MaterialGraph& graph, const NodeTypeRegistry& registry,
                            int max_nodes, std::vector<std::string>* expanded = nullptr);

// Compressed size, in bytes, of the image's 8-bit quantized RGB stream
// under a fixed deterministic compressor. A proxy for spatial complexity:
// uniform images score near zero, dense texture scores high.
int complexity_score(const TextureImage& image);

// The full curation pipeline, in order: output existence, reachability
// pruning, group expansion, node budget, token budget, validation render,
// degeneracy checks (mean luminance < 0.005 => EmptyRender; per-channel
// variance < 1e-5 => UniformRender), complexity threshold. All failures are
// reported, not just the first. Evaluation errors become EmptyRender with
// the message in `note`. When `processed` is non-null it receives the
// pruned+expanded graph (on reports that got that far).
CurationReport validate_material(const MaterialGraph& graph,
                                 const NodeTypeRegistry& registry,
                                 const CurationConfig& curation_config,
                                 const RenderConfig& render_config,
                                 MaterialGraph* processed = nullptr);

}  // namespace matforge
