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

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "matforge/curate.hpp"
#include "matforge/metrics.hpp"
#include "matforge/registry.hpp"
#include "matforge/render.hpp"

namespace matforge {

// Budgeted evaluation of candidate programs against one target image:
// candidates are consumed in order until k_valid of them pass curation or
// n_max have been tried, and the valid one with the lowest style loss wins.
struct ProtocolConfig {
  int n_max = 50;
  int k_valid = 20;
  CurationConfig curation;
  RenderConfig render_config;  // lighting/seed for the scoring render; its
                               // resolution is overridden by the target's
  FeatureBankConfig bank;
  int swd_projections = 64;
  int swd_patch_size = 3;
  std::uint64_t swd_seed = 0;
};

struct ProtocolResult {
  std::string image_id;
  int n_tried = 0;
  int k_valid_found = 0;
  double correctness = 0.0;  // k_valid_found / n_tried
  std::optional<int> best_index;  // position in the candidate order
  std::string best_program;       // source text of the winner; empty if none
  LossReport best_losses;
};

// Candidate programs by position: returns the text at `index` or nullptr
// past the end. Called in order, each index at most once, and never beyond
// the stopping point, so expensive sources can stay lazy.
using CandidateSource = std::function<const std::string*(std::size_t index)>;

// Runs the N/K protocol. A candidate is valid when it parses and passes the
// full curation pipeline; valid candidates are re-rendered at the target's
// resolution and scored. Requires a square target of curation-capable size.
ProtocolResult run_protocol(const TextureImage& target, const CandidateSource& candidates,
                            const NodeTypeRegistry& registry, const ProtocolConfig& config,
                            const std::string& image_id = "");

ProtocolResult run_protocol(const TextureImage& target,
                            const std::vector<std::string>& candidates,
                            const NodeTypeRegistry& registry, const ProtocolConfig& config,
                            const std::string& image_id = "");

struct BatchSummary {
  int images = 0;
  int images_with_result = 0;  // results holding a valid best program
  // Means of the winning programs' losses, over images_with_result.
  double mean_style = 0.0;
  double mean_swd = 0.0;
  // Mean correctness over all images.
  double mean_correctness = 0.0;
};

BatchSummary batch_report(const std::vector<ProtocolResult>& results);

// Runs the protocol for every `<suite_dir>/<image-id>/` directory holding a
// `target.png` (or `target.f32`) and `*.matl` candidates in filename order.
// Candidate files are read lazily, honoring the stopping rule. Images run
// in parallel; per-image failures are reported on `log` and skipped.
// Results come back sorted by image id.
std::vector<ProtocolResult> run_suite(const std::string& suite_dir,
                                      const NodeTypeRegistry& registry,
                                      const ProtocolConfig& config,
                                      std::ostream* log = nullptr, int threads = 0);

}  // namespace matforge
