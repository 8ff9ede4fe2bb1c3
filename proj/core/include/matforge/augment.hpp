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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "matforge/graph.hpp"
#include "matforge/registry.hpp"
#include "matforge/rng.hpp"

namespace matforge {

// ---------------------------------------------------------------------------
// Parameter-space sampling

struct ParamSampleConfig {
  // Relative half-width of the sampling interval around the current value.
  double rel_interval = 0.25;
  // Absolute floor for the half-width, so near-zero values still move.
  double abs_min_interval = 0.05;
  // Hue is drawn from the full [0, 1] range; when false it is perturbed
  // by +/- sv_interval (wrapped, hue is cyclic).
  bool hue_full_range = true;
  // Half-width for saturation and value channels, clamped to [0, 1].
  double sv_interval = 0.5;
  // Chance that a categorical (enum/bool) parameter is re-rolled.
  double categorical_prob = 0.25;
  // Chance that a parameter still at its spec default is sampled at all.
  double default_param_prob = 0.2;
  std::uint64_t rng_seed = 0;
};

struct ParamSampleResult {
  MaterialGraph graph;
  // Set when a token limit was given and even the all-default program
  // exceeds it; `graph` then carries no overrides at all.
  bool forced_all_default = false;
};

// One samplable slot of a graph: a node parameter, or the stored value of
// an unconnected input socket.
struct ParamSlot {
  std::string node_id;
  std::string name;
  bool is_param = true;  // false: input-socket default
};

// Every slot of `graph`, in node order then declaration order. Input
// sockets qualify only when their spec carries a default value and no edge
// feeds them.
std::vector<ParamSlot> eligible_parameters(const MaterialGraph& graph,
                                           const NodeTypeRegistry& registry);

// Draw a replacement for a single value around `current` under the interval
// rules above. The socket variant dispatches on the stored value's kind
// (socket defaults are never enums or ramps).
ParamValue sample_param_value(Pcg32& rng, const ParamSampleConfig& config,
                              const ParamSpec& spec, const ParamValue& current);
ParamValue sample_socket_default(Pcg32& rng, const ParamSampleConfig& config,
                                 const SocketSpec& spec, const ParamValue& current);

// Re-draws one slot of `graph` in place around its current value. Slots
// that no longer resolve (stale ParamSlot) are ignored.
void resample_slot(MaterialGraph& graph, const NodeTypeRegistry& registry,
                   const ParamSlot& slot, const ParamSampleConfig& config, Pcg32& rng);

// Re-samples node parameters and unconnected input-socket values around
// their current settings. Structure (nodes, edges, output) is never touched.
//
// Continuous values are drawn uniformly from [v - d, v + d] intersected with
// the feasible range, where d = max(rel_interval * |v|, abs_min_interval).
// The feasible range is the spec's hard range when present, else its
// statistical range, else unbounded. Vector components are independent;
// integers round to nearest; colors are sampled in HSV; ramp stops move
// their positions (re-sorted afterwards) and colors. Values already at
// their spec default are only sampled with probability default_param_prob.
//
// With a token limit, parameters are reset to spec defaults in random order
// until the emitted program fits. An unsatisfiable limit yields the
// all-default graph with forced_all_default set.
ParamSampleResult sample_parameters(const MaterialGraph& graph,
                                    const NodeTypeRegistry& registry,
                                    const ParamSampleConfig& config,
                                    std::optional<int> token_limit = std::nullopt);

// ---------------------------------------------------------------------------
// Structure crossover

struct CrossoverConfig {
  int max_nodes = 30;
  int trials_per_pair = 20;
  int max_valid_per_pair = 4;
  std::uint64_t rng_seed = 0;
};

// Produces one child program from two parent programs (DSL text). Returns
// nullopt when no proposal can be made for this trial. Implementations must
// be deterministic in (parent_a, parent_b, trial_seed).
class CrossoverBackend {
 public:
  virtual ~CrossoverBackend() = default;
  virtual std::optional<std::string> propose(const std::string& parent_a,
                                             const std::string& parent_b,
                                             std::uint64_t trial_seed) = 0;
};

// Built-in rule-based generator: picks a cut node in parent A, disconnects
// its inputs, and grafts a kind-compatible output subgraph copied from
// parent B onto the freed sockets. Group instances are expanded first, so
// children only use node types occurring in the (expanded) parents.
class SpliceBackend : public CrossoverBackend {
 public:
  explicit SpliceBackend(const NodeTypeRegistry& registry) : registry_(&registry) {}

  std::optional<std::string> propose(const std::string& parent_a,
                                     const std::string& parent_b,
                                     std::uint64_t trial_seed) override;

 private:
  const NodeTypeRegistry* registry_;
};

// External generator speaking JSON over HTTP:
//   request  {"instruction": ..., "parent_a": ..., "parent_b": ..., "seed": N}
//   response {"program": ...}   (or the program as a plain text body)
struct HttpBackendConfig {
  std::string host = "127.0.0.1";
  int port = 8777;
  std::string path = "/v1/crossover";
  int timeout_seconds = 30;
  int max_retries = 2;
  // Instruction text sent with every request; empty selects the built-in
  // template (see default_crossover_instruction / data/crossover_instruction.txt).
  std::string instruction;
};

class HttpBackend : public CrossoverBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {}

  std::optional<std::string> propose(const std::string& parent_a,
                                     const std::string& parent_b,
                                     std::uint64_t trial_seed) override;

 private:
  HttpBackendConfig config_;
};

// The instruction template used when HttpBackendConfig.instruction is empty.
const std::string& default_crossover_instruction();

// Breeds up to max_valid_per_pair children from the two parents, using
// trials_per_pair seeded backend proposals. Every returned child has passed
// the full curation pipeline (pruned, expanded, rendered, complexity
// checked) under the given node budget. Backend failures and rejected
// proposals are skipped; the result may be empty. Passing backend == nullptr
// selects the built-in SpliceBackend.
std::vector<MaterialGraph> crossover(const MaterialGraph& parent_a,
                                     const MaterialGraph& parent_b,
                                     const NodeTypeRegistry& registry,
                                     const CrossoverConfig& config,
                                     CrossoverBackend* backend = nullptr);

// Grows the pool by repeatedly crossing uniformly chosen pairs (drawn from
// the evolving pool) until it reaches target_count or the attempt budget
// (25 pair attempts per missing member) runs out. Offspring are appended in
// generation order; the input members are never modified. Backend failures
// are reported on `log` when given, and skipped.
std::vector<MaterialGraph> evolve_pool(std::vector<MaterialGraph> pool,
                                       const NodeTypeRegistry& registry,
                                       CrossoverBackend& backend,
                                       std::size_t target_count,
                                       const CrossoverConfig& config,
                                       std::ostream* log = nullptr);

}  // namespace matforge
