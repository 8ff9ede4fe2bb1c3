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
#include <utility>
#include <vector>

#include "matforge/graph.hpp"
#include "matforge/metrics.hpp"
#include "matforge/registry.hpp"
#include "matforge/render.hpp"
#include "matforge/rng.hpp"

namespace matforge {

// MCMC parameter search: keeps graph structure fixed and re-samples a
// fraction of the parameters each iteration, accepting improvements always
// and regressions with a small fixed probability.
struct McmcConfig {
  int n_iters = 200;
  double p_acc = 0.05;           // chance of accepting a worse proposal
  double param_fraction = 0.10;  // share of eligible parameters per proposal
  double rel_interval = 0.20;    // proposal half-width, relative to |value|
  double categorical_prob = 0.2;
  std::uint64_t rng_seed = 0;
  RenderConfig render_config;  // seed is fixed for the whole chain, so noise
                               // fields stay stable across proposals
  FeatureBankConfig bank;
  // Loss = style_weight * style_loss + swd_weight * swd. Style loss already
  // folds in the downsample term.
  double style_weight = 1.0;
  double swd_weight = 0.0;
};

struct McmcIteration {
  int iteration = 0;
  double proposal_loss = 0.0;  // +inf when the proposal failed to render
  bool accepted = false;
  double best_loss = 0.0;  // best-so-far after this iteration
  int sampled_params = 0;  // slots re-drawn for this proposal
};

struct McmcTrace {
  double initial_loss = 0.0;
  std::vector<McmcIteration> iterations;
  double best_loss = 0.0;
};

// Accepts strictly better losses; otherwise accepts with probability p_acc
// (consuming one draw).
bool acceptance_decision(double l_new, double l_cur, double p_acc, Pcg32& rng);

// Runs the chain from `initial` toward `target` and returns the best graph
// seen plus the per-iteration trace. Each proposal re-draws exactly
// ceil(param_fraction * |eligible slots|) parameters without replacement;
// hue moves within the same +/- rel_interval window as the other channels.
// Deterministic in config.rng_seed. Throws std::invalid_argument when the
// config is out of range or the target does not match the render
// resolution; render failures on proposals are recorded as +inf and
// rejected.
std::pair<MaterialGraph, McmcTrace> mcmc_optimize(const MaterialGraph& initial,
                                                  const TextureImage& target,
                                                  const NodeTypeRegistry& registry,
                                                  const McmcConfig& config);

}  // namespace matforge
