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

#include "matforge/optimize.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "matforge/augment.hpp"

namespace matforge {

namespace {

double combined_loss(const StyleStats& target_stats, const TextureImage& target,
                     const TextureImage& image, const McmcConfig& cfg) {
  double loss = 0.0;
  if (cfg.style_weight != 0.0) {
    loss += cfg.style_weight * style_loss(target_stats, compute_style_stats(image, cfg.bank));
  }
  if (cfg.swd_weight != 0.0) {
    loss += cfg.swd_weight * swd(target, image);
  }
  return loss;
}

}  // namespace

bool acceptance_decision(double l_new, double l_cur, double p_acc, Pcg32& rng) {
  if (l_new < l_cur) return true;
  return rng.bernoulli(p_acc);
}

std::pair<MaterialGraph, McmcTrace> mcmc_optimize(const MaterialGraph& initial,
                                                  const TextureImage& target,
                                                  const NodeTypeRegistry& registry,
                                                  const McmcConfig& config) {
  if (config.n_iters < 0) throw std::invalid_argument("mcmc: n_iters must be >= 0");
  if (config.p_acc < 0.0 || config.p_acc > 1.0) {
    throw std::invalid_argument("mcmc: p_acc must lie in [0, 1]");
  }
  if (config.param_fraction <= 0.0 || config.param_fraction > 1.0) {
    throw std::invalid_argument("mcmc: param_fraction must lie in (0, 1]");
  }
  if (target.width != config.render_config.resolution ||
      target.height != config.render_config.resolution) {
    throw std::invalid_argument("mcmc: target does not match the render resolution");
  }

  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<ParamSlot> slots = eligible_parameters(initial, registry);
  const int per_proposal =
      slots.empty() ? 0
                    : static_cast<int>(std::ceil(config.param_fraction *
                                                 static_cast<double>(slots.size())));

  ParamSampleConfig proposal_rules;
  proposal_rules.rel_interval = config.rel_interval;
  proposal_rules.hue_full_range = false;  // hue stays local during refinement
  proposal_rules.sv_interval = config.rel_interval;
  proposal_rules.categorical_prob = config.categorical_prob;

  const StyleStats target_stats =
      (config.style_weight != 0.0) ? compute_style_stats(target, config.bank) : StyleStats{};

  MaterialGraph current = initial;
  TextureImage image = render(current, registry, config.render_config);
  double l_cur = combined_loss(target_stats, target, image, config);

  MaterialGraph best = current;
  double l_best = l_cur;

  Pcg32 proposal_rng(derive_seed(config.rng_seed, 1));
  Pcg32 accept_rng(derive_seed(config.rng_seed, 2));

  McmcTrace trace;
  trace.initial_loss = l_cur;
  trace.iterations.reserve(static_cast<std::size_t>(config.n_iters));

  std::vector<int> order(slots.size());
  for (int it = 0; it < config.n_iters; ++it) {
    MaterialGraph proposal = current;
    std::iota(order.begin(), order.end(), 0);
    for (int k = 0; k < per_proposal; ++k) {
      int j = proposal_rng.uniform_int(k, static_cast<int>(order.size()) - 1);
      std::swap(order[k], order[j]);
      resample_slot(proposal, registry, slots[order[k]], proposal_rules, proposal_rng);
    }

    double l_new = inf;
    bool rendered = false;
    try {
      TextureImage proposal_image = render(proposal, registry, config.render_config);
      l_new = combined_loss(target_stats, target, proposal_image, config);
      rendered = std::isfinite(l_new);
    } catch (const std::exception&) {
      rendered = false;
    }
    if (!rendered) l_new = inf;

    bool accepted = rendered && acceptance_decision(l_new, l_cur, config.p_acc, accept_rng);
    if (accepted) {
      current = std::move(proposal);
      l_cur = l_new;
      if (l_cur < l_best) {
        best = current;
        l_best = l_cur;
      }
    }
    trace.iterations.push_back({it, l_new, accepted, l_best, per_proposal});
  }

  trace.best_loss = l_best;
  return {std::move(best), std::move(trace)};
}

}  // namespace matforge
