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
#include <vector>

#include "matforge/texture_image.hpp"

namespace matforge {

// Perceptual losses over rendered materials.
//
// The style loss compares second-order feature statistics: Gram matrices of
// a frozen, seeded random convolutional feature bank (multi-scale stand-in
// for a pretrained network), plus an L1 term over 16x16 box-downsampled
// images weighted by 0.1. The bank's seed is part of the metric's identity:
// changing it changes every reported number.

struct FeatureBankConfig {
  int layers = 4;              // conv -> rectify -> gram -> 2x2 average pool
  int filters_per_layer = 32;  // 3x3 kernels, zero padding
  std::uint64_t seed = 0;      // frozen; filters are a pure function of it

  bool operator==(const FeatureBankConfig&) const = default;
};

struct LossReport {
  double style = 0.0;
  double swd = 0.0;
  double down_l1 = 0.0;
};

// Precomputed statistics of one image under a bank: per-layer Gram matrices
// (flattened row-major) and the 16x16 downsample. Comparing two StyleStats
// skips re-running the feature bank on the constant side of an optimization.
struct StyleStats {
  int width = 0;
  int height = 0;
  FeatureBankConfig bank;
  std::vector<std::vector<double>> grams;  // one per layer, filters^2 entries
  std::vector<double> down16;              // 16*16*3 entries
};

StyleStats compute_style_stats(const TextureImage& image,
                               const FeatureBankConfig& bank = {});

// Sum over layers of mean-L1 Gram difference, plus 0.1 * mean-L1 of the
// downsampled images. Requires equal dimensions (and, for the stats
// overload, the same bank).
double style_loss(const StyleStats& a, const StyleStats& b);
double style_loss(const TextureImage& a, const TextureImage& b,
                  const FeatureBankConfig& bank = {});

// Sliced Wasserstein distance over patch vectors: mean over seeded random
// unit directions of the mean squared difference between the two images'
// sorted projections. patch_size is 1 (RGB pixels) or 3 (3x3 RGB patches).
double swd(const TextureImage& a, const TextureImage& b, int num_projections = 64,
           int patch_size = 3, std::uint64_t seed = 0);

// Mean absolute difference of 16x16 box-downsampled images. Requires equal
// dimensions of at least 16x16.
double down_l1(const TextureImage& a, const TextureImage& b);

LossReport loss_report(const TextureImage& a, const TextureImage& b,
                       const FeatureBankConfig& bank = {}, int num_projections = 64,
                       int patch_size = 3, std::uint64_t swd_seed = 0);

}  // namespace matforge
