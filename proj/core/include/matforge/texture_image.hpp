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

#include <cstddef>
#include <vector>

#include "matforge/color.hpp"

namespace matforge {

// A rendered material: row-major RGB triples, all channels finite and in
// [0, 1]. Stored as float32; arithmetic on images happens in double.
struct TextureImage {
  int width = 0;
  int height = 0;
  std::vector<float> data;  // width * height * 3

  TextureImage() = default;
  TextureImage(int w, int h)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.0f) {}

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

  float* pixel(int x, int y) {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  const float* pixel(int x, int y) const {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }

  bool same_shape(const TextureImage& other) const {
    return width == other.width && height == other.height;
  }
};

// Mean of per-pixel luminance (Rec. 709 weights).
double mean_luminance(const TextureImage& image);

// Per-channel population variance.
Vec3 channel_variance(const TextureImage& image);

// Largest absolute per-channel difference. Images must share a shape.
double max_abs_difference(const TextureImage& a, const TextureImage& b);

}  // namespace matforge
