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

#include "matforge/texture_image.hpp"

namespace matforge {

class ImageIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 8-bit RGB PNG. Channels are clamped to [0,1] and quantized by
// round(v * 255); reading maps bytes back to v / 255.
void write_png(const std::string& path, const TextureImage& image);
TextureImage read_png(const std::string& path);

// Lossless raw format for metric pipelines: width and height as
// little-endian u32, then row-major RGB float32 (little-endian).
void write_f32(const std::string& path, const TextureImage& image);
TextureImage read_f32(const std::string& path);

// Dispatches on the file extension (".png" or ".f32").
void write_image(const std::string& path, const TextureImage& image);
TextureImage read_image(const std::string& path);

}  // namespace matforge
