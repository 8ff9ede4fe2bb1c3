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
#include <memory>
#include <stdexcept>
#include <string>

#include "matforge/graph.hpp"
#include "matforge/registry.hpp"
#include "matforge/texture_image.hpp"

namespace matforge {

// Evaluation failure, carrying the offending node id in the message.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed orthographic view of a unit plane. The texture is sampled at pixel
// centers; uv_scale stretches texture coordinates without moving the plane,
// so lighting is independent of it.
struct RenderConfig {
  int resolution = 512;       // square output, >= 16
  double uv_scale = 1.0;      // texture repeats across the plane
  Vec3 light_position{0.5, 0.5, 1.0};  // in plane units, plane spans [0,1]^2 at z=0
  double light_intensity = 1.0;        // > 0; attenuated by squared distance
  double ambient = 0.05;               // constant ambient term
  std::uint64_t seed = 0;              // drives stochastic texture nodes
  int threads = 0;                     // 0 = library default

  // A far, bright light: attenuation and incidence are uniform across the
  // plane to within ~1e-7, so texture structure is all that remains. Used
  // by curation, where shading falloff must not mask a degenerate material.
  static RenderConfig flat_lighting(int resolution = 512, std::uint64_t seed = 0);
};

// Value of one output socket at a UV coordinate, pulling inputs recursively
// (memoized per query). Scalar/Vector/Color sockets only; Shader sockets
// have no field value. Color channels are clamped to [0,1].
// Throws EvalError (bad socket, shader socket) or GraphError (invalid graph).
ParamValue evaluate_field(const MaterialGraph& graph, const NodeTypeRegistry& registry,
                          const std::string& node_id, const std::string& socket,
                          Vec3 uv, const RenderConfig& config);

// Shades the graph over the pixel grid: Lambertian diffuse plus a
// GGX-style specular lobe driven by roughness/metallic, one point light,
// constant ambient. Deterministic given (graph, config), including across
// thread counts. Throws EvalError with node context on evaluation failure,
// std::invalid_argument on a malformed config.
TextureImage render(const MaterialGraph& graph, const NodeTypeRegistry& registry,
                    const RenderConfig& config);

}  // namespace matforge
