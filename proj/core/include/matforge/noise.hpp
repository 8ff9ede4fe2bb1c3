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

#include "matforge/color.hpp"

// Hash-based procedural noise. Every function is a pure function of its
// arguments: no tables are initialized at startup and no global state is
// consumed, so results are identical across platforms, thread counts, and
// evaluation orders.
//
// Exact definitions (the reference for any reimplementation):
//   - lattice_hash(seed, x, y, z) mixes the three lattice coordinates into
//     the seed with the splitmix64 finalizer, one coordinate per round.
//   - perlin3 is gradient noise over the integer lattice: the gradient at a
//     corner is one of the 12 edge directions of a cube, selected by the low
//     bits of lattice_hash; corner contributions are blended with the
//     quintic fade 6t^5 - 15t^4 + 10t^3. Output is in [-1, 1].
//   - fbm3 sums octaves of perlin3 at frequencies 2^i with amplitudes
//     roughness^i. detail selects the octave count; its fractional part
//     blends in one extra octave with proportional weight. The sum is
//     normalized by the total amplitude, so output stays in [-1, 1].
//   - voronoi3 scatters one feature point per lattice cell, offset from the
//     cell origin by randomness * hash-derived jitter in [0, 1)^3, and scans
//     the 3x3x3 cell neighborhood for the nearest (F1) or second-nearest
//     (F2) point under the configured metric.

namespace matforge::noise {

// Mixes lattice coordinates into a seed. Stable across the library: render
// evaluation and any external oracle must agree on this exact function.
std::uint64_t lattice_hash(std::uint64_t seed, std::int64_t x, std::int64_t y,
                           std::int64_t z);

// Maps a hash to a double in [0, 1) using its top 53 bits.
double hash_to_unit(std::uint64_t h);

// 3-D gradient noise in [-1, 1]. Zero at lattice points.
double perlin3(std::uint64_t seed, double x, double y, double z);

// Fractal Brownian motion over perlin3. detail >= 0 (octave count, fractional
// part blends the next octave in), roughness in [0, 1] (per-octave amplitude
// decay). Output in [-1, 1].
double fbm3(std::uint64_t seed, Vec3 p, double detail, double roughness);

enum class VoronoiFeature { F1, F2 };
enum class VoronoiMetric { Euclidean, Manhattan, Chebyshev };

struct VoronoiResult {
  double distance = 0.0;  // distance to the selected feature point
  Vec3 color;             // hash color of the feature's cell, each channel in [0, 1)
  Vec3 position;          // feature point location, in the input's coordinate space
};

VoronoiResult voronoi3(std::uint64_t seed, Vec3 p, double randomness,
                       VoronoiFeature feature, VoronoiMetric metric);

}  // namespace matforge::noise
