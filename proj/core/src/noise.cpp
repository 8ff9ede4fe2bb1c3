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

#include "matforge/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matforge/rng.hpp"

namespace matforge::noise {

namespace {

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double lerp(double a, double b, double t) { return a + (b - a) * t; }

// Dot product of position offset (fx, fy, fz) with one of the 12 cube-edge
// gradient directions, selected by the hash. The classic improved-noise
// table, with the 4 duplicate entries that keep selection a power of two.
double grad(std::uint64_t h, double fx, double fy, double fz) {
  switch (h & 15u) {
    case 0: return fx + fy;
    case 1: return -fx + fy;
    case 2: return fx - fy;
    case 3: return -fx - fy;
    case 4: return fx + fz;
    case 5: return -fx + fz;
    case 6: return fx - fz;
    case 7: return -fx - fz;
    case 8: return fy + fz;
    case 9: return -fy + fz;
    case 10: return fy - fz;
    case 11: return -fy - fz;
    case 12: return fx + fy;
    case 13: return -fx + fy;
    case 14: return -fy + fz;
    default: return -fy - fz;
  }
}

std::int64_t floor_i64(double v) { return static_cast<std::int64_t>(std::floor(v)); }

}  // namespace

std::uint64_t lattice_hash(std::uint64_t seed, std::int64_t x, std::int64_t y,
                           std::int64_t z) {
  std::uint64_t state = seed;
  state ^= static_cast<std::uint64_t>(x);
  splitmix64(state);
  state ^= static_cast<std::uint64_t>(y);
  splitmix64(state);
  state ^= static_cast<std::uint64_t>(z);
  return splitmix64(state);
}

double hash_to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double perlin3(std::uint64_t seed, double x, double y, double z) {
  const std::int64_t x0 = floor_i64(x), y0 = floor_i64(y), z0 = floor_i64(z);
  const double fx = x - static_cast<double>(x0);
  const double fy = y - static_cast<double>(y0);
  const double fz = z - static_cast<double>(z0);
  const double u = fade(fx), v = fade(fy), w = fade(fz);

  auto corner = [&](int dx, int dy, int dz) {
    const std::uint64_t h = lattice_hash(seed, x0 + dx, y0 + dy, z0 + dz);
    return grad(h, fx - dx, fy - dy, fz - dz);
  };

  const double c000 = corner(0, 0, 0), c100 = corner(1, 0, 0);
  const double c010 = corner(0, 1, 0), c110 = corner(1, 1, 0);
  const double c001 = corner(0, 0, 1), c101 = corner(1, 0, 1);
  const double c011 = corner(0, 1, 1), c111 = corner(1, 1, 1);

  const double value = lerp(lerp(lerp(c000, c100, u), lerp(c010, c110, u), v),
                            lerp(lerp(c001, c101, u), lerp(c011, c111, u), v), w);
  // Gradients dotted with unit-cube offsets stay within [-sqrt(2), sqrt(2)];
  // rescale so the practical output range is [-1, 1].
  return std::clamp(value * 0.7071067811865476, -1.0, 1.0);
}

double fbm3(std::uint64_t seed, Vec3 p, double detail, double roughness) {
  detail = std::clamp(detail, 0.0, 15.0);
  roughness = std::clamp(roughness, 0.0, 1.0);

  const int octaves = static_cast<int>(std::floor(detail));
  const double residual = detail - static_cast<double>(octaves);

  double sum = 0.0;
  double total = 0.0;
  double amplitude = 1.0;
  double frequency = 1.0;
  for (int i = 0; i <= octaves; ++i) {
    sum += amplitude * perlin3(seed, p.x * frequency, p.y * frequency, p.z * frequency);
    total += amplitude;
    amplitude *= roughness;
    frequency *= 2.0;
  }
  if (residual > 0.0) {
    sum += residual * amplitude *
           perlin3(seed, p.x * frequency, p.y * frequency, p.z * frequency);
    total += residual * amplitude;
  }
  return total > 0.0 ? sum / total : 0.0;
}

VoronoiResult voronoi3(std::uint64_t seed, Vec3 p, double randomness,
                       VoronoiFeature feature, VoronoiMetric metric) {
  randomness = std::clamp(randomness, 0.0, 1.0);
  const std::int64_t cx = floor_i64(p.x), cy = floor_i64(p.y), cz = floor_i64(p.z);

  auto metric_distance = [&](Vec3 d) {
    switch (metric) {
      case VoronoiMetric::Euclidean:
        return std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
      case VoronoiMetric::Manhattan:
        return std::fabs(d.x) + std::fabs(d.y) + std::fabs(d.z);
      case VoronoiMetric::Chebyshev:
        return std::max({std::fabs(d.x), std::fabs(d.y), std::fabs(d.z)});
    }
    return 0.0;
  };

  double best1 = std::numeric_limits<double>::infinity();
  double best2 = std::numeric_limits<double>::infinity();
  Vec3 point1, point2;
  std::uint64_t cell1 = 0, cell2 = 0;

  for (int dz = -1; dz <= 1; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const std::int64_t ix = cx + dx, iy = cy + dy, iz = cz + dz;
        const std::uint64_t h = lattice_hash(seed, ix, iy, iz);
        std::uint64_t s = h;
        const double jx = hash_to_unit(splitmix64(s));
        const double jy = hash_to_unit(splitmix64(s));
        const double jz = hash_to_unit(splitmix64(s));
        const Vec3 fp{static_cast<double>(ix) + randomness * jx,
                      static_cast<double>(iy) + randomness * jy,
                      static_cast<double>(iz) + randomness * jz};
        const double dist = metric_distance(fp - p);
        if (dist < best1) {
          best2 = best1;
          point2 = point1;
          cell2 = cell1;
          best1 = dist;
          point1 = fp;
          cell1 = h;
        } else if (dist < best2) {
          best2 = dist;
          point2 = fp;
          cell2 = h;
        }
      }
    }
  }

  const bool second = feature == VoronoiFeature::F2;
  VoronoiResult result;
  result.distance = second ? best2 : best1;
  result.position = second ? point2 : point1;
  std::uint64_t s = second ? cell2 : cell1;
  result.color.x = hash_to_unit(splitmix64(s));
  result.color.y = hash_to_unit(splitmix64(s));
  result.color.z = hash_to_unit(splitmix64(s));
  return result;
}

}  // namespace matforge::noise
