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

#include "matforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matforge/parallel.hpp"
#include "matforge/rng.hpp"

namespace matforge {

namespace {

// Planar feature maps: channels * height * width floats.
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  FeatureMap(int c, int h, int w)
      : channels(c), height(h), width(w),
        data(static_cast<std::size_t>(c) * h * w, 0.0f) {}

  float* plane(int c) {
    return data.data() + static_cast<std::size_t>(c) * height * width;
  }
  const float* plane(int c) const {
    return data.data() + static_cast<std::size_t>(c) * height * width;
  }
};

FeatureMap image_to_planar(const TextureImage& image) {
  FeatureMap map(3, image.height, image.width);
  const std::size_t pixels = image.pixel_count();
  for (int c = 0; c < 3; ++c) {
    float* plane = map.plane(c);
    for (std::size_t i = 0; i < pixels; ++i) plane[i] = image.data[i * 3 + c];
  }
  return map;
}

// One layer's 3x3 kernels, drawn uniformly from +-sqrt(3 / fan_in) so the
// response variance stays near the input's. The draw order (out channel,
// in channel, row, column) is part of the metric definition.
std::vector<float> layer_weights(int out_channels, int in_channels,
                                 std::uint64_t bank_seed, int layer_index) {
  Pcg32 rng(derive_seed(bank_seed, static_cast<std::uint64_t>(layer_index) + 1));
  const double bound = std::sqrt(3.0 / (in_channels * 9.0));
  std::vector<float> weights(static_cast<std::size_t>(out_channels) * in_channels * 9);
  for (float& w : weights) {
    w = static_cast<float>(rng.uniform(-bound, bound));
  }
  return weights;
}

// 3x3 convolution with zero padding, then half-wave rectification.
FeatureMap conv_rectify(const FeatureMap& in, const std::vector<float>& weights,
                        int out_channels) {
  FeatureMap out(out_channels, in.height, in.width);
  const int h = in.height, w = in.width;
  parallel_chunks(static_cast<std::size_t>(out_channels), [&](std::size_t oc_begin,
                                                              std::size_t oc_end) {
    for (std::size_t oc = oc_begin; oc < oc_end; ++oc) {
      float* out_plane = out.plane(static_cast<int>(oc));
      for (int ic = 0; ic < in.channels; ++ic) {
        const float* in_plane = in.plane(ic);
        const float* k =
            weights.data() + (oc * in.channels + ic) * 9;
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (int ky = -1; ky <= 1; ++ky) {
              const int yy = y + ky;
              if (yy < 0 || yy >= h) continue;
              for (int kx = -1; kx <= 1; ++kx) {
                const int xx = x + kx;
                if (xx < 0 || xx >= w) continue;
                acc += k[(ky + 1) * 3 + (kx + 1)] * in_plane[yy * w + xx];
              }
            }
            out_plane[y * w + x] += acc;
          }
        }
      }
      // rectify once all input channels are accumulated
      for (int i = 0; i < h * w; ++i) {
        out_plane[i] = std::max(out_plane[i], 0.0f);
      }
    }
  });
  return out;
}

FeatureMap average_pool2(const FeatureMap& in) {
  const int h = std::max(in.height / 2, 1);
  const int w = std::max(in.width / 2, 1);
  FeatureMap out(in.channels, h, w);
  for (int c = 0; c < in.channels; ++c) {
    const float* src = in.plane(c);
    float* dst = out.plane(c);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int sy = std::min(2 * y, in.height - 1);
        const int sx = std::min(2 * x, in.width - 1);
        const int sy1 = std::min(sy + 1, in.height - 1);
        const int sx1 = std::min(sx + 1, in.width - 1);
        dst[y * w + x] = 0.25f * (src[sy * in.width + sx] + src[sy * in.width + sx1] +
                                  src[sy1 * in.width + sx] + src[sy1 * in.width + sx1]);
      }
    }
  }
  return out;
}

// Gram = (F F^T) / (channels * pixels), F = channels x pixels.
std::vector<double> gram_matrix(const FeatureMap& features) {
  const int c = features.channels;
  const std::size_t pixels =
      static_cast<std::size_t>(features.height) * features.width;
  std::vector<double> gram(static_cast<std::size_t>(c) * c, 0.0);
  const double norm = 1.0 / (static_cast<double>(c) * static_cast<double>(pixels));
  parallel_chunks(static_cast<std::size_t>(c), [&](std::size_t i_begin,
                                                   std::size_t i_end) {
    for (std::size_t i = i_begin; i < i_end; ++i) {
      const float* fi = features.plane(static_cast<int>(i));
      for (std::size_t j = i; j < static_cast<std::size_t>(c); ++j) {
        const float* fj = features.plane(static_cast<int>(j));
        double acc = 0.0;
        for (std::size_t p = 0; p < pixels; ++p) {
          acc += static_cast<double>(fi[p]) * fj[p];
        }
        gram[i * c + j] = acc * norm;
        gram[j * c + i] = acc * norm;
      }
    }
  });
  return gram;
}

std::vector<double> box_down16(const TextureImage& image) {
  std::vector<double> out(16 * 16 * 3, 0.0);
  for (int cy = 0; cy < 16; ++cy) {
    const int y0 = cy * image.height / 16;
    const int y1 = (cy + 1) * image.height / 16;
    for (int cx = 0; cx < 16; ++cx) {
      const int x0 = cx * image.width / 16;
      const int x1 = (cx + 1) * image.width / 16;
      double acc[3] = {0, 0, 0};
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          const float* px = image.pixel(x, y);
          for (int c = 0; c < 3; ++c) acc[c] += px[c];
        }
      }
      const double count = static_cast<double>(y1 - y0) * (x1 - x0);
      for (int c = 0; c < 3; ++c) {
        out[(cy * 16 + cx) * 3 + c] = acc[c] / count;
      }
    }
  }
  return out;
}

double mean_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
  return acc / static_cast<double>(a.size());
}

void require_same_shape(const TextureImage& a, const TextureImage& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": image dimensions differ");
  }
}

// Patch vectors as a flat row-major matrix: count x dim.
struct PatchSet {
  std::size_t count = 0;
  int dim = 0;
  std::vector<float> data;
};

PatchSet extract_patches(const TextureImage& image, int patch_size) {
  PatchSet set;
  set.dim = patch_size * patch_size * 3;
  const int span = image.width - patch_size + 1;
  const int rows = image.height - patch_size + 1;
  if (span <= 0 || rows <= 0) {
    throw std::invalid_argument("swd: image smaller than the patch size");
  }
  set.count = static_cast<std::size_t>(span) * rows;
  set.data.resize(set.count * set.dim);
  std::size_t n = 0;
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < span; ++x) {
      float* dst = set.data.data() + n * set.dim;
      for (int py = 0; py < patch_size; ++py) {
        for (int px = 0; px < patch_size; ++px) {
          const float* src = image.pixel(x + px, y + py);
          *dst++ = src[0];
          *dst++ = src[1];
          *dst++ = src[2];
        }
      }
      ++n;
    }
  }
  return set;
}

}  // namespace

StyleStats compute_style_stats(const TextureImage& image, const FeatureBankConfig& bank) {
  if (bank.layers < 1 || bank.filters_per_layer < 1) {
    throw std::invalid_argument("style: bank needs at least one layer and filter");
  }
  StyleStats stats;
  stats.width = image.width;
  stats.height = image.height;
  stats.bank = bank;
  stats.down16 = box_down16(image);

  FeatureMap current = image_to_planar(image);
  for (int layer = 0; layer < bank.layers; ++layer) {
    const std::vector<float> weights = layer_weights(
        bank.filters_per_layer, current.channels, bank.seed, layer);
    FeatureMap features = conv_rectify(current, weights, bank.filters_per_layer);
    stats.grams.push_back(gram_matrix(features));
    if (layer + 1 < bank.layers) current = average_pool2(features);
  }
  return stats;
}

double style_loss(const StyleStats& a, const StyleStats& b) {
  if (a.width != b.width || a.height != b.height) {
    throw std::invalid_argument("style_loss: image dimensions differ");
  }
  if (!(a.bank == b.bank) || a.grams.size() != b.grams.size()) {
    throw std::invalid_argument("style_loss: feature banks differ");
  }
  double loss = 0.0;
  for (std::size_t layer = 0; layer < a.grams.size(); ++layer) {
    loss += mean_abs_difference(a.grams[layer], b.grams[layer]);
  }
  loss += 0.1 * mean_abs_difference(a.down16, b.down16);
  return loss;
}

double style_loss(const TextureImage& a, const TextureImage& b,
                  const FeatureBankConfig& bank) {
  require_same_shape(a, b, "style_loss");
  return style_loss(compute_style_stats(a, bank), compute_style_stats(b, bank));
}

double swd(const TextureImage& a, const TextureImage& b, int num_projections,
           int patch_size, std::uint64_t seed) {
  require_same_shape(a, b, "swd");
  if (patch_size != 1 && patch_size != 3) {
    throw std::invalid_argument("swd: patch_size must be 1 or 3");
  }
  if (num_projections < 1) {
    throw std::invalid_argument("swd: need at least one projection");
  }
  const PatchSet pa = extract_patches(a, patch_size);
  const PatchSet pb = extract_patches(b, patch_size);

  std::vector<double> per_projection(static_cast<std::size_t>(num_projections), 0.0);
  parallel_chunks(static_cast<std::size_t>(num_projections), [&](std::size_t begin,
                                                                 std::size_t end) {
    std::vector<double> proj_a(pa.count), proj_b(pb.count);
    for (std::size_t j = begin; j < end; ++j) {
      // Unit direction: normalized standard gaussian draws, one RNG stream
      // per projection index.
      Pcg32 rng(derive_seed(seed, j + 1));
      std::vector<double> dir(pa.dim);
      double norm2 = 0.0;
      for (double& d : dir) {
        d = rng.gaussian();
        norm2 += d * d;
      }
      const double inv = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 0.0;
      for (double& d : dir) d *= inv;

      for (std::size_t i = 0; i < pa.count; ++i) {
        const float* pav = pa.data.data() + i * pa.dim;
        const float* pbv = pb.data.data() + i * pb.dim;
        double da = 0.0, db = 0.0;
        for (int k = 0; k < pa.dim; ++k) {
          da += dir[k] * pav[k];
          db += dir[k] * pbv[k];
        }
        proj_a[i] = da;
        proj_b[i] = db;
      }
      std::sort(proj_a.begin(), proj_a.end());
      std::sort(proj_b.begin(), proj_b.end());
      double acc = 0.0;
      for (std::size_t i = 0; i < pa.count; ++i) {
        const double d = proj_a[i] - proj_b[i];
        acc += d * d;
      }
      per_projection[j] = acc / static_cast<double>(pa.count);
    }
  });

  double total = 0.0;
  for (double v : per_projection) total += v;
  return total / static_cast<double>(num_projections);
}

double down_l1(const TextureImage& a, const TextureImage& b) {
  require_same_shape(a, b, "down_l1");
  if (a.width < 16 || a.height < 16) {
    throw std::invalid_argument("down_l1: images must be at least 16x16");
  }
  return mean_abs_difference(box_down16(a), box_down16(b));
}

LossReport loss_report(const TextureImage& a, const TextureImage& b,
                       const FeatureBankConfig& bank, int num_projections,
                       int patch_size, std::uint64_t swd_seed) {
  LossReport report;
  report.style = style_loss(a, b, bank);
  report.swd = swd(a, b, num_projections, patch_size, swd_seed);
  report.down_l1 = down_l1(a, b);
  return report;
}

}  // namespace matforge
