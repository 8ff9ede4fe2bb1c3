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

#include <filesystem>
#include <string>
#include <vector>

#include "matforge/graph.hpp"
#include "matforge/registry.hpp"
#include "matforge/rng.hpp"
#include "matforge/texture_image.hpp"

namespace testutil {

// ---------------------------------------------------------------------------
// Fixture corpus: small hand-written materials covering every texture node.
// `textured_fixture_names` lists the ones that pass curation at default
// settings; "flat" renders a uniform gray and is the standard reject case.

const std::vector<std::string>& fixture_names();           // all fixtures
const std::vector<std::string>& textured_fixture_names();  // curation-accepted subset
const std::string& fixture_source(const std::string& name);
matforge::MaterialGraph fixture_graph(const std::string& name,
                                      const matforge::NodeTypeRegistry& registry);

// ---------------------------------------------------------------------------
// Random valid graphs. Overrides are drawn per parameter spec and never equal
// the spec default, so serialization keeps every override.

matforge::MaterialGraph random_graph(matforge::Pcg32& rng,
                                     const matforge::NodeTypeRegistry& registry);

// Random replacement value for a spec, never equal to `avoid`.
matforge::ParamValue random_param_value(matforge::Pcg32& rng,
                                        const matforge::ParamSpec& spec,
                                        const matforge::ParamValue& avoid);

// ---------------------------------------------------------------------------
// Group types. `registry_with_groups` extends the builtins with:
//   GroupNoise   2 inner nodes (TexNoise -> ColorRamp), inputs Vector/Scale,
//                output Color
//   GroupNested  2 inner nodes (GroupNoise -> Invert), input Scale,
//                output Color
//   GroupWide    4 inner nodes (TexChecker -> HueSatVal, TexCoord, Mapping),
//                input Scale, output Color

matforge::NodeTypeRegistry registry_with_groups();

// A valid graph whose reachable part mixes builtin texture nodes with group
// instances, plus `unreachable` extra nodes that no path connects to the
// output. Node ids are unique; the graph passes validate_structure against
// registry_with_groups().
matforge::MaterialGraph random_messy_graph(matforge::Pcg32& rng,
                                           const matforge::NodeTypeRegistry& registry,
                                           int* unreachable_count = nullptr);

// ---------------------------------------------------------------------------
// One-knob material: a single group instance in front of the output whose
// only samplable slot is the group's "Fac" input (default 0.3, range [0,1]).
// The knob mixes black to white, so the rendered gray level tracks Fac.

matforge::NodeTypeRegistry registry_with_knob();
matforge::MaterialGraph knob_graph(double fac);  // fac < 0 leaves the default

// ---------------------------------------------------------------------------
// Statistics helpers

// Two-sided Kolmogorov-Smirnov p-value of `samples` against U[0,1].
double ks_uniform_pvalue(std::vector<double> samples);

// Spearman rank correlation of two equal-length score lists.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// ---------------------------------------------------------------------------
// Filesystem helpers

// Unique scratch directory under the system temp root; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// True when the images have the same shape and bit-identical float data.
bool images_identical(const matforge::TextureImage& a, const matforge::TextureImage& b);

}  // namespace testutil
