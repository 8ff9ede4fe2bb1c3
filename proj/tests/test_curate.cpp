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

#include <doctest.h>

#include <jpeglib.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "matforge/curate.hpp"
#include "matforge/dsl.hpp"
#include "matforge/registry.hpp"
#include "matforge/render.hpp"
#include "matforge/rng.hpp"
#include "support/fixtures.hpp"

using namespace matforge;

namespace {

const NodeTypeRegistry& reg() {
  static const NodeTypeRegistry r = NodeTypeRegistry::builtins();
  return r;
}

bool has_reason(const CurationReport& report, CurationReason reason) {
  return std::find(report.reasons.begin(), report.reasons.end(), reason) !=
         report.reasons.end();
}

// Reachability oracle: forward BFS over reversed edges from the output.
std::set<std::string> bfs_reachable(const MaterialGraph& graph) {
  std::multimap<std::string, std::string> feeds;  // to -> from
  for (const Edge& e : graph.edges) feeds.insert({e.to.node_id, e.from.node_id});
  std::set<std::string> seen{graph.output_node};
  std::queue<std::string> frontier;
  frontier.push(graph.output_node);
  while (!frontier.empty()) {
    const std::string id = frontier.front();
    frontier.pop();
    auto [lo, hi] = feeds.equal_range(id);
    for (auto it = lo; it != hi; ++it) {
      if (seen.insert(it->second).second) frontier.push(it->second);
    }
  }
  return seen;
}

// Registers a chain group with `inner_count` nodes: TexCoord -> Mapping ->
// ... -> TexChecker, exposing Scale and Color.
NodeTypeDef chain_group(const std::string& type_id, int inner_count) {
  NodeTypeDef def;
  def.type_id = type_id;
  SocketSpec scale;
  scale.name = "Scale";
  scale.data_kind = SocketKind::Scalar;
  scale.default_value = ParamValue::of_float(5.0);
  def.inputs = {scale};
  SocketSpec out_sock;
  out_sock.name = "Color";
  out_sock.data_kind = SocketKind::Color;
  def.outputs = {out_sock};

  GroupBody body;
  body.inner.nodes.push_back({"coord", "TexCoord", {}, {}});
  std::string prev = "coord", prev_socket = "UV";
  for (int i = 0; i < inner_count - 2; ++i) {
    const std::string id = "map" + std::to_string(i);
    body.inner.nodes.push_back({id, "Mapping", {}, {}});
    body.inner.edges.push_back({{prev, prev_socket}, {id, "Vector"}});
    prev = id;
    prev_socket = "Vector";
  }
  body.inner.nodes.push_back({"check", "TexChecker", {}, {}});
  body.inner.edges.push_back({{prev, prev_socket}, {"check", "Vector"}});
  body.input_bindings = {{"Scale", {{"check", "Scale"}}}};
  body.output_bindings = {{"Color", {"check", "Color"}}};
  def.body = std::move(body);
  return def;
}

MaterialGraph graph_with_math_chain(int total_nodes) {
  // brick fixture shape (4 nodes) plus a Math chain into Roughness.
  MaterialGraph g = testutil::fixture_graph("brick", reg());
  const int extra = total_nodes - static_cast<int>(g.nodes.size());
  REQUIRE(extra >= 1);
  std::string prev;
  for (int i = 0; i < extra; ++i) {
    const std::string id = "m" + std::to_string(i);
    g.nodes.push_back({id, "Math", {}, {}});
    if (!prev.empty()) g.edges.push_back({{prev, "Value"}, {id, "Value1"}});
    prev = id;
  }
  g.edges.push_back({{prev, "Value"}, {"bsdf", "Roughness"}});
  return g;
}

std::size_t jpeg_encoded_size(const TextureImage& image, int quality) {
  std::vector<unsigned char> row(static_cast<std::size_t>(image.width) * 3);
  unsigned char* buffer = nullptr;
  unsigned long buffer_size = 0;

  jpeg_compress_struct cinfo;
  jpeg_error_mgr jerr;
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &buffer_size);
  cinfo.image_width = static_cast<JDIMENSION>(image.width);
  cinfo.image_height = static_cast<JDIMENSION>(image.height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const float* px = image.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const float v = std::min(std::max(px[c], 0.0f), 1.0f);
        row[static_cast<std::size_t>(x) * 3 + c] =
            static_cast<unsigned char>(v * 255.0f + 0.5f);
      }
    }
    JSAMPROW rows[1] = {row.data()};
    jpeg_write_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  const std::size_t size = buffer_size;
  free(buffer);
  return size;
}

}  // namespace

TEST_CASE("prune removes a dangling node without touching the render") {
  MaterialGraph g = testutil::fixture_graph("checker", reg());
  g.nodes.push_back({"stray", "TexNoise", {}, {}});
  const auto [pruned, removed] = prune_unreachable(g);
  CHECK(removed == std::vector<std::string>{"stray"});
  CHECK(pruned.find_node("stray") == nullptr);

  RenderConfig config;
  config.resolution = 48;
  CHECK(testutil::images_identical(render(g, reg(), config),
                                   render(pruned, reg(), config)));
}

TEST_CASE("prune keeps a fully connected chain intact") {
  const MaterialGraph g = testutil::fixture_graph("rampnoise", reg());
  const auto [pruned, removed] = prune_unreachable(g);
  CHECK(removed.empty());
  CHECK(graphs_equal(g, pruned));
}

TEST_CASE("prune matches an independent reachability oracle") {
  SUBCASE("constructed 20-node graph with 7 unreachable nodes") {
    MaterialGraph g = testutil::fixture_graph("mixed", reg());  // 5 nodes
    // Reachable padding: a Math chain feeding Roughness (8 more nodes).
    std::string prev;
    for (int i = 0; i < 8; ++i) {
      const std::string id = "live" + std::to_string(i);
      g.nodes.push_back({id, "Math", {}, {}});
      if (!prev.empty()) g.edges.push_back({{prev, "Value"}, {id, "Value1"}});
      prev = id;
    }
    g.edges.push_back({{prev, "Value"}, {"bsdf", "Roughness"}});
    // Unreachable padding: 7 nodes, internally wired, one fed from a live node.
    for (int i = 0; i < 7; ++i) {
      g.nodes.push_back({"dead" + std::to_string(i), "TexWave", {}, {}});
    }
    for (int i = 1; i < 7; ++i) {
      g.edges.push_back({{"dead" + std::to_string(i - 1), "Color"},
                         {"dead" + std::to_string(i), "Vector"}});
    }
    g.edges.push_back({{"noise", "Color"}, {"dead0", "Vector"}});
    REQUIRE(g.nodes.size() == 20);
    REQUIRE(validate_structure(g, reg()).ok);

    const std::set<std::string> live = bfs_reachable(g);
    const auto [pruned, removed] = prune_unreachable(g);
    CHECK(removed.size() == 7);
    for (const std::string& id : removed) CHECK(live.count(id) == 0);
    for (const Node& n : pruned.nodes) CHECK(live.count(n.node_id) == 1);
    CHECK(pruned.nodes.size() == live.size());
    // Edges with any dead endpoint are gone.
    for (const Edge& e : pruned.edges) {
      CHECK(live.count(e.from.node_id) == 1);
      CHECK(live.count(e.to.node_id) == 1);
    }
  }
  SUBCASE("random messy graphs") {
    const NodeTypeRegistry groups = testutil::registry_with_groups();
    Pcg32 rng(64);
    for (int trial = 0; trial < 30; ++trial) {
      const MaterialGraph g = testutil::random_messy_graph(rng, groups);
      const std::set<std::string> live = bfs_reachable(g);
      const auto [pruned, removed] = prune_unreachable(g);
      CHECK(pruned.nodes.size() == live.size());
      for (const std::string& id : removed) CHECK(live.count(id) == 0);
    }
  }
}

TEST_CASE("prune requires a valid output node") {
  MaterialGraph g;
  g.nodes.push_back({"m", "Math", {}, {}});
  g.output_node = "";
  CHECK_THROWS_AS(prune_unreachable(g), GraphError);
  g.output_node = "ghost";
  CHECK_THROWS_AS(prune_unreachable(g), GraphError);
}

TEST_CASE("expansion arithmetic follows the node budget") {
  NodeTypeRegistry custom = NodeTypeRegistry::builtins();
  custom.register_type(chain_group("Chain3", 3));
  custom.register_type(chain_group("Chain5", 5));

  SUBCASE("a 3-node group in a 5-node graph expands to 7 nodes") {
    MaterialGraph g = testutil::fixture_graph("flat", reg());  // bsdf + out
    g.nodes.push_back({"grp", "Chain3", {}, {}});
    g.nodes.push_back({"m0", "Math", {}, {}});
    g.nodes.push_back({"m1", "Math", {}, {}});
    REQUIRE(node_count(g) == 5);

    std::vector<std::string> expanded_ids;
    const MaterialGraph expanded = expand_groups(g, custom, 30, &expanded_ids);
    CHECK(node_count(expanded) == 7);
    CHECK(expanded_ids == std::vector<std::string>{"grp"});
    CHECK(expanded.find_node("grp") == nullptr);
    CHECK(expanded.find_node("grp.coord") != nullptr);
    CHECK(expanded.find_node("grp.check") != nullptr);
  }

  SUBCASE("a 5-node group in a 29-node graph stays packed at limit 30") {
    MaterialGraph g = testutil::fixture_graph("flat", reg());
    g.nodes.push_back({"grp", "Chain5", {}, {}});
    for (int i = 0; i < 26; ++i) {
      g.nodes.push_back({"m" + std::to_string(i), "Math", {}, {}});
    }
    REQUIRE(node_count(g) == 29);

    std::vector<std::string> expanded_ids;
    const MaterialGraph expanded = expand_groups(g, custom, 30, &expanded_ids);
    CHECK(expanded_ids.empty());
    CHECK(graphs_equal(g, expanded));
  }
}

TEST_CASE("nested groups expand smallest definition first") {
  const NodeTypeRegistry groups = testutil::registry_with_groups();
  MaterialGraph g = testutil::fixture_graph("flat", groups);
  g.nodes.push_back({"wide", "GroupWide", {}, {}});
  g.nodes.push_back({"nested", "GroupNested", {}, {}});
  g.nodes.push_back({"gnoise", "GroupNoise", {}, {}});

  std::vector<std::string> order;
  const MaterialGraph expanded = expand_groups(g, groups, 30, &order);

  // Hand-derivation of the smallest-first rule. Inner sizes: GroupNested 2,
  // GroupNoise 2, GroupWide 4. First pick ties on size 2 and resolves by
  // type_id, so "nested" (GroupNested) precedes "gnoise" (GroupNoise).
  // Expanding "nested" exposes a new GroupNoise instance "nested.g", which
  // loses the node_id tie against "gnoise". "wide" goes last.
  CHECK(order == std::vector<std::string>{"nested", "gnoise", "nested.g", "wide"});

  for (const Node& n : expanded.nodes) {
    CHECK_FALSE(groups.find(n.type_id)->is_group());
  }
  CHECK(expanded.find_node("nested.g.noise") != nullptr);
  CHECK(expanded.find_node("nested.inv") != nullptr);
  CHECK(expanded.find_node("wide.check") != nullptr);
}

TEST_CASE("expansion stops at groups that no longer fit") {
  const NodeTypeRegistry groups = testutil::registry_with_groups();
  MaterialGraph g = testutil::fixture_graph("flat", groups);
  g.nodes.push_back({"wide", "GroupWide", {}, {}});   // 4 inner
  g.nodes.push_back({"gnoise", "GroupNoise", {}, {}});  // 2 inner

  // Budget 5: expanding gnoise gives 4 - 1 + 2 = 5 nodes; wide would then
  // need 5 - 1 + 4 = 8 and stays as an instance.
  std::vector<std::string> order;
  const MaterialGraph expanded = expand_groups(g, groups, 5, &order);
  CHECK(order == std::vector<std::string>{"gnoise"});
  CHECK(node_count(expanded) == 5);
  CHECK(expanded.find_node("wide") != nullptr);
}

TEST_CASE("validate_material rejects degenerate and oversized materials") {
  const CurationConfig curation;
  const RenderConfig render_cfg = RenderConfig::flat_lighting(128);

  SUBCASE("uniform gray is rejected as uniform") {
    const CurationReport report =
        validate_material(testutil::fixture_graph("flat", reg()), reg(), curation,
                          render_cfg);
    CHECK_FALSE(report.accepted);
    CHECK(has_reason(report, CurationReason::UniformRender));
  }
  SUBCASE("black metal renders empty") {
    MaterialGraph g = testutil::fixture_graph("flat", reg());
    g.find_node("bsdf")->input_defaults["BaseColor"] =
        ParamValue::of_color({0.0, 0.0, 0.0, 1.0});
    g.find_node("bsdf")->input_defaults["Metallic"] = ParamValue::of_float(1.0);
    const CurationReport report = validate_material(g, reg(), curation, render_cfg);
    CHECK_FALSE(report.accepted);
    CHECK(has_reason(report, CurationReason::EmptyRender));
  }
  SUBCASE("31 groupless nodes exceed the budget and nothing else") {
    const CurationReport report = validate_material(graph_with_math_chain(31), reg(),
                                                    curation, render_cfg);
    CHECK_FALSE(report.accepted);
    CHECK(report.reasons == std::vector<CurationReason>{CurationReason::TooManyNodes});
  }
  SUBCASE("30 groupless nodes pass") {
    const CurationReport report = validate_material(graph_with_math_chain(30), reg(),
                                                    curation, render_cfg);
    CHECK(report.accepted);
  }
  SUBCASE("a ramp with 118 stops blows the token budget") {
    MaterialGraph g = testutil::fixture_graph("rampnoise", reg());
    ColorRampValue ramp;
    for (int i = 0; i < 118; ++i) {
      const double t = static_cast<double>(i) / 117.0;
      ramp.stops.push_back({t, {t, 1.0 - t, 0.5, 1.0}});
    }
    g.find_node("ramp")->param_overrides["Ramp"] = ParamValue::of_ramp(ramp);
    REQUIRE(emit(g, reg()).token_count > curation.max_tokens);
    const CurationReport report = validate_material(g, reg(), curation, render_cfg);
    CHECK_FALSE(report.accepted);
    CHECK(has_reason(report, CurationReason::TooManyTokens));
  }
  SUBCASE("missing output is the single fatal reason") {
    MaterialGraph g;
    g.nodes.push_back({"n", "TexNoise", {}, {}});
    g.output_node = "";
    const CurationReport report = validate_material(g, reg(), curation, render_cfg);
    CHECK_FALSE(report.accepted);
    CHECK(report.reasons == std::vector<CurationReason>{CurationReason::NoOutput});
  }
}

TEST_CASE("validate_material accepts every textured fixture") {
  const CurationConfig curation;
  const RenderConfig render_cfg = RenderConfig::flat_lighting(128);
  for (const std::string& name : testutil::textured_fixture_names()) {
    const CurationReport report = validate_material(
        testutil::fixture_graph(name, reg()), reg(), curation, render_cfg);
    CHECK_MESSAGE(report.accepted, "fixture: " << name);
  }
}

TEST_CASE("validate_material prunes and expands before judging size") {
  const NodeTypeRegistry groups = testutil::registry_with_groups();
  const CurationConfig curation;
  const RenderConfig render_cfg = RenderConfig::flat_lighting(128);

  // A textured material plus 3 unreachable nodes; the pruned graph is small,
  // the group instance expands, and the report records both actions.
  MaterialGraph g = testutil::fixture_graph("flat", groups);
  g.nodes.push_back({"gw", "GroupWide", {}, {}});
  g.edges.push_back({{"gw", "Color"}, {"bsdf", "BaseColor"}});
  for (int i = 0; i < 3; ++i) {
    g.nodes.push_back({"stray" + std::to_string(i), "TexMagic", {}, {}});
  }

  MaterialGraph processed;
  const CurationReport report =
      validate_material(g, groups, curation, render_cfg, &processed);
  CHECK(report.accepted);
  CHECK(report.pruned_node_ids.size() == 3);
  CHECK(report.expanded_groups == std::vector<std::string>{"gw"});
  CHECK(processed.find_node("gw.check") != nullptr);
  CHECK(processed.find_node("stray0") == nullptr);
}

TEST_CASE("evaluation failures surface as EmptyRender with a note") {
  // An output binding naming a socket absent from the inner node passes
  // structural validation (which checks nodes, not sockets) but cannot
  // evaluate; curation must absorb the error as a rejection.
  NodeTypeRegistry custom = NodeTypeRegistry::builtins();
  NodeTypeDef def;
  def.type_id = "BrokenSocket";
  SocketSpec out_sock;
  out_sock.name = "Color";
  out_sock.data_kind = SocketKind::Color;
  def.outputs = {out_sock};
  GroupBody body;
  body.inner.nodes = {{"n", "TexNoise", {}, {}}};
  body.output_bindings = {{"Color", {"n", "Bogus"}}};
  def.body = std::move(body);
  custom.register_type(std::move(def));

  MaterialGraph g = testutil::fixture_graph("flat", custom);
  g.nodes.push_back({"bad", "BrokenSocket", {}, {}});
  g.edges.push_back({{"bad", "Color"}, {"bsdf", "BaseColor"}});
  REQUIRE(validate_structure(g, custom).ok);

  const CurationConfig curation;
  const CurationReport report =
      validate_material(g, custom, curation, RenderConfig::flat_lighting(128));
  CHECK_FALSE(report.accepted);
  CHECK(has_reason(report, CurationReason::EmptyRender));
  CHECK_FALSE(report.note.empty());
}

TEST_CASE("validate_material is deterministic") {
  const NodeTypeRegistry groups = testutil::registry_with_groups();
  Pcg32 rng(1357);
  const MaterialGraph g = testutil::random_messy_graph(rng, groups);
  const CurationConfig curation;
  const RenderConfig render_cfg = RenderConfig::flat_lighting(128);
  const CurationReport a = validate_material(g, groups, curation, render_cfg);
  const CurationReport b = validate_material(g, groups, curation, render_cfg);
  CHECK(a.accepted == b.accepted);
  CHECK(a.reasons == b.reasons);
  CHECK(a.pruned_node_ids == b.pruned_node_ids);
  CHECK(a.expanded_groups == b.expanded_groups);
}

TEST_CASE("complexity score separates flat from textured images") {
  const CurationConfig curation;

  SUBCASE("uniform image scores below the threshold") {
    TextureImage uniform(128, 128);
    std::fill(uniform.data.begin(), uniform.data.end(), 0.42f);
    CHECK(complexity_score(uniform) < curation.complexity_threshold);
  }
  SUBCASE("white noise scores above the threshold") {
    TextureImage noise_img(128, 128);
    Pcg32 rng(9);
    for (float& v : noise_img.data) v = static_cast<float>(rng.uniform());
    CHECK(complexity_score(noise_img) > curation.complexity_threshold);
  }
  SUBCASE("uniform scores below noise at every resolution from 64 up") {
    const MaterialGraph noise_graph = testutil::fixture_graph("noise", reg());
    const MaterialGraph flat_graph = testutil::fixture_graph("flat", reg());
    for (int res : {64, 96, 128}) {
      const RenderConfig cfg = RenderConfig::flat_lighting(res);
      const int flat_score = complexity_score(render(flat_graph, reg(), cfg));
      const int noise_score = complexity_score(render(noise_graph, reg(), cfg));
      CHECK(flat_score < noise_score);
    }
  }
}

TEST_CASE("complexity ranking matches a JPEG-size oracle") {
  // The compressed-size proxy must order the fixture renders the way an
  // offline JPEG encoder does: rank correlation at or above 0.8.
  const RenderConfig cfg = RenderConfig::flat_lighting(128);
  std::vector<double> ours, jpegs;
  for (const std::string& name : testutil::textured_fixture_names()) {
    const TextureImage image = render(testutil::fixture_graph(name, reg()), reg(), cfg);
    ours.push_back(static_cast<double>(complexity_score(image)));
    jpegs.push_back(static_cast<double>(jpeg_encoded_size(image, 75)));
  }
  REQUIRE(ours.size() == 10);
  CHECK(testutil::spearman(ours, jpegs) >= 0.8);
}
