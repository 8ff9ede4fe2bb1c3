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

#include <string>
#include <vector>

#include "matforge/dsl.hpp"
#include "matforge/graph.hpp"
#include "matforge/registry.hpp"
#include "matforge/rng.hpp"
#include "support/fixtures.hpp"

using namespace matforge;

namespace {

const NodeTypeRegistry& reg() {
  static const NodeTypeRegistry r = NodeTypeRegistry::builtins();
  return r;
}

}  // namespace

TEST_CASE("smallest nontrivial program parses to two nodes and one edge") {
  const std::string source = R"(bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(bsdf.BSDF, out.Surface)
)";
  const MaterialGraph g = parse(source, reg());
  CHECK(g.nodes.size() == 2);
  CHECK(g.edges.size() == 1);
  CHECK(g.output_node == "out");
  CHECK(g.edges[0].from == SocketRef{"bsdf", "BSDF"});
  CHECK(g.edges[0].to == SocketRef{"out", "Surface"});
  CHECK(validate_structure(g, reg()).ok);
}

TEST_CASE("color-ramp literal transcribes stop for stop") {
  const std::string source = R"(r = node("ColorRamp", "r")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(r.Color, bsdf.BaseColor)
link(bsdf.BSDF, out.Surface)
r.Ramp = ramp("LINEAR", stop(0.0, color(0, 0, 0, 1)), stop(1.0, color(1, 1, 1, 1)))
)";
  const MaterialGraph g = parse(source, reg());
  const Node* node = g.find_node("r");
  REQUIRE(node != nullptr);
  const auto& stored = node->param_overrides.at("Ramp");
  REQUIRE(stored.kind() == ParamKind::ColorRamp);
  const ColorRampValue& transcribed = stored.as_ramp();
  REQUIRE(transcribed.stops.size() == 2);
  CHECK(transcribed.interpolation == RampInterpolation::Linear);
  CHECK(transcribed.stops[0].position == 0.0);
  CHECK(transcribed.stops[0].color == Color4{0.0, 0.0, 0.0, 1.0});
  CHECK(transcribed.stops[1].position == 1.0);
  CHECK(transcribed.stops[1].color == Color4{1.0, 1.0, 1.0, 1.0});

  const std::string shifted = R"(r = node("ColorRamp", "r")
out = node("MaterialOutput", "out")
r.Ramp = ramp("EASE", stop(0.25, color(0.1, 0.2, 0.3, 1)), stop(0.75, color(1, 1, 1, 1)))
)";
  const MaterialGraph g2 = parse(shifted, reg());
  const auto& value = g2.find_node("r")->param_overrides.at("Ramp");
  REQUIRE(value.kind() == ParamKind::ColorRamp);
  const ColorRampValue& ramp = value.as_ramp();
  REQUIRE(ramp.stops.size() == 2);
  CHECK(ramp.interpolation == RampInterpolation::Ease);
  CHECK(ramp.stops[0].position == doctest::Approx(0.25));
  CHECK(ramp.stops[0].color.g == doctest::Approx(0.2));
  CHECK(ramp.stops[1].position == doctest::Approx(0.75));
}

TEST_CASE("every fixture survives emit/parse round trips") {
  for (const std::string& name : testutil::fixture_names()) {
    const MaterialGraph g = testutil::fixture_graph(name, reg());
    const ProgramText text = emit(g, reg());
    const MaterialGraph back = parse(text.source, reg());
    CHECK_MESSAGE(graphs_equal(g, back), "fixture: " << name);

    // emit(parse(emit(G))) is byte-stable once canonicalized.
    const ProgramText again = emit(back, reg());
    CHECK(again.source == text.source);
    CHECK(again.token_count == text.token_count);
  }
}

TEST_CASE("random graphs survive emit/parse round trips") {
  Pcg32 rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    const MaterialGraph g = testutil::random_graph(rng, reg());
    const ProgramText text = emit(g, reg());
    const MaterialGraph back = parse(text.source, reg());
    CHECK(graphs_equal(g, back));
  }
}

TEST_CASE("hand-counted program measures 57 tokens") {
  // Four declarations (8 tokens each: name, '=', 'node', '(', type, ',',
  // id, ')'), two links (10 each), one scalar assignment (5).
  const std::string source = R"(coord = node("TexCoord", "coord")
noise = node("TexNoise", "noise")
bsdf = node("PrincipledBSDF", "bsdf")
out = node("MaterialOutput", "out")
link(noise.Color, bsdf.BaseColor)
link(bsdf.BSDF, out.Surface)
noise.Scale = 8
)";
  CHECK(count_tokens(source) == 57);
}

TEST_CASE("empty programs and comments count zero tokens") {
  CHECK(count_tokens("") == 0);
  CHECK(count_tokens("   \n\n  ") == 0);
  CHECK(count_tokens("# only a comment\n# and another\n") == 0);
}

TEST_CASE("token count ignores whitespace reformatting") {
  const std::string& source = testutil::fixture_source("brick");
  std::string reformatted;
  for (char c : source) {
    reformatted += c;
    if (c == ',') reformatted += "   ";
    if (c == '\n') reformatted += "\n\t  \n";
  }
  CHECK(count_tokens(reformatted) == count_tokens(source));
  CHECK(graphs_equal(parse(reformatted, reg()), parse(source, reg())));
}

TEST_CASE("all-default graphs emit zero assignment lines") {
  MaterialGraph g;
  g.nodes.push_back({"grad", "TexGradient", {}, {}});
  g.nodes.push_back({"bsdf", "PrincipledBSDF", {}, {}});
  g.nodes.push_back({"out", "MaterialOutput", {}, {}});
  g.edges.push_back({{"grad", "Color"}, {"bsdf", "BaseColor"}});
  g.edges.push_back({{"bsdf", "BSDF"}, {"out", "Surface"}});
  g.output_node = "out";
  const ProgramText text = emit(g, reg());
  CHECK(text.source.find('=') != std::string::npos);  // declarations remain
  for (const std::string needle : {"Scale =", "Roughness =", "Metallic ="}) {
    CHECK(text.source.find(needle) == std::string::npos);
  }
  // 3 declarations + 2 links and nothing else.
  CHECK(text.token_count == 3 * 8 + 2 * 10);
}

TEST_CASE("token count grows with each added override") {
  MaterialGraph g = testutil::fixture_graph("checker", reg());
  const int base = emit(g, reg()).token_count;

  g.find_node("check")->input_defaults["Color1"] =
      ParamValue::of_color({0.9, 0.1, 0.1, 1.0});
  const int with_color = emit(g, reg()).token_count;
  CHECK(with_color == base + 14);  // name.param = color(r,g,b,a)

  g.find_node("bsdf")->input_defaults["Roughness"] = ParamValue::of_float(0.25);
  const int with_scalar = emit(g, reg()).token_count;
  CHECK(with_scalar == with_color + 5);

  g.nodes.push_back({"map",
                     "Mapping",
                     {},
                     {{"Scale", ParamValue::of_vector({2, 2, 2})},
                      {"Rotation", ParamValue::of_vector({0, 0, 1})}}});
  g.edges.push_back({{"map", "Vector"}, {"check", "Vector"}});
  const int with_vectors = emit(g, reg()).token_count;
  CHECK(with_vectors == with_scalar + 8 + 10 + 2 * 11);  // decl + link + two vectors
}

TEST_CASE("emitted text shifts only in identifiers when ids are renamed") {
  const MaterialGraph g = testutil::fixture_graph("voronoi", reg());
  MaterialGraph renamed = g;
  for (Node& n : renamed.nodes) n.node_id = "z" + n.node_id;
  for (Edge& e : renamed.edges) {
    e.from.node_id = "z" + e.from.node_id;
    e.to.node_id = "z" + e.to.node_id;
  }
  renamed.output_node = "z" + renamed.output_node;

  std::string expected = emit(g, reg()).source;
  // Renaming every id with a "z" prefix must reproduce the emitted text under
  // the same substitution: token streams line up one to one.
  const std::string actual = emit(renamed, reg()).source;
  CHECK(count_tokens(actual) == count_tokens(expected));
  std::string patched = actual;
  for (const std::string& id : {"vor", "bsdf", "out"}) {
    std::string::size_type pos = 0;
    while ((pos = patched.find("z" + id, pos)) != std::string::npos) {
      patched.erase(pos, 1);
      pos += id.size();
    }
  }
  CHECK(patched == expected);
}

TEST_CASE("emit orders declarations topologically") {
  const MaterialGraph g = testutil::fixture_graph("rampnoise", reg());
  const std::string text = emit(g, reg()).source;
  const auto pos_noise = text.find("\"TexNoise\"");
  const auto pos_ramp = text.find("\"ColorRamp\"");
  const auto pos_bsdf = text.find("\"PrincipledBSDF\"");
  const auto pos_out = text.find("\"MaterialOutput\"");
  REQUIRE(pos_noise != std::string::npos);
  CHECK(pos_noise < pos_ramp);
  CHECK(pos_ramp < pos_bsdf);
  CHECK(pos_bsdf < pos_out);
}

TEST_CASE("lexical errors carry position and kind") {
  try {
    parse("n = node(\"TexNoise\", \"n\")\nn.Scale = @5\n", reg());
    FAIL("expected DslError");
  } catch (const DslError& e) {
    CHECK(e.kind() == DslErrorKind::Lexical);
    CHECK(e.line() == 2);
    CHECK(e.column() > 0);
  }
  CHECK_THROWS_AS(count_tokens("a = $"), DslError);
}

TEST_CASE("semantic errors name the offending statement") {
  SUBCASE("unknown node type") {
    try {
      parse("n = node(\"TexNonsense\", \"n\")\n", reg());
      FAIL("expected DslError");
    } catch (const DslError& e) {
      CHECK(e.kind() == DslErrorKind::Semantic);
    }
  }
  SUBCASE("unknown socket in link") {
    const std::string source = R"(n = node("TexNoise", "n")
b = node("PrincipledBSDF", "b")
link(n.Colour, b.BaseColor)
)";
    CHECK_THROWS_AS(parse(source, reg()), DslError);
  }
  SUBCASE("unknown parameter") {
    CHECK_THROWS_AS(parse("n = node(\"TexNoise\", \"n\")\nn.Zoom = 2\n", reg()),
                    DslError);
  }
  SUBCASE("undeclared variable in link") {
    CHECK_THROWS_AS(parse("link(a.Color, b.Vector)\n", reg()), DslError);
  }
  SUBCASE("kind mismatch in assignment") {
    CHECK_THROWS_AS(
        parse("n = node(\"TexNoise\", \"n\")\nn.Scale = vector(1, 2, 3)\n", reg()),
        DslError);
  }
}

TEST_CASE("structural errors reject cyclic or outputless programs") {
  SUBCASE("cycle") {
    const std::string source = R"(a = node("Math", "a")
b = node("Math", "b")
out = node("MaterialOutput", "out")
link(a.Value, b.Value1)
link(b.Value, a.Value1)
)";
    try {
      parse(source, reg());
      FAIL("expected DslError");
    } catch (const DslError& e) {
      CHECK(e.kind() == DslErrorKind::Structural);
    }
  }
  SUBCASE("missing output node") {
    try {
      parse("n = node(\"TexNoise\", \"n\")\n", reg());
      FAIL("expected DslError");
    } catch (const DslError& e) {
      CHECK(e.kind() == DslErrorKind::Structural);
    }
  }
  SUBCASE("two output nodes") {
    const std::string source = R"(o1 = node("MaterialOutput", "o1")
o2 = node("MaterialOutput", "o2")
)";
    CHECK_THROWS_AS(parse(source, reg()), DslError);
  }
  SUBCASE("duplicate node id") {
    const std::string source = R"(a = node("Math", "dup")
b = node("Math", "dup")
out = node("MaterialOutput", "out")
)";
    CHECK_THROWS_AS(parse(source, reg()), DslError);
  }
}

TEST_CASE("reserved words cannot name nodes") {
  for (const std::string word : {"node", "link", "vector", "color", "ramp", "stop",
                                 "true", "false"}) {
    const std::string source = word + " = node(\"TexNoise\", \"" + word + "\")\n" +
                               "out = node(\"MaterialOutput\", \"out\")\n";
    CHECK_THROWS_AS(parse(source, reg()), DslError);
  }
}

TEST_CASE("emit is deterministic across node orderings") {
  Pcg32 rng(99);
  const MaterialGraph g = testutil::random_graph(rng, reg());
  MaterialGraph shuffled = g;
  std::reverse(shuffled.nodes.begin(), shuffled.nodes.end());
  std::reverse(shuffled.edges.begin(), shuffled.edges.end());
  CHECK(emit(g, reg()).source == emit(shuffled, reg()).source);
}
