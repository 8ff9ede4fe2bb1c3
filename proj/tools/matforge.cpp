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

// Command-line front end. Machine output is line-delimited JSON on stdout;
// diagnostics go to stderr. Exit codes: 0 success, 1 domain rejection
// (invalid material, failed evaluation), 2 usage error (bad flags, missing
// inputs). JSONL schemas are documented in docs/schemas.md.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matforge/augment.hpp"
#include "matforge/curate.hpp"
#include "matforge/dsl.hpp"
#include "matforge/harness.hpp"
#include "matforge/image_io.hpp"
#include "matforge/json_io.hpp"
#include "matforge/metrics.hpp"
#include "matforge/optimize.hpp"
#include "matforge/parallel.hpp"
#include "matforge/render.hpp"
#include "matforge/toml.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using namespace matforge;

namespace {

// Thrown for bad invocations (missing inputs, unreadable paths): exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("short write to " + path);
}

// Programs are DSL text (.matl) or the JSON wire format (.json).
MaterialGraph load_program(const std::string& path, const NodeTypeRegistry& registry) {
  std::string text = read_text_file(path);
  if (fs::path(path).extension() == ".json") return graph_from_json(text);
  return parse(text, registry);
}

ojson loss_json(const LossReport& losses) {
  return ojson{{"style", losses.style}, {"swd", losses.swd}, {"down_l1", losses.down_l1}};
}

// ---------------------------------------------------------------------------
// Config plumbing: a TOML file mirrors every flag; explicit flags win.

struct Global {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string config_path;
  TomlTable config;
};

// Fetch helpers: TOML value if present, else the built-in default. CLI
// overrides are applied after these, gated on the option being used.
int cfg_int(const Global& g, const std::string& key, int fallback) {
  auto v = g.config.get_int(key);
  return v ? static_cast<int>(*v) : fallback;
}
double cfg_float(const Global& g, const std::string& key, double fallback) {
  auto v = g.config.get_float(key);
  return v ? *v : fallback;
}
bool cfg_bool(const Global& g, const std::string& key, bool fallback) {
  auto v = g.config.get_bool(key);
  return v ? *v : fallback;
}
std::string cfg_str(const Global& g, const std::string& key, const std::string& fallback) {
  auto v = g.config.get_string(key);
  return v ? *v : fallback;
}

RenderConfig render_config_from(const Global& g) {
  RenderConfig rc;
  if (cfg_bool(g, "render.flat", false)) rc = RenderConfig::flat_lighting(rc.resolution);
  rc.resolution = cfg_int(g, "render.resolution", rc.resolution);
  rc.uv_scale = cfg_float(g, "render.uv_scale", rc.uv_scale);
  rc.ambient = cfg_float(g, "render.ambient", rc.ambient);
  rc.light_intensity = cfg_float(g, "render.light_intensity", rc.light_intensity);
  rc.light_position.x = cfg_float(g, "render.light_x", rc.light_position.x);
  rc.light_position.y = cfg_float(g, "render.light_y", rc.light_position.y);
  rc.light_position.z = cfg_float(g, "render.light_z", rc.light_position.z);
  rc.seed = g.seed;
  rc.threads = g.threads;
  return rc;
}

CurationConfig curation_config_from(const Global& g) {
  CurationConfig cc;
  cc.max_nodes = cfg_int(g, "curation.max_nodes", cc.max_nodes);
  cc.max_tokens = cfg_int(g, "curation.max_tokens", cc.max_tokens);
  cc.complexity_threshold = cfg_int(g, "curation.complexity_threshold", cc.complexity_threshold);
  cc.resolution = cfg_int(g, "curation.resolution", cc.resolution);
  return cc;
}

ParamSampleConfig sample_config_from(const Global& g) {
  ParamSampleConfig sc;
  sc.rel_interval = cfg_float(g, "sample.rel_interval", sc.rel_interval);
  sc.abs_min_interval = cfg_float(g, "sample.abs_min_interval", sc.abs_min_interval);
  sc.hue_full_range = cfg_bool(g, "sample.hue_full_range", sc.hue_full_range);
  sc.sv_interval = cfg_float(g, "sample.sv_interval", sc.sv_interval);
  sc.categorical_prob = cfg_float(g, "sample.categorical_prob", sc.categorical_prob);
  sc.default_param_prob = cfg_float(g, "sample.default_param_prob", sc.default_param_prob);
  sc.rng_seed = g.seed;
  return sc;
}

CrossoverConfig crossover_config_from(const Global& g) {
  CrossoverConfig xc;
  xc.max_nodes = cfg_int(g, "crossover.max_nodes", xc.max_nodes);
  xc.trials_per_pair = cfg_int(g, "crossover.trials_per_pair", xc.trials_per_pair);
  xc.max_valid_per_pair = cfg_int(g, "crossover.max_valid_per_pair", xc.max_valid_per_pair);
  xc.rng_seed = g.seed;
  return xc;
}

FeatureBankConfig bank_config_from(const Global& g) {
  FeatureBankConfig bank;
  bank.layers = cfg_int(g, "metrics.layers", bank.layers);
  bank.filters_per_layer = cfg_int(g, "metrics.filters_per_layer", bank.filters_per_layer);
  bank.seed = static_cast<std::uint64_t>(cfg_int(g, "metrics.bank_seed", 0));
  return bank;
}

ojson render_config_json(const RenderConfig& rc) {
  return ojson{{"resolution", rc.resolution},
               {"uv_scale", rc.uv_scale},
               {"light_position", {rc.light_position.x, rc.light_position.y, rc.light_position.z}},
               {"light_intensity", rc.light_intensity},
               {"ambient", rc.ambient},
               {"seed", rc.seed}};
}

ojson curation_config_json(const CurationConfig& cc) {
  return ojson{{"max_nodes", cc.max_nodes},
               {"max_tokens", cc.max_tokens},
               {"complexity_threshold", cc.complexity_threshold},
               {"resolution", cc.resolution}};
}

ojson sample_config_json(const ParamSampleConfig& sc) {
  return ojson{{"rel_interval", sc.rel_interval},
               {"abs_min_interval", sc.abs_min_interval},
               {"hue_full_range", sc.hue_full_range},
               {"sv_interval", sc.sv_interval},
               {"categorical_prob", sc.categorical_prob},
               {"default_param_prob", sc.default_param_prob},
               {"rng_seed", sc.rng_seed}};
}

ojson crossover_config_json(const CrossoverConfig& xc) {
  return ojson{{"max_nodes", xc.max_nodes},
               {"trials_per_pair", xc.trials_per_pair},
               {"max_valid_per_pair", xc.max_valid_per_pair},
               {"rng_seed", xc.rng_seed}};
}

ojson bank_config_json(const FeatureBankConfig& bank) {
  return ojson{{"layers", bank.layers},
               {"filters_per_layer", bank.filters_per_layer},
               {"seed", bank.seed}};
}

ojson curation_report_json(const CurationReport& report) {
  ojson reasons = ojson::array();
  for (CurationReason reason : report.reasons) reasons.push_back(curation_reason_name(reason));
  ojson line{{"accepted", report.accepted},
             {"reasons", std::move(reasons)},
             {"pruned_node_ids", report.pruned_node_ids},
             {"expanded_groups", report.expanded_groups}};
  if (!report.note.empty()) line["note"] = report.note;
  return line;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
  std::string program;
};

int run_validate(const Global& g, const ValidateArgs& args) {
  const NodeTypeRegistry registry = NodeTypeRegistry::builtins();
  ojson line{{"program", args.program}, {"ok", false}, {"violations", ojson::array()}};
  try {
    MaterialGraph graph = load_program(args.program, registry);
    ValidationReport report = validate_structure(graph, registry);
    line["ok"] = report.ok;
    for (const Violation& v : report.violations) {
      line["violations"].push_back(
          ojson{{"code", violation_code_name(v.code)}, {"message", v.message}});
    }
  } catch (const DslError& e) {
    const char* kind = e.kind() == DslErrorKind::Lexical     ? "Lexical"
                       : e.kind() == DslErrorKind::Semantic  ? "Semantic"
                                                             : "Structural";
    line["violations"].push_back(ojson{{"code", kind}, {"message", e.what()}});
  } catch (const JsonError& e) {
    line["violations"].push_back(ojson{{"code", "Json"}, {"message", e.what()}});
  }
  std::cout << line.dump() << "\n";
  return line["ok"].get<bool>() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// render

struct RenderArgs {
  std::string program;
  std::string out;
  int resolution = 0;       // 0: from config/default
  double uv_scale = 0.0;    // 0: from config/default
  bool flat = false;
};

int run_render(const Global& g, const RenderArgs& args) {
  const NodeTypeRegistry registry = NodeTypeRegistry::builtins();
  RenderConfig rc = render_config_from(g);
  if (args.flat) {
    std::uint64_t seed = rc.seed;
    int threads = rc.threads;
    rc = RenderConfig::flat_lighting(rc.resolution, seed);
    rc.threads = threads;
  }
  if (args.resolution > 0) rc.resolution = args.resolution;
  if (args.uv_scale > 0.0) rc.uv_scale = args.uv_scale;

  MaterialGraph graph = load_program(args.program, registry);
  TextureImage image = render(graph, registry, rc);
  write_image(args.out, image);

  ojson line{{"program", args.program},
             {"out", args.out},
             {"mean_luminance", mean_luminance(image)},
             {"config", render_config_json(rc)}};
  std::cout << line.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// curate

struct CurateArgs {
  std::string in_dir;
  std::string out_dir;
  std::string report;
};

int run_curate(const Global& g, const CurateArgs& args) {
  const NodeTypeRegistry registry = NodeTypeRegistry::builtins();
  const CurationConfig cc = curation_config_from(g);
  const RenderConfig rc = RenderConfig::flat_lighting(cc.resolution, g.seed);

  if (!fs::is_directory(args.in_dir)) throw UsageError("--in is not a directory: " + args.in_dir);
  fs::create_directories(args.out_dir);

  std::vector<fs::path> inputs;
  for (const fs::directory_entry& entry : fs::directory_iterator(args.in_dir)) {
    if (!entry.is_regular_file()) continue;
    fs::path ext = entry.path().extension();
    if (ext == ".matl" || ext == ".json") inputs.push_back(entry.path());
  }
  std::sort(inputs.begin(), inputs.end());

  std::vector<ojson> lines(inputs.size());
  parallel_for(
      inputs.size(),
      [&](std::size_t i) {
        const fs::path& path = inputs[i];
        ojson line{{"id", path.stem().string()}};
        try {
          MaterialGraph graph = load_program(path.string(), registry);
          MaterialGraph processed;
          CurationReport report = validate_material(graph, registry, cc, rc, &processed);
          line.update(curation_report_json(report));
          if (report.accepted) {
            fs::path out = fs::path(args.out_dir) / (path.stem().string() + ".matl");
            write_text_file(out.string(), emit(processed, registry).source);
            line["out"] = out.string();
          }
        } catch (const std::exception& e) {
          line["accepted"] = false;
          line["reasons"] = ojson::array();
          line["error"] = e.what();
        }
        line["config"] = curation_config_json(cc);
        lines[i] = std::move(line);
      },
      g.threads);

  std::ofstream report(args.report, std::ios::binary);
  if (!report) throw std::runtime_error("cannot write " + args.report);
  for (const ojson& line : lines) {
    std::string text = line.dump();
    report << text << "\n";
    std::cout << text << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// augment params

struct AugmentParamsArgs {
  std::string program;
  std::string out;
  std::string out_dir;
  int count = 1;
  int token_limit = 0;  // 0: no limit
};

int run_augment_params(const Global& g, const AugmentParamsArgs& args) {
  const NodeTypeRegistry registry = NodeTypeRegistry::builtins();
  ParamSampleConfig sc = sample_config_from(g);
  int token_limit = args.token_limit > 0 ? args.token_limit
                                         : cfg_int(g, "sample.token_limit", 0);

  if (args.count > 1 && args.out_dir.empty()) {
    throw UsageError("--count > 1 requires --out-dir");
  }
  if (args.count == 1 && args.out.empty() && args.out_dir.empty()) {
    throw UsageError("need --out or --out-dir");
  }
  if (!args.out_dir.empty()) fs::create_directories(args.out_dir);

  MaterialGraph graph = load_program(args.program, registry);
  const std::string stem = fs::path(args.program).stem().string();

  for (int i = 0; i < args.count; ++i) {
    ParamSampleConfig variant_config = sc;
    variant_config.rng_seed = derive_seed(sc.rng_seed, static_cast<std::uint64_t>(i));
    std::optional<int> limit;
    if (token_limit > 0) limit = token_limit;
    ParamSampleResult sampled = sample_parameters(graph, registry, variant_config, limit);
    ProgramText text = emit(sampled.graph, registry);

    std::string out_path = args.out;
    if (!args.out_dir.empty()) {
      char suffix[16];
      std::snprintf(suffix, sizeof suffix, "_%03d.matl", i);
      out_path = (fs::path(args.out_dir) / (stem + suffix)).string();
    }
    write_text_file(out_path, text.source);

    ojson line{{"variant", i},
               {"out", out_path},
               {"tokens", text.token_count},
               {"forced_all_default", sampled.forced_all_default},
               {"config", sample_config_json(variant_config)}};
    if (token_limit > 0) line["token_limit"] = token_limit;
    std::cout << line.dump() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// augment structure

struct AugmentStructureArgs {
  std::string parent_a;
  std::string parent_b;
  std::string pool_dir;
  std::string out_dir;
  int target = 0;
  std::string backend = "splice";
  std::string http_host;
  int http_port = 0;
  std::string http_path;
  std::string instruction_file;
};

std::unique_ptr<CrossoverBackend> make_backend(const Global& g,
                                               const AugmentStructureArgs& args,
                                               const NodeTypeRegistry& registry) {
  if (args.backend == "splice") return std::make_unique<SpliceBackend>(registry);
  if (args.backend != "http") throw UsageError("--backend must be splice or http");
  HttpBackendConfig hc;
  hc.host = !args.http_host.empty() ? args.http_host : cfg_str(g, "http.host", hc.host);
  hc.port = args.http_port > 0 ? args.http_port : cfg_int(g, "http.port", hc.port);
  hc.path = !args.http_path.empty() ? args.http_path : cfg_str(g, "http.path", hc.path);
  hc.timeout_seconds = cfg_int(g, "http.timeout_seconds", hc.timeout_seconds);
  hc.max_retries = cfg_int(g, "http.max_retries", hc.max_retries);
  std::string instruction_file =
      !args.instruction_file.empty() ? args.instruction_file : cfg_str(g, "http.instruction_file", "");
  if (!instruction_file.empty()) hc.instruction = read_text_file(instruction_file);
  return std::make_unique<HttpBackend>(hc);
}

int run_augment_structure(const Global& g, const AugmentStructureArgs& args) {
  const NodeTypeRegistry registry = NodeTypeRegistry::builtins();
  const CrossoverConfig xc = crossover_config_from(g);
  std::unique_ptr<CrossoverBackend> backend = make_backend(g, args, registry);
  fs::create_directories(args.out_dir);

  if (!args.pool_dir.empty()) {
    // Pool mode: grow every .matl under --pool to --target members.
    if (args.target <= 0) throw UsageError("--pool requires --target");
    std::vector<fs::path> files;
    for (const fs::directory_entry& entry : fs::directory_iterator(args.pool_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".matl") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw UsageError("--pool holds no .matl programs");

    std::vector<MaterialGraph> pool;
    for (const fs::path& path : files) pool.push_back(load_program(path.string(), registry));
    const std::size_t seeds = pool.size();

    pool = evolve_pool(std::move(pool), registry, *backend,
                       static_cast<std::size_t>(args.target), xc, &std::cerr);

    for (std::size_t i = seeds; i < pool.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "evolved_%03zu.matl", i - seeds);
      fs::path out = fs::path(args.out_dir) / name;
      write_text_file(out.string(), emit(pool[i], registry).source);
      ojson line{{"member", i - seeds},
                 {"out", out.string()},
                 {"nodes", pool[i].nodes.size()},
                 {"config", crossover_config_json(xc)}};
      std::cout << line.dump() << "\n";
    }
    return 0;
  }

  if (args.parent_a.empty() || args.parent_b.empty()) {
    throw UsageError("need --a and --b (or --pool with --target)");
  }
  MaterialGraph a = load_program(args.parent_a, registry);
  MaterialGraph b = load_program(args.parent_b, registry);
  std::vector<MaterialGraph> children = crossover(a, b, registry, xc, backend.get());

  const std::string stem =
      fs::path(args.parent_a).stem().string() + "_x_" + fs::path(args.parent_b).stem().string();
  for (std::size_t i = 0; i < children.size(); ++i) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_%02zu.matl", i);
    fs::path out = fs::path(args.out_dir) / (stem + suffix);
    write_text_file(out.string(), emit(children[i], registry).source);
    ojson line{{"child", i},
               {"out", out.string()},
               {"nodes", children[i].nodes.size()},
               {"config", crossover_config_json(xc)}};
    std::cout << line.dump() << "\n";
  }
  std::cerr << "augment structure: " << children.size() << " valid children from "
            << xc.trials_per_pair << " trials\n";
  return 0;
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeArgs {
  std::string program;
  std::string target;
  std::string out;
  std::string trace;
  int iters = 0;  // 0: from config/default
};

int run_optimize(const Global& g, const OptimizeArgs& args) {
  const NodeTypeRegistry registry = NodeTypeRegistry::builtins();

  McmcConfig mc;
  mc.n_iters = args.iters > 0 ? args.iters : cfg_int(g, "mcmc.n_iters", mc.n_iters);
  mc.p_acc = cfg_float(g, "mcmc.p_acc", mc.p_acc);
  mc.param_fraction = cfg_float(g, "mcmc.param_fraction", mc.param_fraction);
  mc.rel_interval = cfg_float(g, "mcmc.rel_interval", mc.rel_interval);
  mc.categorical_prob = cfg_float(g, "mcmc.categorical_prob", mc.categorical_prob);
  mc.style_weight = cfg_float(g, "mcmc.style_weight", mc.style_weight);
  mc.swd_weight = cfg_float(g, "mcmc.swd_weight", mc.swd_weight);
  mc.rng_seed = g.seed;
  mc.bank = bank_config_from(g);
  mc.render_config = render_config_from(g);

  MaterialGraph initial = load_program(args.program, registry);
  TextureImage target = read_image(args.target);
  if (target.width != target.height) throw std::runtime_error("target image must be square");
  mc.render_config.resolution = target.width;

  auto [best, trace] = mcmc_optimize(initial, target, registry, mc);
  write_text_file(args.out, emit(best, registry).source);

  if (!args.trace.empty()) {
    std::ofstream out(args.trace, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + args.trace);
    for (const McmcIteration& it : trace.iterations) {
      ojson line{{"iteration", it.iteration},
                 {"proposal_loss", std::isfinite(it.proposal_loss) ? ojson(it.proposal_loss)
                                                                   : ojson("inf")},
                 {"accepted", it.accepted},
                 {"best_loss", it.best_loss},
                 {"sampled_params", it.sampled_params}};
      out << line.dump() << "\n";
    }
  }

  ojson line{{"program", args.program},
             {"target", args.target},
             {"out", args.out},
             {"initial_loss", trace.initial_loss},
             {"best_loss", trace.best_loss},
             {"iterations", mc.n_iters},
             {"config",
              ojson{{"n_iters", mc.n_iters},
                    {"p_acc", mc.p_acc},
                    {"param_fraction", mc.param_fraction},
                    {"rel_interval", mc.rel_interval},
                    {"categorical_prob", mc.categorical_prob},
                    {"style_weight", mc.style_weight},
                    {"swd_weight", mc.swd_weight},
                    {"rng_seed", mc.rng_seed},
                    {"render", render_config_json(mc.render_config)},
                    {"bank", bank_config_json(mc.bank)}}}};
  std::cout << line.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string a;
  std::string b;
};

int run_evaluate(const Global& g, const EvaluateArgs& args) {
  TextureImage a = read_image(args.a);
  TextureImage b = read_image(args.b);
  FeatureBankConfig bank = bank_config_from(g);
  int projections = cfg_int(g, "metrics.swd_projections", 64);
  int patch = cfg_int(g, "metrics.swd_patch_size", 3);
  std::uint64_t swd_seed = static_cast<std::uint64_t>(cfg_int(g, "metrics.swd_seed", 0));

  LossReport losses = loss_report(a, b, bank, projections, patch, swd_seed);
  ojson line = loss_json(losses);
  line["config"] = ojson{{"bank", bank_config_json(bank)},
                         {"swd_projections", projections},
                         {"swd_patch_size", patch},
                         {"swd_seed", swd_seed}};
  std::cout << line.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// harness run

struct HarnessArgs {
  std::string suite;
  std::string report;
  int n_max = 0;
  int k_valid = 0;
};

int run_harness(const Global& g, const HarnessArgs& args) {
  const NodeTypeRegistry registry = NodeTypeRegistry::builtins();

  ProtocolConfig pc;
  pc.n_max = args.n_max > 0 ? args.n_max : cfg_int(g, "protocol.n_max", pc.n_max);
  pc.k_valid = args.k_valid > 0 ? args.k_valid : cfg_int(g, "protocol.k_valid", pc.k_valid);
  pc.curation = curation_config_from(g);
  pc.render_config = RenderConfig::flat_lighting(pc.curation.resolution, g.seed);
  pc.bank = bank_config_from(g);
  pc.swd_projections = cfg_int(g, "metrics.swd_projections", pc.swd_projections);
  pc.swd_patch_size = cfg_int(g, "metrics.swd_patch_size", pc.swd_patch_size);
  pc.swd_seed = static_cast<std::uint64_t>(cfg_int(g, "metrics.swd_seed", 0));

  std::vector<ProtocolResult> results;
  try {
    results = run_suite(args.suite, registry, pc, &std::cerr, g.threads);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ojson config{{"n_max", pc.n_max},
               {"k_valid", pc.k_valid},
               {"curation", curation_config_json(pc.curation)},
               {"bank", bank_config_json(pc.bank)}};

  std::ofstream report(args.report, std::ios::binary);
  if (!report) throw std::runtime_error("cannot write " + args.report);
  for (const ProtocolResult& r : results) {
    ojson line{{"image_id", r.image_id},
               {"n_tried", r.n_tried},
               {"k_valid_found", r.k_valid_found},
               {"correctness", r.correctness}};
    if (r.best_index) {
      line["best_index"] = *r.best_index;
      line["best_losses"] = loss_json(r.best_losses);
    }
    line["config"] = config;
    std::string text = line.dump();
    report << text << "\n";
    std::cout << text << "\n";
  }

  BatchSummary summary = batch_report(results);
  ojson line{{"summary",
              ojson{{"images", summary.images},
                    {"images_with_result", summary.images_with_result},
                    {"mean_style", summary.mean_style},
                    {"mean_swd", summary.mean_swd},
                    {"mean_correctness", summary.mean_correctness}}},
             {"config", config}};
  std::cout << line.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matforge: procedural material compiler and inverse-optimization toolkit"};
  app.require_subcommand(1);

  Global global;
  app.add_option("--seed", global.seed, "Seed for every stochastic stage (default 0)");
  app.add_option("--threads", global.threads,
                 "Worker threads (0 = auto, or the MATFORGE_THREADS environment variable)");
  app.add_option("--config", global.config_path, "TOML config file mirroring all flags");

  ValidateArgs validate_args;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a program against the node library");
  validate_cmd->add_option("--program", validate_args.program, "Program file (.matl or .json)")
      ->required();

  RenderArgs render_args;
  CLI::App* render_cmd = app.add_subcommand("render", "Render a program to an image");
  render_cmd->add_option("--program", render_args.program, "Program file")->required();
  render_cmd->add_option("--out", render_args.out, "Output image (.png or .f32)")->required();
  render_cmd->add_option("--resolution", render_args.resolution, "Image resolution");
  render_cmd->add_option("--uv-scale", render_args.uv_scale, "UV tiling factor");
  render_cmd->add_flag("--flat", render_args.flat, "Flat (texture-only) lighting preset");

  CurateArgs curate_args;
  CLI::App* curate_cmd = app.add_subcommand("curate", "Filter a directory of programs");
  curate_cmd->add_option("--in", curate_args.in_dir, "Input directory")->required();
  curate_cmd->add_option("--out", curate_args.out_dir, "Directory for accepted programs")
      ->required();
  curate_cmd->add_option("--report", curate_args.report, "JSONL report path")->required();

  CLI::App* augment_cmd = app.add_subcommand("augment", "Generate program variants");
  augment_cmd->require_subcommand(1);

  AugmentParamsArgs params_args;
  CLI::App* params_cmd = augment_cmd->add_subcommand("params", "Sample parameter variants");
  params_cmd->add_option("--program", params_args.program, "Program file")->required();
  params_cmd->add_option("--out", params_args.out, "Output program (single variant)");
  params_cmd->add_option("--out-dir", params_args.out_dir, "Output directory");
  params_cmd->add_option("--count", params_args.count, "Number of variants (default 1)");
  params_cmd->add_option("--token-limit", params_args.token_limit,
                         "Reset parameters until the program fits (0 = no limit)");

  AugmentStructureArgs structure_args;
  CLI::App* structure_cmd =
      augment_cmd->add_subcommand("structure", "Cross programs into new structures");
  structure_cmd->add_option("--a", structure_args.parent_a, "Parent program A");
  structure_cmd->add_option("--b", structure_args.parent_b, "Parent program B");
  structure_cmd->add_option("--pool", structure_args.pool_dir,
                            "Directory of seed programs (pool mode)");
  structure_cmd->add_option("--target", structure_args.target, "Pool size to grow to");
  structure_cmd->add_option("--out-dir", structure_args.out_dir, "Directory for children")
      ->required();
  structure_cmd->add_option("--backend", structure_args.backend, "splice (built-in) or http");
  structure_cmd->add_option("--host", structure_args.http_host, "HTTP backend host");
  structure_cmd->add_option("--port", structure_args.http_port, "HTTP backend port");
  structure_cmd->add_option("--path", structure_args.http_path, "HTTP backend route");
  structure_cmd->add_option("--instruction", structure_args.instruction_file,
                            "Instruction template file for the HTTP backend");

  OptimizeArgs optimize_args;
  CLI::App* optimize_cmd = app.add_subcommand("optimize", "MCMC-refine parameters to a target");
  optimize_cmd->add_option("--program", optimize_args.program, "Initial program")->required();
  optimize_cmd->add_option("--target", optimize_args.target, "Target image (.png or .f32)")
      ->required();
  optimize_cmd->add_option("--out", optimize_args.out, "Refined program path")->required();
  optimize_cmd->add_option("--trace", optimize_args.trace, "Per-iteration JSONL trace path");
  optimize_cmd->add_option("--iters", optimize_args.iters, "Iteration count (default 200)");

  EvaluateArgs evaluate_args;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Loss report between two images");
  evaluate_cmd->add_option("--a", evaluate_args.a, "First image")->required();
  evaluate_cmd->add_option("--b", evaluate_args.b, "Second image")->required();
  evaluate_cmd->add_flag("--json", "Machine output (always on; flag kept for compatibility)");

  HarnessArgs harness_args;
  CLI::App* harness_cmd = app.add_subcommand("harness", "Evaluation protocol");
  harness_cmd->require_subcommand(1);
  CLI::App* harness_run = harness_cmd->add_subcommand("run", "Score a suite directory");
  harness_run->add_option("--suite", harness_args.suite, "Suite root directory")->required();
  harness_run->add_option("--n", harness_args.n_max, "Candidate budget per image (default 50)");
  harness_run->add_option("--k", harness_args.k_valid, "Valid-program target (default 20)");
  harness_run->add_option("--report", harness_args.report, "JSONL report path")->required();

  // Global flags remain valid after a subcommand name (the documented
  // invocation style), so let unmatched options climb back up.
  std::function<void(CLI::App*)> allow_fallthrough = [&](CLI::App* cmd) {
    for (CLI::App* sub : cmd->get_subcommands([](CLI::App*) { return true; })) {
      sub->fallthrough();
      allow_fallthrough(sub);
    }
  };
  allow_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!global.config_path.empty()) global.config = parse_toml_file(global.config_path);
    set_default_threads(global.threads);

    if (app.got_subcommand(validate_cmd)) return run_validate(global, validate_args);
    if (app.got_subcommand(render_cmd)) return run_render(global, render_args);
    if (app.got_subcommand(curate_cmd)) return run_curate(global, curate_args);
    if (app.got_subcommand(augment_cmd)) {
      if (augment_cmd->got_subcommand(params_cmd)) return run_augment_params(global, params_args);
      return run_augment_structure(global, structure_args);
    }
    if (app.got_subcommand(optimize_cmd)) return run_optimize(global, optimize_args);
    if (app.got_subcommand(evaluate_cmd)) return run_evaluate(global, evaluate_args);
    if (app.got_subcommand(harness_cmd)) return run_harness(global, harness_args);
    std::cerr << "matforge: no subcommand\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "matforge: " << e.what() << "\n";
    return 2;
  } catch (const TomlError& e) {
    std::cerr << "matforge: config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "matforge: " << e.what() << "\n";
    return 1;
  }
}
