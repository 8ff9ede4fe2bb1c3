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

#include "matforge/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "matforge/dsl.hpp"
#include "matforge/image_io.hpp"
#include "matforge/parallel.hpp"

namespace matforge {

ProtocolResult run_protocol(const TextureImage& target, const CandidateSource& candidates,
                            const NodeTypeRegistry& registry, const ProtocolConfig& config,
                            const std::string& image_id) {
  if (config.n_max < 1 || config.k_valid < 1 || config.k_valid > config.n_max) {
    throw std::invalid_argument("protocol: need 1 <= k_valid <= n_max");
  }
  if (target.width != target.height) {
    throw std::invalid_argument("protocol: target image must be square");
  }

  RenderConfig scoring = config.render_config;
  scoring.resolution = target.width;

  ProtocolResult result;
  result.image_id = image_id;

  double best_style = 0.0;
  for (std::size_t index = 0;
       result.n_tried < config.n_max && result.k_valid_found < config.k_valid; ++index) {
    const std::string* text = candidates(index);
    if (text == nullptr) break;
    ++result.n_tried;
    try {
      MaterialGraph graph = parse(*text, registry);
      MaterialGraph processed;
      CurationReport report =
          validate_material(graph, registry, config.curation, config.render_config, &processed);
      if (!report.accepted) continue;

      TextureImage image = render(processed, registry, scoring);
      LossReport losses = loss_report(target, image, config.bank, config.swd_projections,
                                      config.swd_patch_size, config.swd_seed);
      ++result.k_valid_found;
      if (!result.best_index || losses.style < best_style) {
        best_style = losses.style;
        result.best_index = static_cast<int>(index);
        result.best_program = *text;
        result.best_losses = losses;
      }
    } catch (const std::exception&) {
      // tried and invalid; the denominator already counted it
    }
  }

  result.correctness =
      (result.n_tried > 0)
          ? static_cast<double>(result.k_valid_found) / static_cast<double>(result.n_tried)
          : 0.0;
  return result;
}

ProtocolResult run_protocol(const TextureImage& target,
                            const std::vector<std::string>& candidates,
                            const NodeTypeRegistry& registry, const ProtocolConfig& config,
                            const std::string& image_id) {
  CandidateSource source = [&candidates](std::size_t index) -> const std::string* {
    return index < candidates.size() ? &candidates[index] : nullptr;
  };
  return run_protocol(target, source, registry, config, image_id);
}

BatchSummary batch_report(const std::vector<ProtocolResult>& results) {
  BatchSummary summary;
  summary.images = static_cast<int>(results.size());
  for (const ProtocolResult& r : results) {
    summary.mean_correctness += r.correctness;
    if (r.best_index) {
      ++summary.images_with_result;
      summary.mean_style += r.best_losses.style;
      summary.mean_swd += r.best_losses.swd;
    }
  }
  if (summary.images > 0) summary.mean_correctness /= summary.images;
  if (summary.images_with_result > 0) {
    summary.mean_style /= summary.images_with_result;
    summary.mean_swd /= summary.images_with_result;
  }
  return summary;
}

namespace {

namespace fs = std::filesystem;

struct SuiteCase {
  std::string image_id;
  fs::path target;
  std::vector<fs::path> candidates;  // filename order
};

std::vector<SuiteCase> collect_cases(const fs::path& suite_dir) {
  if (!fs::is_directory(suite_dir)) {
    throw std::invalid_argument("suite directory not found: " + suite_dir.string());
  }
  std::vector<SuiteCase> cases;
  for (const fs::directory_entry& entry : fs::directory_iterator(suite_dir)) {
    if (!entry.is_directory()) continue;
    SuiteCase c;
    c.image_id = entry.path().filename().string();
    for (const char* name : {"target.png", "target.f32"}) {
      fs::path p = entry.path() / name;
      if (fs::is_regular_file(p)) {
        c.target = p;
        break;
      }
    }
    if (c.target.empty()) continue;
    for (const fs::directory_entry& f : fs::directory_iterator(entry.path())) {
      if (f.is_regular_file() && f.path().extension() == ".matl") {
        c.candidates.push_back(f.path());
      }
    }
    if (c.candidates.empty()) continue;
    std::sort(c.candidates.begin(), c.candidates.end());
    cases.push_back(std::move(c));
  }
  std::sort(cases.begin(), cases.end(),
            [](const SuiteCase& a, const SuiteCase& b) { return a.image_id < b.image_id; });
  return cases;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::vector<ProtocolResult> run_suite(const std::string& suite_dir,
                                      const NodeTypeRegistry& registry,
                                      const ProtocolConfig& config, std::ostream* log,
                                      int threads) {
  const std::vector<SuiteCase> cases = collect_cases(suite_dir);
  std::vector<std::optional<ProtocolResult>> slots(cases.size());
  std::mutex log_mutex;

  parallel_for(
      cases.size(),
      [&](std::size_t i) {
        const SuiteCase& c = cases[i];
        try {
          TextureImage target = read_image(c.target.string());
          // Cache per index so repeated pointer lookups stay valid and each
          // file is read at most once.
          std::vector<std::optional<std::string>> loaded(c.candidates.size());
          CandidateSource source = [&](std::size_t index) -> const std::string* {
            if (index >= c.candidates.size()) return nullptr;
            if (!loaded[index]) loaded[index] = read_text_file(c.candidates[index]);
            return &*loaded[index];
          };
          slots[i] = run_protocol(target, source, registry, config, c.image_id);
        } catch (const std::exception& e) {
          if (log != nullptr) {
            std::lock_guard<std::mutex> lock(log_mutex);
            *log << "harness: skipping " << c.image_id << ": " << e.what() << "\n";
          }
        }
      },
      threads);

  std::vector<ProtocolResult> results;
  results.reserve(cases.size());
  for (std::optional<ProtocolResult>& slot : slots) {
    if (slot) results.push_back(std::move(*slot));
  }
  return results;
}

}  // namespace matforge
