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

#include "glossgen/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "glossgen/errors.hpp"

#include "json.hpp"

namespace glossgen {

namespace fs = std::filesystem;

namespace {

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_dir) / p).lexically_normal().string();
}

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it != j.end()) out = it->get<T>();
}

}  // namespace

PipelineConfig PipelineConfig::from_json_text(const std::string& text,
                                              const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad config JSON: ") + e.what());
  }
  // A manifest is also a valid config: its embedded semantic block fully
  // determines reproduction.
  if (j.contains("config") && j.contains("artifacts")) {
    j = j["config"];
  }

  PipelineConfig cfg;
  try {
    read_if(j, "authentic_parallel", cfg.authentic_parallel);
    read_if(j, "general_pool", cfg.general_pool);
    read_if(j, "work_dir", cfg.work_dir);
    read_if(j, "seed", cfg.seed);
    read_if(j, "tuning_count", cfg.tuning_count);
    read_if(j, "selection_n", cfg.selection_n);
    read_if(j, "bt_iterations", cfg.bt_iterations);
    read_if(j, "drop_threshold", cfg.drop_threshold);
    read_if(j, "report_top_n", cfg.report_top_n);
    read_if(j, "self_bleu_cap", cfg.self_bleu_cap);
    read_if(j, "backend", cfg.backend_spec);
    read_if(j, "workers", cfg.workers);
    if (auto it = j.find("prompt"); it != j.end()) {
      const nlohmann::json& p = *it;
      read_if(p, "k", cfg.prompt.k);
      read_if(p, "target_size", cfg.prompt.target_size);
      read_if(p, "max_new_tokens", cfg.prompt.max_new_tokens);
      read_if(p, "temperature", cfg.prompt.temperature);
      read_if(p, "min_len", cfg.prompt.min_len);
      read_if(p, "max_len", cfg.prompt.max_len);
      read_if(p, "dedup_within", cfg.prompt.dedup_within);
      read_if(p, "dedup_against_authentic", cfg.prompt.dedup_against_authentic);
      read_if(p, "attempt_budget", cfg.prompt.attempt_budget);
    }
    if (auto it = j.find("lm"); it != j.end()) {
      const nlohmann::json& l = *it;
      read_if(l, "order", cfg.lm.order);
      read_if(l, "lambdas", cfg.lm.lambdas);
      read_if(l, "unk_threshold", cfg.lm.unk_threshold);
      read_if(l, "alpha", cfg.lm.alpha);
    }
    if (auto it = j.find("synthesis"); it != j.end()) {
      const nlohmann::json& s = *it;
      read_if(s, "ratio", cfg.synthesis.ratio);
      read_if(s, "shuffle_seed", cfg.synthesis.shuffle_seed);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad config value: ") + e.what());
  }

  cfg.authentic_parallel = resolve(cfg.authentic_parallel, base_dir);
  cfg.general_pool = resolve(cfg.general_pool, base_dir);
  return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), fs::path(path).parent_path().string());
}

void PipelineConfig::validate() const {
  if (authentic_parallel.empty()) {
    throw DataError("config: authentic_parallel path is required");
  }
  if (!fs::exists(authentic_parallel)) {
    throw DataError("config: missing input file: " + authentic_parallel);
  }
  if (!general_pool.empty() && !fs::exists(general_pool)) {
    throw DataError("config: missing input file: " + general_pool);
  }
  if (bt_iterations < 1) throw DataError("config: bt_iterations must be >= 1");
  if (drop_threshold < 0.0 || drop_threshold > 1.0) {
    throw DataError("config: drop_threshold must be in [0,1]");
  }
  if (synthesis.ratio < 1) throw DataError("config: ratio must be >= 1");
  if (backend_spec != "builtin" && backend_spec.rfind("external:", 0) != 0) {
    throw DataError("config: backend must be 'builtin' or 'external:CMD'");
  }
  if (workers < 1) throw DataError("config: workers must be >= 1");
}

std::string PipelineConfig::semantic_json() const {
  nlohmann::json j;
  j["authentic_parallel"] = authentic_parallel;
  j["general_pool"] = general_pool;
  j["seed"] = seed;
  j["tuning_count"] = tuning_count;
  j["selection_n"] = selection_n;
  j["bt_iterations"] = bt_iterations;
  j["drop_threshold"] = drop_threshold;
  j["report_top_n"] = report_top_n;
  j["self_bleu_cap"] = self_bleu_cap;
  j["backend"] = backend_spec;
  j["prompt"] = {{"k", prompt.k},
                 {"target_size", prompt.target_size},
                 {"max_new_tokens", prompt.max_new_tokens},
                 {"temperature", prompt.temperature},
                 {"min_len", prompt.min_len},
                 {"max_len", prompt.max_len},
                 {"dedup_within", prompt.dedup_within},
                 {"dedup_against_authentic", prompt.dedup_against_authentic},
                 {"attempt_budget", prompt.attempt_budget}};
  j["lm"] = {{"order", lm.order},
             {"lambdas", lm.lambdas},
             {"unk_threshold", lm.unk_threshold},
             {"alpha", lm.alpha}};
  j["synthesis"] = {{"ratio", synthesis.ratio},
                    {"shuffle_seed", synthesis.shuffle_seed}};
  return j.dump(2);
}

}  // namespace glossgen
