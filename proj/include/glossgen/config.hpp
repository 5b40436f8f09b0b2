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
//
// \file
// Pipeline configuration: one JSON file, flag overrides win. Relative input
// paths are resolved against the config file's directory.

#ifndef GLOSSGEN_CONFIG_HPP_
#define GLOSSGEN_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "glossgen/pgen.hpp"
#include "glossgen/translator.hpp"

namespace glossgen {

struct LmConfig {
  int order = 3;
  std::vector<double> lambdas{0.1, 0.3, 0.6};  // low order -> high order
  std::int64_t unk_threshold = 1;
  double alpha = 1.0;
};

struct PipelineConfig {
  std::string authentic_parallel;  // gloss<TAB>text
  std::string general_pool;        // general-domain sentences
  std::string work_dir = "out";

  std::uint64_t seed = 1;
  PromptConfig prompt;        // prompt.target_size 0 = ratio * |authentic|
  LmConfig lm;
  std::size_t tuning_count = 0;  // tuning samples; 0 = |authentic|
  std::size_t selection_n = 100;
  int bt_iterations = 20;
  double drop_threshold = 0.3;
  SynthesisPlan synthesis;    // synthesis.shuffle_seed 0 = derived from seed
  std::size_t report_top_n = 100;
  std::size_t self_bleu_cap = 500;
  std::string backend_spec = "builtin";  // "builtin" or "external:CMD"
  int workers = 1;                       // execution detail, not in manifests

  static PipelineConfig from_file(const std::string& path);
  static PipelineConfig from_json_text(const std::string& text,
                                       const std::string& base_dir);

  // Checks the input paths exist and numeric fields are in range.
  void validate() const;

  // The semantic parameters that determine pipeline outputs (everything
  // except work_dir and workers); embedded in manifests.
  std::string semantic_json() const;
};

}  // namespace glossgen

#endif  // GLOSSGEN_CONFIG_HPP_
