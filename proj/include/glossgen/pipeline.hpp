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
// End-to-end pipeline: tuning samples -> generator LM -> generated corpus ->
// lexical back-translation -> synthetic mix, plus a manifest that records
// input hashes, the semantic config, and every artifact. Re-running with the
// same config produces byte-identical artifacts, independent of the worker
// count; manifests store work-dir-relative artifact paths so two runs in
// different directories also match byte for byte.

#ifndef GLOSSGEN_PIPELINE_HPP_
#define GLOSSGEN_PIPELINE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "glossgen/config.hpp"

namespace glossgen {

struct PipelineOutcome {
  std::string manifest_path;
  std::size_t authentic_pairs = 0;
  std::size_t generated_sentences = 0;
  std::size_t train_pairs = 0;
  std::size_t finetune_pairs = 0;
  double js_to_authentic = 0.0;
  double self_bleu_score = 0.0;
};

PipelineOutcome run_pipeline(const PipelineConfig& cfg);

struct SweepRow {
  std::uint64_t value = 0;
  bool ok = false;
  std::string error;
  PipelineOutcome outcome;
};

enum class SweepAxis { kPromptLength, kRatio };

SweepAxis sweep_axis_from_name(const std::string& name);

// Runs the pipeline once per value in an isolated subdirectory of
// cfg.work_dir; a failing value is recorded and the sweep continues.
// parallel runs the values concurrently (the work dirs are disjoint).
std::vector<SweepRow> run_sweep(const PipelineConfig& cfg, SweepAxis axis,
                                const std::vector<std::uint64_t>& values,
                                bool parallel = false);

// TSV: value, js_to_authentic, self_bleu, generated size, train size, error.
std::string sweep_summary_tsv(const std::vector<SweepRow>& rows);

// FNV-1a over the file bytes, as a fixed-width hex string.
std::string file_hash_hex(const std::string& path);

}  // namespace glossgen

#endif  // GLOSSGEN_PIPELINE_HPP_
