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

#include "glossgen/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <sstream>

#include "glossgen/analysis.hpp"
#include "glossgen/errors.hpp"
#include "glossgen/metrics.hpp"
#include "glossgen/ngram_lm.hpp"
#include "glossgen/rng.hpp"
#include "glossgen/subprocess.hpp"

#include "json.hpp"

namespace glossgen {

namespace fs = std::filesystem;

namespace {

// Seed stream tags per pipeline stage, so stages stay independent when the
// global seed changes.
enum SeedTag : std::uint64_t {
  kSeedTuning = 1,
  kSeedBackend = 2,
  kSeedPrompts = 3,
  kSeedShuffle = 4,
  kSeedReport = 5,
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << content;
}

std::string samples_to_lines(const std::vector<Sentence>& samples) {
  std::string out;
  for (const Sentence& s : samples) {
    out += join(s);
    out.push_back('\n');
  }
  return out;
}

nlohmann::json artifact_entry(const fs::path& work_dir, const std::string& rel) {
  const fs::path full = work_dir / rel;
  return {{"path", rel},
          {"fnv1a64", file_hash_hex(full.string())},
          {"bytes", fs::file_size(full)}};
}

}  // namespace

std::string file_hash_hex(const std::string& path) {
  const std::string bytes = read_file(path);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

PipelineOutcome run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const fs::path work_dir(cfg.work_dir);
  fs::create_directories(work_dir);

  const ParallelCorpus authentic = load_parallel(cfg.authentic_parallel);
  const MonoCorpus authentic_text = authentic.text_side("authentic");
  const std::size_t n_pairs = authentic.size();

  // Resolved knobs: 0 means derive from the corpus. k = 0 is read as
  // unconditional generation, which the empty prompt of k = 1 already is.
  PromptConfig prompt = cfg.prompt;
  if (prompt.k == 0) prompt.k = 1;
  if (prompt.target_size == 0) {
    prompt.target_size = cfg.synthesis.ratio * n_pairs;
  }
  prompt.seed = mix_seed(cfg.seed, kSeedPrompts);
  const std::size_t tuning_count =
      cfg.tuning_count == 0 ? n_pairs : cfg.tuning_count;
  SynthesisPlan plan = cfg.synthesis;
  if (plan.shuffle_seed == 0) plan.shuffle_seed = mix_seed(cfg.seed, kSeedShuffle);

  // 1. Prompt-tuning samples + generator LM.
  const std::vector<Sentence> tuning = build_tuning_samples(
      authentic_text, prompt.k, tuning_count, mix_seed(cfg.seed, kSeedTuning));
  write_file(work_dir / "tuning_samples.txt", samples_to_lines(tuning));
  const NGramModel lm = train_lm(tuning, cfg.lm.order, cfg.lm.lambdas,
                                 cfg.lm.unk_threshold, cfg.lm.alpha);
  lm.save((work_dir / "generator_lm.json").string());

  // 2. Generation.
  std::unique_ptr<LineProcess> child;
  GenerationBackend backend;
  if (cfg.backend_spec == "builtin") {
    backend = make_ngram_backend(lm, prompt.max_new_tokens, prompt.temperature,
                                 mix_seed(cfg.seed, kSeedBackend));
  } else {
    child = std::make_unique<LineProcess>(
        cfg.backend_spec.substr(std::string("external:").size()));
    backend = [&child](const Sentence& p, std::uint64_t) {
      return child->round_trip(p);
    };
  }
  GenerationResult generated =
      generate_corpus(backend, authentic_text, authentic_text, prompt, cfg.workers);
  save_mono(generated.corpus, (work_dir / "generated.txt").string());
  write_file(work_dir / "generation_stats.json",
             generation_stats_json(generated.stats));

  // 3. Back-translation model + synthetic pairs.
  const TranslationTable table = train_ibm1(authentic, cfg.bt_iterations);
  save_table(table, (work_dir / "bt_table.tsv").string());
  const ParallelCorpus synthetic = back_translate(
      make_table_backend(table, cfg.drop_threshold), generated.corpus);
  save_parallel(synthetic, (work_dir / "synthetic.tsv").string());

  // 4. Mixing.
  const SynthesisResult mixed = synthesize(authentic, synthetic, plan);
  save_parallel(mixed.train, (work_dir / "train.tsv").string());
  save_parallel(mixed.finetune, (work_dir / "finetune.tsv").string());

  // 5. Intrinsic metrics of the generated corpus.
  const DistributionReport report =
      distribution_report({generated.corpus}, authentic_text, cfg.report_top_n,
                          mix_seed(cfg.seed, kSeedReport));
  const double js = report.js.at(generated.corpus.name);
  const double diversity = self_bleu(generated.corpus, 4, cfg.self_bleu_cap);

  PipelineOutcome outcome;
  outcome.authentic_pairs = n_pairs;
  outcome.generated_sentences = generated.corpus.size();
  outcome.train_pairs = mixed.train.size();
  outcome.finetune_pairs = mixed.finetune.size();
  outcome.js_to_authentic = js;
  outcome.self_bleu_score = diversity;

  nlohmann::json manifest;
  manifest["config"] = nlohmann::json::parse(cfg.semantic_json());
  manifest["config"]["prompt"]["target_size"] = prompt.target_size;
  manifest["config"]["tuning_count"] = tuning_count;
  manifest["config"]["synthesis"]["shuffle_seed"] = plan.shuffle_seed;
  manifest["inputs"] = {
      {"authentic_parallel",
       {{"path", cfg.authentic_parallel},
        {"fnv1a64", file_hash_hex(cfg.authentic_parallel)},
        {"pairs", n_pairs}}}};
  if (!cfg.general_pool.empty()) {
    manifest["inputs"]["general_pool"] = {
        {"path", cfg.general_pool},
        {"fnv1a64", file_hash_hex(cfg.general_pool)}};
  }
  manifest["artifacts"] = {
      {"tuning_samples", artifact_entry(work_dir, "tuning_samples.txt")},
      {"generator_lm", artifact_entry(work_dir, "generator_lm.json")},
      {"generated", artifact_entry(work_dir, "generated.txt")},
      {"generation_stats", artifact_entry(work_dir, "generation_stats.json")},
      {"bt_table", artifact_entry(work_dir, "bt_table.tsv")},
      {"synthetic", artifact_entry(work_dir, "synthetic.tsv")},
      {"train", artifact_entry(work_dir, "train.tsv")},
      {"finetune", artifact_entry(work_dir, "finetune.tsv")}};
  manifest["sizes"] = {{"authentic", n_pairs},
                       {"generated", outcome.generated_sentences},
                       {"train", outcome.train_pairs},
                       {"finetune", outcome.finetune_pairs}};
  manifest["metrics"] = {{"js_to_authentic", js}, {"self_bleu", diversity}};

  const fs::path manifest_path = work_dir / "manifest.json";
  write_file(manifest_path, manifest.dump(2) + "\n");
  outcome.manifest_path = manifest_path.string();
  return outcome;
}

SweepAxis sweep_axis_from_name(const std::string& name) {
  if (name == "k") return SweepAxis::kPromptLength;
  if (name == "ratio") return SweepAxis::kRatio;
  throw UsageError("unknown sweep axis: " + name + " (expected k or ratio)");
}

std::vector<SweepRow> run_sweep(const PipelineConfig& cfg, SweepAxis axis,
                                const std::vector<std::uint64_t>& values,
                                bool parallel) {
  if (values.empty()) throw UsageError("sweep needs at least one value");
  const std::string prefix = axis == SweepAxis::kPromptLength ? "k" : "ratio";

  auto one_value = [&](std::uint64_t value) {
    PipelineConfig run_cfg = cfg;
    run_cfg.work_dir =
        (fs::path(cfg.work_dir) / (prefix + "_" + std::to_string(value))).string();
    if (axis == SweepAxis::kPromptLength) {
      run_cfg.prompt.k = static_cast<int>(value);
    } else {
      run_cfg.synthesis.ratio = static_cast<std::size_t>(value);
    }
    SweepRow row;
    row.value = value;
    try {
      row.outcome = run_pipeline(run_cfg);
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  };

  std::vector<SweepRow> rows;
  if (parallel) {
    // Work dirs are disjoint, so runs share no mutable state.
    std::vector<std::future<SweepRow>> futs;
    futs.reserve(values.size());
    for (std::uint64_t value : values) {
      futs.push_back(std::async(std::launch::async, one_value, value));
    }
    for (auto& f : futs) rows.push_back(f.get());
  } else {
    for (std::uint64_t value : values) rows.push_back(one_value(value));
  }
  return rows;
}

std::string sweep_summary_tsv(const std::vector<SweepRow>& rows) {
  std::string out = "value\tjs_to_authentic\tself_bleu\tgenerated\ttrain\terror\n";
  char buf[64];
  for (const SweepRow& row : rows) {
    out += std::to_string(row.value);
    if (row.ok) {
      std::snprintf(buf, sizeof(buf), "\t%.6f", row.outcome.js_to_authentic);
      out += buf;
      std::snprintf(buf, sizeof(buf), "\t%.4f", row.outcome.self_bleu_score);
      out += buf;
      out += "\t" + std::to_string(row.outcome.generated_sentences);
      out += "\t" + std::to_string(row.outcome.train_pairs);
      out += "\t-";
    } else {
      out += "\t-\t-\t-\t-\t" + row.error;
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace glossgen
