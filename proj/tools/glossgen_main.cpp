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
// glossgen command line: corpus statistics, LM training, prompt building,
// generation, data selection, domain analysis, back-translation, synthesis,
// evaluation, and the end-to-end pipeline with sweeps.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 backend
// failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "glossgen/rng.hpp"

#include "glossgen/analysis.hpp"
#include "glossgen/config.hpp"
#include "glossgen/corpus.hpp"
#include "glossgen/errors.hpp"
#include "glossgen/metrics.hpp"
#include "glossgen/ngram_lm.hpp"
#include "glossgen/pgen.hpp"
#include "glossgen/pipeline.hpp"
#include "glossgen/selection.hpp"
#include "glossgen/subprocess.hpp"
#include "glossgen/translator.hpp"

namespace {

using namespace glossgen;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << content;
}

MonoCorpus load_mono_warn(const std::string& path, bool lowercase = false,
                          DomainLabel label = DomainLabel::kOther) {
  std::size_t skipped = 0;
  MonoCorpus c = load_mono(path, lowercase, label, &skipped);
  if (skipped > 0) {
    std::cerr << path << ": skipped " << skipped << " blank line(s)\n";
  }
  return c;
}

std::vector<double> parse_lambdas(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw UsageError("bad lambda value: " + part);
    }
  }
  if (out.empty()) throw UsageError("empty lambda list");
  return out;
}

std::vector<std::uint64_t> parse_values(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stoull(part));
    } catch (const std::exception&) {
      throw UsageError("bad sweep value: " + part);
    }
  }
  return out;
}

// Evaluation inputs keep line alignment: an empty line is an empty sentence.
std::vector<Sentence> load_eval_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<Sentence> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(split_ws(line));
  if (out.empty()) throw DataError(path + ": empty file");
  return out;
}

struct LmFlags {
  int order = 3;
  std::string lambdas = "0.1,0.3,0.6";
  std::int64_t unk_threshold = 1;
  double alpha = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--order", order, "n-gram order");
    cmd->add_option("--lambdas", lambdas,
                    "interpolation weights, low to high order, comma separated");
    cmd->add_option("--unk-threshold", unk_threshold,
                    "collapse tokens with count <= threshold to [UNK]");
    cmd->add_option("--alpha", alpha, "unigram add-alpha constant");
  }
  NGramModel train_on(const std::vector<Sentence>& samples) const {
    return train_lm(samples, order, parse_lambdas(lambdas), unk_threshold, alpha);
  }
};

GenerationBackend make_backend(const std::string& spec, const NGramModel* model,
                               const PromptConfig& prompt, std::uint64_t seed,
                               std::unique_ptr<LineProcess>& child) {
  if (spec == "builtin") {
    if (!model) throw UsageError("builtin backend requires --model");
    return make_ngram_backend(*model, prompt.max_new_tokens, prompt.temperature,
                              seed);
  }
  const std::string prefix = "external:";
  if (spec.rfind(prefix, 0) == 0) {
    child = std::make_unique<LineProcess>(spec.substr(prefix.size()));
    return [&child](const Sentence& p, std::uint64_t) {
      return child->round_trip(p);
    };
  }
  throw UsageError("backend must be 'builtin' or 'external:CMD'");
}

int run(int argc, char** argv) {
  CLI::App app{"glossgen: in-domain text generation and back-translation "
               "tooling for gloss-to-text corpora"};
  app.require_subcommand(1);

  // ---- stats ----
  auto* stats_cmd = app.add_subcommand("stats", "word-frequency statistics of a corpus");
  std::string stats_in, stats_out;
  bool stats_lower = false;
  stats_cmd->add_option("--in", stats_in, "monolingual corpus")->required();
  stats_cmd->add_flag("--lowercase", stats_lower, "ASCII-lowercase while loading");
  stats_cmd->add_option("--out", stats_out, "output JSON ('-' = stdout)");
  stats_cmd->callback([&] {
    const MonoCorpus corpus = load_mono_warn(stats_in, stats_lower);
    write_output(stats_out, vocab_stats_json(vocab_stats(corpus)));
  });

  // ---- train-lm ----
  auto* train_lm_cmd =
      app.add_subcommand("train-lm", "train an interpolated n-gram LM");
  std::string tl_in, tl_out;
  LmFlags tl_flags;
  train_lm_cmd->add_option("--in", tl_in, "training samples, one per line")->required();
  train_lm_cmd->add_option("--out", tl_out, "model JSON path")->required();
  tl_flags.attach(train_lm_cmd);
  train_lm_cmd->callback([&] {
    const NGramModel model = tl_flags.train_on(load_lm_samples(tl_in));
    model.save(tl_out);
  });

  // ---- build-prompts ----
  auto* bp_cmd = app.add_subcommand(
      "build-prompts", "emit prompt-tuning samples or generation prompts");
  std::string bp_in, bp_out, bp_mode = "tuning";
  int bp_k = 20;
  std::size_t bp_count = 1;
  std::uint64_t bp_seed = 1;
  bp_cmd->add_option("--in", bp_in, "source corpus")->required();
  bp_cmd->add_option("--k", bp_k, "sentences per sample");
  bp_cmd->add_option("--count", bp_count, "number of samples/prompts")->required();
  bp_cmd->add_option("--seed", bp_seed, "random seed");
  bp_cmd->add_option("--mode", bp_mode, "tuning | generation")
      ->check(CLI::IsMember({"tuning", "generation"}));
  bp_cmd->add_option("--out", bp_out, "output path ('-' = stdout)");
  bp_cmd->callback([&] {
    const MonoCorpus corpus = load_mono_warn(bp_in);
    std::string out;
    if (bp_mode == "tuning") {
      for (const Sentence& s : build_tuning_samples(corpus, bp_k, bp_count, bp_seed)) {
        out += join(s);
        out.push_back('\n');
      }
    } else {
      for (std::size_t i = 0; i < bp_count; ++i) {
        out += join(build_generation_prompt(corpus, bp_k, bp_seed, i));
        out.push_back('\n');
      }
    }
    write_output(bp_out, out);
  });

  // ---- generate ----
  auto* gen_cmd = app.add_subcommand("generate", "generate an in-domain corpus");
  std::string gen_source, gen_authentic, gen_model, gen_backend = "builtin";
  std::string gen_out, gen_stats_out;
  PromptConfig gen_prompt;
  int gen_workers = 1;
  gen_cmd->add_option("--source", gen_source, "corpus prompts are drawn from")->required();
  gen_cmd->add_option("--authentic", gen_authentic,
                      "corpus for the dedup-against-authentic filter (default: source)");
  gen_cmd->add_option("--model", gen_model, "generator LM (builtin backend)");
  gen_cmd->add_option("--backend", gen_backend, "builtin | external:CMD");
  gen_cmd->add_option("--k", gen_prompt.k, "prompt length");
  gen_cmd->add_option("--target-size", gen_prompt.target_size, "sentences to accept")
      ->required();
  gen_cmd->add_option("--max-new", gen_prompt.max_new_tokens, "token cap per prompt");
  gen_cmd->add_option("--temperature", gen_prompt.temperature, "sampling temperature");
  gen_cmd->add_option("--min-len", gen_prompt.min_len, "minimum sentence length");
  gen_cmd->add_option("--max-len", gen_prompt.max_len, "maximum sentence length");
  gen_cmd->add_option("--seed", gen_prompt.seed, "random seed");
  gen_cmd->add_option("--attempt-budget", gen_prompt.attempt_budget,
                      "prompt budget (0 = 20x target)");
  bool gen_no_dedup_within = false, gen_no_dedup_auth = false;
  gen_cmd->add_flag("--no-dedup-within", gen_no_dedup_within,
                    "keep duplicate generated sentences");
  gen_cmd->add_flag("--no-dedup-authentic", gen_no_dedup_auth,
                    "keep sentences that also appear in the authentic corpus");
  gen_cmd->add_option("--workers", gen_workers, "parallel prompt workers");
  gen_cmd->add_option("--out", gen_out, "output corpus")->required();
  gen_cmd->add_option("--stats-out", gen_stats_out, "acceptance statistics JSON");
  gen_cmd->callback([&] {
    if (gen_prompt.k == 0) gen_prompt.k = 1;  // k = 0: unconditional generation
    gen_prompt.dedup_within = !gen_no_dedup_within;
    gen_prompt.dedup_against_authentic = !gen_no_dedup_auth;
    const MonoCorpus source = load_mono_warn(gen_source);
    const MonoCorpus authentic =
        gen_authentic.empty() ? source : load_mono_warn(gen_authentic);
    std::unique_ptr<NGramModel> model;
    if (!gen_model.empty()) {
      model = std::make_unique<NGramModel>(NGramModel::load(gen_model));
    }
    std::unique_ptr<LineProcess> child;
    const GenerationBackend backend = make_backend(
        gen_backend, model.get(), gen_prompt, mix_seed(gen_prompt.seed, 2), child);
    GenerationResult result;
    try {
      result = generate_corpus(backend, source, authentic, gen_prompt, gen_workers);
    } catch (const GenerationBudgetError& e) {
      // Keep what was produced so a rerun can widen the budget.
      if (!e.partial().corpus.sentences.empty()) {
        save_mono(e.partial().corpus, gen_out);
      }
      if (!gen_stats_out.empty()) {
        write_output(gen_stats_out, generation_stats_json(e.partial().stats));
      }
      throw;
    }
    save_mono(result.corpus, gen_out);
    if (!gen_stats_out.empty()) {
      write_output(gen_stats_out, generation_stats_json(result.stats));
    }
    std::cerr << "accepted " << result.stats.accepted << " sentences from "
              << result.stats.prompts_used << " prompts\n";
  });

  // ---- select ----
  auto* sel_cmd = app.add_subcommand(
      "select", "cross-entropy-difference selection from a general pool");
  std::string sel_pool, sel_indomain, sel_out, sel_scored_out;
  std::size_t sel_n = 0;
  LmFlags sel_flags;
  sel_cmd->add_option("--pool", sel_pool, "candidate pool corpus")->required();
  sel_cmd->add_option("--in-domain", sel_indomain, "in-domain corpus")->required();
  sel_cmd->add_option("--n", sel_n, "sentences to select")->required();
  sel_flags.attach(sel_cmd);
  sel_cmd->add_option("--out", sel_out, "selected corpus")->required();
  sel_cmd->add_option("--scored-out", sel_scored_out, "scored TSV, ascending");
  sel_cmd->callback([&] {
    const MonoCorpus pool = load_mono_warn(sel_pool, false, DomainLabel::kGeneral);
    const MonoCorpus in_domain = load_mono_warn(sel_indomain, false, DomainLabel::kAuthentic);
    const NGramModel lm_in = sel_flags.train_on(in_domain.sentences);
    const NGramModel lm_gen = sel_flags.train_on(pool.sentences);
    const SelectionResult result = select_top(pool, lm_in, lm_gen, sel_n);
    save_mono(result.selected, sel_out);
    if (!sel_scored_out.empty()) write_output(sel_scored_out, scored_tsv(result));
  });

  // ---- analyze ----
  auto* an_cmd = app.add_subcommand(
      "analyze", "frequency curves, JS divergence, domain classification");
  std::string an_reference, an_general, an_out, an_classify_out;
  std::vector<std::string> an_corpora;
  std::size_t an_top_n = 100;
  std::uint64_t an_seed = 1;
  an_cmd->add_option("--reference", an_reference, "reference (authentic) corpus")->required();
  an_cmd->add_option("--corpus", an_corpora, "name=path, repeatable")->required();
  an_cmd->add_option("--general", an_general,
                     "general corpus; enables the domain classifier");
  an_cmd->add_option("--top-n", an_top_n, "ranks in the frequency curves");
  an_cmd->add_option("--seed", an_seed, "sampling seed for fair JS comparison");
  an_cmd->add_option("--out", an_out, "report JSON ('-' = stdout)");
  an_cmd->add_option("--classify-out", an_classify_out, "classification JSON");
  an_cmd->callback([&] {
    const MonoCorpus reference = load_mono_warn(an_reference, false, DomainLabel::kAuthentic);
    std::vector<MonoCorpus> corpora;
    for (const std::string& spec : an_corpora) {
      const std::size_t eq = spec.find('=');
      if (eq == std::string::npos) {
        throw UsageError("--corpus expects name=path, got: " + spec);
      }
      MonoCorpus c = load_mono_warn(spec.substr(eq + 1));
      c.name = spec.substr(0, eq);
      corpora.push_back(std::move(c));
    }
    const DistributionReport report =
        distribution_report(corpora, reference, an_top_n, an_seed);
    write_output(an_out, distribution_report_json(report));
    if (!an_general.empty()) {
      const MonoCorpus general = load_mono_warn(an_general, false, DomainLabel::kGeneral);
      const DomainClassifier clf = DomainClassifier::train(reference, general);
      std::map<std::string, ClassifiedFractions> results;
      results[reference.name] = classify_corpus(clf, reference);
      results["general"] = classify_corpus(clf, general);
      for (const MonoCorpus& c : corpora) results[c.name] = classify_corpus(clf, c);
      write_output(an_classify_out, classification_json(results));
    }
  });

  // ---- train-bt ----
  auto* bt_cmd = app.add_subcommand("train-bt", "train the lexical text-to-gloss table");
  std::string bt_parallel, bt_out;
  int bt_iterations = 20;
  bt_cmd->add_option("--parallel", bt_parallel, "gloss<TAB>text pairs")->required();
  bt_cmd->add_option("--iterations", bt_iterations, "EM iterations");
  bt_cmd->add_option("--out", bt_out, "table TSV")->required();
  bt_cmd->callback([&] {
    const ParallelCorpus parallel = load_parallel(bt_parallel);
    save_table(train_ibm1(parallel, bt_iterations), bt_out);
  });

  // ---- back-translate ----
  auto* trans_cmd =
      app.add_subcommand("back-translate", "translate text into pseudo glosses");
  std::string tr_mono, tr_table, tr_backend = "builtin", tr_out;
  double tr_drop = 0.3;
  trans_cmd->add_option("--mono", tr_mono, "text corpus to translate")->required();
  trans_cmd->add_option("--table", tr_table, "table TSV (builtin backend)");
  trans_cmd->add_option("--backend", tr_backend, "builtin | external:CMD");
  trans_cmd->add_option("--drop-threshold", tr_drop,
                        "drop tokens whose best probability is below this");
  trans_cmd->add_option("--out", tr_out, "parallel TSV output")->required();
  trans_cmd->callback([&] {
    const MonoCorpus mono = load_mono_warn(tr_mono);
    TranslationTable table;
    std::unique_ptr<LineProcess> child;
    TranslatorBackend backend;
    if (tr_backend == "builtin") {
      if (tr_table.empty()) throw UsageError("builtin backend requires --table");
      table = load_table(tr_table);
      backend = make_table_backend(table, tr_drop);
    } else if (tr_backend.rfind("external:", 0) == 0) {
      child = std::make_unique<LineProcess>(tr_backend.substr(9));
      backend = [&child](const Sentence& s) { return child->round_trip(s); };
    } else {
      throw UsageError("backend must be 'builtin' or 'external:CMD'");
    }
    save_parallel(back_translate(backend, mono), tr_out);
  });

  // ---- synthesize ----
  auto* syn_cmd = app.add_subcommand(
      "synthesize", "mix authentic and synthetic pairs into train/finetune sets");
  std::string syn_auth, syn_synth, syn_train_out, syn_ft_out;
  SynthesisPlan syn_plan;
  syn_cmd->add_option("--authentic", syn_auth, "authentic parallel TSV")->required();
  syn_cmd->add_option("--synthetic", syn_synth, "synthetic parallel TSV")->required();
  syn_cmd->add_option("--ratio", syn_plan.ratio, "synthetic-to-authentic multiple R")
      ->required();
  syn_cmd->add_option("--shuffle-seed", syn_plan.shuffle_seed, "shuffle seed");
  syn_cmd->add_option("--train-out", syn_train_out, "mixed training TSV")->required();
  syn_cmd->add_option("--finetune-out", syn_ft_out, "finetune TSV")->required();
  syn_cmd->callback([&] {
    const ParallelCorpus authentic = load_parallel(syn_auth);
    const ParallelCorpus synthetic = load_parallel(syn_synth);
    const SynthesisResult result = synthesize(authentic, synthetic, syn_plan);
    save_parallel(result.train, syn_train_out);
    save_parallel(result.finetune, syn_ft_out);
  });

  // ---- evaluate ----
  auto* ev_cmd = app.add_subcommand("evaluate", "BLEU/ROUGE/METEOR plus bucket analyses");
  std::string ev_hyp, ev_ref, ev_train_text, ev_out;
  ev_cmd->add_option("--hyp", ev_hyp, "hypothesis file, line-aligned with --ref")->required();
  ev_cmd->add_option("--ref", ev_ref, "reference file")->required();
  ev_cmd->add_option("--train-text", ev_train_text,
                     "training text; enables frequency-bucket F1");
  ev_cmd->add_option("--out", ev_out, "report JSON ('-' = stdout)");
  ev_cmd->callback([&] {
    const std::vector<Sentence> hyps = load_eval_lines(ev_hyp);
    const std::vector<Sentence> refs = load_eval_lines(ev_ref);
    std::unique_ptr<VocabStats> train_stats;
    if (!ev_train_text.empty()) {
      train_stats = std::make_unique<VocabStats>(
          vocab_stats(load_mono_warn(ev_train_text)));
    }
    const EvalReport report = evaluate(hyps, refs, train_stats.get());
    write_output(ev_out, eval_report_json(report));
  });

  // ---- pipeline ----
  auto* pipe_cmd = app.add_subcommand(
      "pipeline", "tuning -> generation -> back-translation -> synthesis");
  std::string pipe_config, pipe_out, pipe_backend;
  std::uint64_t pipe_seed = 0;
  int pipe_k = 0, pipe_workers = 0;
  std::uint64_t pipe_ratio = 0;
  std::size_t pipe_target = 0;
  pipe_cmd->add_option("--config", pipe_config, "pipeline config JSON")->required();
  auto* o_seed = pipe_cmd->add_option("--seed", pipe_seed, "override global seed");
  auto* o_k = pipe_cmd->add_option("--k", pipe_k, "override prompt length");
  auto* o_ratio = pipe_cmd->add_option("--ratio", pipe_ratio, "override synthesis ratio");
  auto* o_target = pipe_cmd->add_option("--target-size", pipe_target,
                                        "override generation target");
  auto* o_backend = pipe_cmd->add_option("--backend", pipe_backend,
                                         "override backend (builtin | external:CMD)");
  auto* o_out = pipe_cmd->add_option("--out", pipe_out, "override work dir");
  auto* o_workers = pipe_cmd->add_option("--workers", pipe_workers,
                                         "override worker count");
  pipe_cmd->callback([&] {
    PipelineConfig cfg = PipelineConfig::from_file(pipe_config);
    if (o_seed->count()) cfg.seed = pipe_seed;
    if (o_k->count()) cfg.prompt.k = pipe_k;
    if (o_ratio->count()) cfg.synthesis.ratio = pipe_ratio;
    if (o_target->count()) cfg.prompt.target_size = pipe_target;
    if (o_backend->count()) cfg.backend_spec = pipe_backend;
    if (o_out->count()) cfg.work_dir = pipe_out;
    if (o_workers->count()) cfg.workers = pipe_workers;
    const PipelineOutcome outcome = run_pipeline(cfg);
    std::cerr << "pipeline done: " << outcome.train_pairs << " train pairs, "
              << outcome.finetune_pairs << " finetune pairs, manifest at "
              << outcome.manifest_path << "\n";
  });

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand("sweep", "run the pipeline over k or ratio values");
  std::string sw_config, sw_axis, sw_values, sw_out;
  bool sw_parallel = false;
  sweep_cmd->add_option("--config", sw_config, "pipeline config JSON")->required();
  sweep_cmd->add_option("--axis", sw_axis, "k | ratio")
      ->required()
      ->check(CLI::IsMember({"k", "ratio"}));
  sweep_cmd->add_option("--values", sw_values, "comma-separated values")->required();
  sweep_cmd->add_flag("--parallel", sw_parallel, "run the values concurrently");
  auto* o_sw_out = sweep_cmd->add_option("--out", sw_out, "override sweep root dir");
  sweep_cmd->callback([&] {
    PipelineConfig cfg = PipelineConfig::from_file(sw_config);
    if (o_sw_out->count()) cfg.work_dir = sw_out;
    const std::vector<std::uint64_t> values = parse_values(sw_values);
    const std::vector<SweepRow> rows =
        run_sweep(cfg, sweep_axis_from_name(sw_axis), values, sw_parallel);
    const std::string summary = sweep_summary_tsv(rows);
    write_output((std::filesystem::path(cfg.work_dir) / "summary.tsv").string(),
                 summary);
    std::cerr << summary;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return 3;
  } catch (const GenerationBudgetError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
