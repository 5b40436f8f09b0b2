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
// Translation quality metrics: corpus BLEU-1..4, Self-BLEU, ROUGE-L,
// METEOR-lite (exact matching, parameters 10 / 0.5 / 3), plus per-bucket
// analyses by training-set word frequency and by reference length.
// All scores are on a 0..100 scale.

#ifndef GLOSSGEN_METRICS_HPP_
#define GLOSSGEN_METRICS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glossgen/corpus.hpp"

namespace glossgen {

struct BleuResult {
  std::array<double, 4> bleu{};        // BLEU-1..BLEU-4
  std::array<double, 4> precisions{};  // clipped p_n as fractions
  double brevity_penalty = 1.0;
  std::int64_t hyp_len = 0;
  std::int64_t ref_len = 0;
};

struct BucketSpec {
  // Word frequency: Low [0, cuts[0]), Medium [cuts[0], cuts[1]), High
  // [cuts[1], inf). A test word missing from the training stats counts as
  // frequency 0.
  std::array<std::int64_t, 2> freq_cuts{100, 2000};
  // Reference length: Short (0, cuts[0]], Medium (cuts[0], cuts[1]], Long
  // (cuts[1], inf).
  std::array<std::int64_t, 2> len_cuts{10, 20};

  void validate() const;
};

struct FreqBucketF1 {
  std::optional<double> low;
  std::optional<double> medium;
  std::optional<double> high;
};

struct LengthBucketBleu {
  std::optional<double> short_refs;
  std::optional<double> medium_refs;
  std::optional<double> long_refs;
};

struct EvalReport {
  std::array<double, 4> bleu{};
  double rouge_l = 0.0;
  double meteor = 0.0;
  double brevity_penalty = 1.0;
  std::size_t sentence_count = 0;
  std::optional<FreqBucketF1> freq_f1;
  std::optional<LengthBucketBleu> length_bleu;
};

// Corpus BLEU with clipped n-gram precisions pooled over the corpus and
// BP = min(1, exp(1 - ref_len/hyp_len)). Any p_n = 0 zeroes BLEU-k for
// k >= n. Empty hypothesis sentences contribute zero length and no n-grams.
BleuResult corpus_bleu(const std::vector<Sentence>& hyps,
                       const std::vector<Sentence>& refs, int max_n = 4);

// Mean sentence-level BLEU-max_n of each of the first sample_cap sentences
// against all the others, with add-one smoothing on the n >= 2 precisions.
// 100 means every sentence duplicates the rest of the corpus.
double self_bleu(const MonoCorpus& corpus, int max_n = 4,
                 std::size_t sample_cap = SIZE_MAX);

// Mean per-sentence LCS F1 (beta = 1).
double rouge_l(const std::vector<Sentence>& hyps,
               const std::vector<Sentence>& refs);

// Exact-unigram METEOR: greedy left-to-right one-to-one alignment,
// F_mean = 10PR/(R+9P), penalty = 0.5 * (chunks/matches)^3.
double meteor_lite(const std::vector<Sentence>& hyps,
                   const std::vector<Sentence>& refs);

// Micro F1 of target-word predictions pooled per training-frequency bucket.
FreqBucketF1 f1_by_frequency(const std::vector<Sentence>& hyps,
                             const std::vector<Sentence>& refs,
                             const VocabStats& train_stats,
                             const BucketSpec& spec = {});

// Corpus BLEU-4 computed independently inside each reference-length bucket.
LengthBucketBleu bleu_by_length(const std::vector<Sentence>& hyps,
                                const std::vector<Sentence>& refs,
                                const BucketSpec& spec = {});

EvalReport evaluate(const std::vector<Sentence>& hyps,
                    const std::vector<Sentence>& refs,
                    const VocabStats* train_stats = nullptr,
                    const BucketSpec& spec = {});

std::string eval_report_json(const EvalReport& report);

}  // namespace glossgen

#endif  // GLOSSGEN_METRICS_HPP_
