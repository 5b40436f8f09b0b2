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
// Prompt-based in-domain text generation: builds tuning samples of k
// concatenated sentences, builds (k-1)-sentence generation prompts, drives a
// pluggable backend, and assembles the accepted output corpus.
//
// Prompt i is a pure function of (seed, i), so disjoint index ranges can be
// generated by parallel workers and merged in index order without changing
// the result.

#ifndef GLOSSGEN_PGEN_HPP_
#define GLOSSGEN_PGEN_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "glossgen/bignum.hpp"
#include "glossgen/corpus.hpp"
#include "glossgen/errors.hpp"
#include "glossgen/ngram_lm.hpp"
#include "glossgen/text.hpp"

namespace glossgen {

struct PromptConfig {
  int k = 20;                      // sentences per tuning sample
  std::size_t target_size = 1;     // M, accepted sentences to produce
  std::size_t max_new_tokens = 48;
  double temperature = 1.0;
  std::size_t min_len = 3;
  std::size_t max_len = 60;
  bool dedup_within = true;
  bool dedup_against_authentic = true;
  std::uint64_t seed = 1;
  std::size_t attempt_budget = 0;  // prompts; 0 = 20 * target_size

  std::size_t effective_budget() const {
    return attempt_budget == 0 ? 20 * target_size : attempt_budget;
  }
  void validate() const;
};

// A backend maps (prompt, prompt index) to a continuation ending at or
// before [EOS]. It must be a pure function of its arguments (given its own
// configured seed) and must never return [BOS]. The index exists so repeated
// prompts (k = 1 always builds the empty prompt) still yield fresh draws;
// subprocess backends only receive the prompt line and may ignore it.
using GenerationBackend = std::function<Sentence(const Sentence&, std::uint64_t)>;

struct GenerationStats {
  std::size_t prompts_used = 0;
  std::size_t candidates = 0;          // complete [SEP]-delimited segments
  std::size_t accepted = 0;
  std::size_t rejected_length = 0;
  std::size_t rejected_reserved = 0;
  std::size_t rejected_dup_within = 0;
  std::size_t rejected_dup_authentic = 0;
  std::size_t discarded_tails = 0;     // segments cut off by the token cap
};

struct GenerationResult {
  MonoCorpus corpus;
  GenerationStats stats;
};

// Raised when the attempt budget runs out before target_size sentences are
// accepted; carries whatever was produced.
class GenerationBudgetError : public DataError {
 public:
  GenerationBudgetError(const std::string& msg, GenerationResult partial)
      : DataError(msg), partial_(std::move(partial)) {}
  const GenerationResult& partial() const { return partial_; }

 private:
  GenerationResult partial_;
};

// Tuning sample: [y_1 [SEP] y_2 [SEP] ... y_k [EOS]], the k sentences drawn
// uniformly without replacement per sample, independently across samples.
std::vector<Sentence> build_tuning_samples(const MonoCorpus& corpus, int k,
                                           std::size_t count,
                                           std::uint64_t seed);

// Generation prompt: [y_1 [SEP] ... y_{k-1} [SEP]]; k = 1 yields the empty
// prompt. Fully determined by (seed, index).
Sentence build_generation_prompt(const MonoCorpus& corpus, int k,
                                 std::uint64_t seed, std::uint64_t index);

// Number of ordered selections of k-1 sentences out of N:
// N * (N-1) * ... * (N-k+2), computed as an iterated product.
BigUint permutation_count(std::uint64_t n, std::uint64_t k);

// Runs the generation loop over prompt indices 0,1,2,... until target_size
// sentences are accepted or the attempt budget is exhausted. Continuations
// are split on [SEP] into candidate sentences; a trailing segment that was
// cut off by the token cap (no [SEP]/[EOS] terminator) is discarded.
GenerationResult generate_corpus(const GenerationBackend& backend,
                                 const MonoCorpus& source,
                                 const MonoCorpus& authentic,
                                 const PromptConfig& cfg, int workers = 1);

// Builtin backend: samples a continuation from an n-gram model. The RNG for
// each call is derived from (seed, prompt index), never from call order. The
// model is captured by reference and must outlive the backend.
GenerationBackend make_ngram_backend(const NGramModel& model,
                                     std::size_t max_new_tokens,
                                     double temperature, std::uint64_t seed);

std::string generation_stats_json(const GenerationStats& stats);

}  // namespace glossgen

#endif  // GLOSSGEN_PGEN_HPP_
