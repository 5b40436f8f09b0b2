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
// Count-based n-gram language model with fixed-weight linear interpolation
// and an add-alpha-smoothed unigram floor. Trained models are immutable and
// safe to share across threads; sampling takes its seed as an argument.
//
// Conditional probabilities are a mixture over the orders:
//
//   P(w | ctx) = sum_i lambda[i] * ML_i(w | suffix_i(ctx))
//
// where ML_i is the maximum-likelihood estimate at order i+1 and the unigram
// level (i = 0) is add-alpha smoothed over the vocabulary. The weight of any
// order whose context was never observed folds into the unigram level, so
// conditionals stay normalized for every context.

#ifndef GLOSSGEN_NGRAM_LM_HPP_
#define GLOSSGEN_NGRAM_LM_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "glossgen/text.hpp"

namespace glossgen {

class NGramModel {
 public:
  struct ContextCounts {
    std::map<Token, std::int64_t> next;
    std::int64_t total = 0;
  };

  // Trains from whole sentences. Each sentence is padded on the left with
  // order-1 [BOS] tokens. Non-reserved tokens whose total count is at most
  // unk_threshold are collapsed to [UNK]. alpha is the unigram add-alpha
  // constant; alpha = 0 disables smoothing (exact-probability fixtures).
  static NGramModel train(const std::vector<Sentence>& samples, int order,
                          std::vector<double> lambdas,
                          std::int64_t unk_threshold, double alpha = 1.0);

  int order() const { return order_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  double alpha() const { return alpha_; }
  const std::vector<Token>& vocab() const { return vocab_; }
  bool in_vocab(const Token& tok) const { return vocab_index_.count(tok) > 0; }

  // Maps out-of-vocabulary tokens to [UNK].
  const Token& map_token(const Token& tok) const;

  // Interpolated P(token | context); context is used as-is (callers pad with
  // [BOS] as needed) and only its last order-1 tokens matter.
  double cond_prob(const Token& token, std::span<const Token> context) const;

  // Full conditional over vocab() order; sums to 1 within 1e-9.
  std::vector<double> full_conditional(std::span<const Token> context) const;

  // Per-level raw counts, for serialization and independent re-derivation.
  const std::vector<std::unordered_map<std::string, ContextCounts>>& levels()
      const {
    return levels_;
  }

  std::string to_json() const;
  static NGramModel from_json(const std::string& json_text);
  void save(const std::string& path) const;
  static NGramModel load(const std::string& path);

 private:
  NGramModel() = default;
  void rebuild_index();

  int order_ = 1;
  std::vector<double> lambdas_;
  double alpha_ = 1.0;
  // levels_[i] holds (i+1)-gram counts keyed by the i-token context joined
  // with '\x01' (unigram context key is the empty string).
  std::vector<std::unordered_map<std::string, ContextCounts>> levels_;
  std::vector<Token> vocab_;  // sorted
  std::unordered_map<std::string, std::size_t> vocab_index_;
  std::int64_t unigram_total_ = 0;
};

// Operation-style wrappers.
NGramModel train_lm(const std::vector<Sentence>& samples, int order,
                    const std::vector<double>& lambdas,
                    std::int64_t unk_threshold, double alpha = 1.0);

// Reads LM training samples: one whitespace-tokenized sample per line, blank
// lines skipped. Unlike corpus loading this accepts [SEP]/[EOS] tokens, so
// prompt-sample files round-trip.
std::vector<Sentence> load_lm_samples(const std::string& path);

// Mean negative log-probability in nats per token.
double cross_entropy(const NGramModel& model, const Sentence& sentence);

double perplexity(const NGramModel& model, const Sentence& sentence);

// Draws successive tokens from P(.|context)^(1/temperature), renormalized
// over the vocabulary minus [BOS]; stops after emitting [EOS] or after
// max_new tokens. temperature = 0 is the argmax limit with lexicographic
// tie-breaking. Deterministic given rng_seed.
Sentence sample_continuation(const NGramModel& model, const Sentence& prompt,
                             std::size_t max_new, double temperature,
                             std::uint64_t rng_seed);

}  // namespace glossgen

#endif  // GLOSSGEN_NGRAM_LM_HPP_
