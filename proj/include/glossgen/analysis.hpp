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
// Intrinsic domain analyses: word-frequency distributions, KL/JS divergence
// (natural log), and a multinomial naive-Bayes domain classifier.

#ifndef GLOSSGEN_ANALYSIS_HPP_
#define GLOSSGEN_ANALYSIS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "glossgen/corpus.hpp"

namespace glossgen {

// Normalized word-frequency distribution; probabilities sum to 1.
struct Distribution {
  std::map<std::string, double> probs;

  double prob(const std::string& word) const {
    auto it = probs.find(word);
    return it == probs.end() ? 0.0 : it->second;
  }
};

Distribution to_distribution(
    const VocabStats& stats,
    const std::optional<std::set<std::string>>& restrict_to = std::nullopt);

// Sum over P(w) > 0 of P(w) ln(P(w)/Q(w)); +infinity when Q misses support.
double kl_divergence(const Distribution& p, const Distribution& q);

// 0.5 * (KL(P||M) + KL(Q||M)) with M = (P+Q)/2; finite, symmetric, <= ln 2.
double js_divergence(const Distribution& p, const Distribution& q);

struct DistributionReport {
  // Reference words by descending reference frequency, up to top_n.
  std::vector<std::string> ranks;
  // Per corpus: normalized frequency in that corpus at each ranked word.
  std::map<std::string, std::vector<double>> curves;
  // Per corpus: JS divergence to the reference, computed on equal-size
  // samples drawn with the fixed seed.
  std::map<std::string, double> js;
};

DistributionReport distribution_report(const std::vector<MonoCorpus>& corpora,
                                       const MonoCorpus& reference,
                                       std::size_t top_n, std::uint64_t seed);

std::string distribution_report_json(const DistributionReport& report);

// Two-class multinomial naive Bayes with add-alpha smoothing over the union
// vocabulary. Training equalizes the class sizes by truncating the larger
// corpus. Classification ties resolve to the general class.
class DomainClassifier {
 public:
  static DomainClassifier train(const MonoCorpus& in_corpus,
                                const MonoCorpus& gen_corpus, double alpha = 1.0);

  bool is_in_domain(const Sentence& sentence) const;
  // P(in_domain | sentence).
  double posterior_in(const Sentence& sentence) const;

 private:
  DomainClassifier() = default;
  double log_odds(const Sentence& sentence) const;

  double alpha_ = 1.0;
  double log_prior_in_ = 0.0;
  double log_prior_gen_ = 0.0;
  std::map<std::string, std::int64_t> counts_in_;
  std::map<std::string, std::int64_t> counts_gen_;
  std::int64_t total_in_ = 0;
  std::int64_t total_gen_ = 0;
  std::size_t vocab_size_ = 0;
};

struct ClassifiedFractions {
  double in_domain = 0.0;
  double general = 0.0;
};

ClassifiedFractions classify_corpus(const DomainClassifier& clf,
                                    const MonoCorpus& corpus);

std::string classification_json(
    const std::map<std::string, ClassifiedFractions>& results);

}  // namespace glossgen

#endif  // GLOSSGEN_ANALYSIS_HPP_
