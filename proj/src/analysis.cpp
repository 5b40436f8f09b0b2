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

#include "glossgen/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glossgen/errors.hpp"

#include "json.hpp"

namespace glossgen {

Distribution to_distribution(
    const VocabStats& stats,
    const std::optional<std::set<std::string>>& restrict_to) {
  if (stats.total_tokens < 1) throw DataError("empty vocabulary statistics");
  Distribution dist;
  std::int64_t total = 0;
  for (const auto& [word, count] : stats.counts) {
    if (restrict_to && !restrict_to->count(word)) continue;
    total += count;
  }
  if (total == 0) throw DataError("vocabulary restriction leaves no tokens");
  for (const auto& [word, count] : stats.counts) {
    if (restrict_to && !restrict_to->count(word)) continue;
    dist.probs[word] = static_cast<double>(count) / static_cast<double>(total);
  }
  return dist;
}

double kl_divergence(const Distribution& p, const Distribution& q) {
  double sum = 0.0;
  for (const auto& [word, pw] : p.probs) {
    if (pw <= 0.0) continue;  // 0 * ln 0 == 0
    const double qw = q.prob(word);
    if (qw <= 0.0) return std::numeric_limits<double>::infinity();
    sum += pw * std::log(pw / qw);
  }
  return sum;
}

double js_divergence(const Distribution& p, const Distribution& q) {
  // M is positive wherever P or Q is, so both KL terms are finite.
  Distribution m;
  for (const auto& [word, pw] : p.probs) m.probs[word] += 0.5 * pw;
  for (const auto& [word, qw] : q.probs) m.probs[word] += 0.5 * qw;
  return 0.5 * (kl_divergence(p, m) + kl_divergence(q, m));
}

DistributionReport distribution_report(const std::vector<MonoCorpus>& corpora,
                                       const MonoCorpus& reference,
                                       std::size_t top_n, std::uint64_t seed) {
  if (reference.sentences.empty()) throw DataError("empty reference corpus");
  const VocabStats ref_stats = vocab_stats(reference);

  DistributionReport report;
  const std::size_t n_ranks = std::min(top_n, ref_stats.rank_order.size());
  report.ranks.assign(ref_stats.rank_order.begin(),
                      ref_stats.rank_order.begin() +
                          static_cast<std::ptrdiff_t>(n_ranks));

  auto add_curve = [&](const std::string& name, const VocabStats& stats) {
    std::vector<double> curve;
    curve.reserve(report.ranks.size());
    for (const std::string& word : report.ranks) {
      auto it = stats.counts.find(word);
      const double count =
          it == stats.counts.end() ? 0.0 : static_cast<double>(it->second);
      curve.push_back(count / static_cast<double>(stats.total_tokens));
    }
    report.curves[name] = std::move(curve);
  };
  add_curve(reference.name, ref_stats);

  for (const MonoCorpus& corpus : corpora) {
    if (corpus.sentences.empty()) throw DataError("empty corpus in report");
    add_curve(corpus.name, vocab_stats(corpus));
    // Fair comparison: both sides sampled down to the smaller size.
    const std::size_t n = std::min(reference.size(), corpus.size());
    const MonoCorpus ref_sample = sample_corpus(reference, n, seed);
    const MonoCorpus cmp_sample = sample_corpus(corpus, n, seed);
    const Distribution p = to_distribution(vocab_stats(ref_sample));
    const Distribution q = to_distribution(vocab_stats(cmp_sample));
    report.js[corpus.name] = js_divergence(p, q);
  }
  return report;
}

std::string distribution_report_json(const DistributionReport& report) {
  nlohmann::json j;
  j["ranks"] = report.ranks;
  j["curves"] = report.curves;
  j["js"] = report.js;
  return j.dump(2) + "\n";
}

DomainClassifier DomainClassifier::train(const MonoCorpus& in_corpus,
                                         const MonoCorpus& gen_corpus,
                                         double alpha) {
  if (in_corpus.sentences.empty() || gen_corpus.sentences.empty()) {
    throw DataError("classifier training needs both corpora non-empty");
  }
  if (alpha <= 0.0) throw DataError("alpha must be > 0");
  const std::size_t n = std::min(in_corpus.size(), gen_corpus.size());

  DomainClassifier clf;
  clf.alpha_ = alpha;
  clf.log_prior_in_ = std::log(0.5);
  clf.log_prior_gen_ = std::log(0.5);

  std::set<std::string> vocab;
  for (std::size_t i = 0; i < n; ++i) {
    for (const Token& t : in_corpus.sentences[i]) {
      ++clf.counts_in_[t];
      ++clf.total_in_;
      vocab.insert(t);
    }
    for (const Token& t : gen_corpus.sentences[i]) {
      ++clf.counts_gen_[t];
      ++clf.total_gen_;
      vocab.insert(t);
    }
  }
  clf.vocab_size_ = vocab.size();
  if (clf.total_in_ == 0 || clf.total_gen_ == 0) {
    throw DataError("empty class after truncation");
  }
  return clf;
}

double DomainClassifier::log_odds(const Sentence& sentence) const {
  const double denom_in = static_cast<double>(total_in_) +
                          alpha_ * static_cast<double>(vocab_size_);
  const double denom_gen = static_cast<double>(total_gen_) +
                           alpha_ * static_cast<double>(vocab_size_);
  double odds = log_prior_in_ - log_prior_gen_;
  for (const Token& t : sentence) {
    auto iit = counts_in_.find(t);
    auto git = counts_gen_.find(t);
    const double ci = iit == counts_in_.end() ? 0.0 : static_cast<double>(iit->second);
    const double cg = git == counts_gen_.end() ? 0.0 : static_cast<double>(git->second);
    odds += std::log((ci + alpha_) / denom_in) -
            std::log((cg + alpha_) / denom_gen);
  }
  return odds;
}

bool DomainClassifier::is_in_domain(const Sentence& sentence) const {
  // Ties go to the general class.
  return log_odds(sentence) > 0.0;
}

double DomainClassifier::posterior_in(const Sentence& sentence) const {
  const double odds = log_odds(sentence);
  return 1.0 / (1.0 + std::exp(-odds));
}

ClassifiedFractions classify_corpus(const DomainClassifier& clf,
                                    const MonoCorpus& corpus) {
  if (corpus.sentences.empty()) throw DataError("empty corpus");
  std::size_t in_count = 0;
  for (const Sentence& s : corpus.sentences) {
    if (clf.is_in_domain(s)) ++in_count;
  }
  ClassifiedFractions fractions;
  fractions.in_domain =
      static_cast<double>(in_count) / static_cast<double>(corpus.size());
  fractions.general = 1.0 - fractions.in_domain;
  return fractions;
}

std::string classification_json(
    const std::map<std::string, ClassifiedFractions>& results) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, fractions] : results) {
    j[name] = {{"in_domain", fractions.in_domain},
               {"general", fractions.general}};
  }
  return j.dump(2) + "\n";
}

}  // namespace glossgen
