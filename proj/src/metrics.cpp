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

#include "glossgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <unordered_map>

#include "glossgen/errors.hpp"

#include "json.hpp"

namespace glossgen {

namespace {

void check_aligned(const std::vector<Sentence>& hyps,
                   const std::vector<Sentence>& refs) {
  if (hyps.size() != refs.size()) {
    throw DataError("hypothesis/reference count mismatch: " +
                    std::to_string(hyps.size()) + " vs " +
                    std::to_string(refs.size()));
  }
  if (hyps.empty()) throw DataError("empty evaluation set");
}

using NgramCounts = std::unordered_map<std::string, std::int64_t>;

// n-grams as \x01-joined strings; tokens never contain whitespace so the
// encoding is injective.
NgramCounts count_ngrams(const Sentence& s, int n) {
  NgramCounts counts;
  if (static_cast<int>(s.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= s.size(); ++i) {
    std::string key = s[i];
    for (int j = 1; j < n; ++j) {
      key.push_back('\x01');
      key += s[i + static_cast<std::size_t>(j)];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

BleuResult corpus_bleu(const std::vector<Sentence>& hyps,
                       const std::vector<Sentence>& refs, int max_n) {
  check_aligned(hyps, refs);
  if (max_n < 1 || max_n > 4) throw DataError("max_n must be in [1,4]");

  BleuResult result;
  std::array<std::int64_t, 4> matches{};
  std::array<std::int64_t, 4> totals{};
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if (refs[i].empty()) throw DataError("empty reference sentence");
    result.hyp_len += static_cast<std::int64_t>(hyps[i].size());
    result.ref_len += static_cast<std::int64_t>(refs[i].size());
    for (int n = 1; n <= max_n; ++n) {
      const NgramCounts hyp_counts = count_ngrams(hyps[i], n);
      const NgramCounts ref_counts = count_ngrams(refs[i], n);
      for (const auto& [g, c] : hyp_counts) {
        totals[static_cast<std::size_t>(n - 1)] += c;
        auto it = ref_counts.find(g);
        if (it != ref_counts.end()) {
          matches[static_cast<std::size_t>(n - 1)] += std::min(c, it->second);
        }
      }
    }
  }

  result.brevity_penalty =
      result.hyp_len == 0
          ? 0.0
          : std::min(1.0, std::exp(1.0 - static_cast<double>(result.ref_len) /
                                             static_cast<double>(result.hyp_len)));
  for (int n = 0; n < max_n; ++n) {
    result.precisions[static_cast<std::size_t>(n)] =
        totals[static_cast<std::size_t>(n)] == 0
            ? 0.0
            : static_cast<double>(matches[static_cast<std::size_t>(n)]) /
                  static_cast<double>(totals[static_cast<std::size_t>(n)]);
  }
  for (int k = 1; k <= max_n; ++k) {
    double log_sum = 0.0;
    bool zero = false;
    for (int n = 0; n < k; ++n) {
      const double p = result.precisions[static_cast<std::size_t>(n)];
      if (p <= 0.0) {
        zero = true;
        break;
      }
      log_sum += std::log(p);
    }
    result.bleu[static_cast<std::size_t>(k - 1)] =
        zero ? 0.0
             : 100.0 * result.brevity_penalty *
                   std::exp(log_sum / static_cast<double>(k));
  }
  return result;
}

namespace {

// Top-two per-sentence counts of one n-gram across the corpus; lets each
// hypothesis exclude itself from the reference pool in O(1).
struct TopTwo {
  std::int64_t best = 0;
  std::size_t best_owner = SIZE_MAX;
  std::int64_t second = 0;

  void offer(std::int64_t count, std::size_t owner) {
    if (count > best) {
      second = best;
      best = count;
      best_owner = owner;
    } else if (count > second) {
      second = count;
    }
  }
  std::int64_t clip_excluding(std::size_t owner) const {
    return owner == best_owner ? second : best;
  }
};

}  // namespace

double self_bleu(const MonoCorpus& corpus, int max_n, std::size_t sample_cap) {
  if (corpus.size() < 2) throw DataError("self_bleu needs at least 2 sentences");
  if (max_n < 1 || max_n > 4) throw DataError("max_n must be in [1,4]");
  if (sample_cap < 1) throw DataError("sample_cap must be >= 1");

  const std::size_t n_hyps = std::min(sample_cap, corpus.size());

  std::vector<std::vector<NgramCounts>> per_sentence(corpus.size());
  std::vector<std::unordered_map<std::string, TopTwo>> tops(
      static_cast<std::size_t>(max_n));
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    per_sentence[i].reserve(static_cast<std::size_t>(max_n));
    for (int n = 1; n <= max_n; ++n) {
      per_sentence[i].push_back(count_ngrams(corpus.sentences[i], n));
      for (const auto& [g, c] : per_sentence[i].back()) {
        tops[static_cast<std::size_t>(n - 1)][g].offer(c, i);
      }
    }
  }
  // Reference length pool (for the brevity penalty with self excluded).
  std::map<std::int64_t, std::size_t> length_pool;
  for (const Sentence& s : corpus.sentences) {
    ++length_pool[static_cast<std::int64_t>(s.size())];
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < n_hyps; ++i) {
    const std::int64_t hyp_len =
        static_cast<std::int64_t>(corpus.sentences[i].size());
    // Closest reference length, ties toward the shorter one.
    std::int64_t ref_len = 0;
    std::int64_t best_diff = INT64_MAX;
    for (const auto& [len, count] : length_pool) {
      const std::size_t avail = count - (len == hyp_len ? 1 : 0);
      if (avail == 0) continue;
      const std::int64_t diff = std::llabs(len - hyp_len);
      if (diff < best_diff) {
        best_diff = diff;
        ref_len = len;
      }
    }
    const double bp =
        std::min(1.0, std::exp(1.0 - static_cast<double>(ref_len) /
                                         static_cast<double>(hyp_len)));

    double log_sum = 0.0;
    bool zero = false;
    for (int n = 1; n <= max_n; ++n) {
      std::int64_t match = 0;
      std::int64_t total = 0;
      for (const auto& [g, c] :
           per_sentence[i][static_cast<std::size_t>(n - 1)]) {
        total += c;
        const auto& top = tops[static_cast<std::size_t>(n - 1)].at(g);
        match += std::min(c, top.clip_excluding(i));
      }
      double p;
      if (n == 1) {
        p = total == 0 ? 0.0 : static_cast<double>(match) / static_cast<double>(total);
      } else {
        p = static_cast<double>(match + 1) / static_cast<double>(total + 1);
      }
      if (p <= 0.0) {
        zero = true;
        break;
      }
      log_sum += std::log(p);
    }
    sum += zero ? 0.0 : bp * std::exp(log_sum / static_cast<double>(max_n));
  }
  return 100.0 * sum / static_cast<double>(n_hyps);
}

namespace {

std::size_t lcs_length(const Sentence& a, const Sentence& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

}  // namespace

double rouge_l(const std::vector<Sentence>& hyps,
               const std::vector<Sentence>& refs) {
  check_aligned(hyps, refs);
  double sum = 0.0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if (refs[i].empty()) throw DataError("empty reference sentence");
    const std::size_t lcs = hyps[i].empty() ? 0 : lcs_length(hyps[i], refs[i]);
    if (lcs == 0) continue;
    const double p = static_cast<double>(lcs) / static_cast<double>(hyps[i].size());
    const double r = static_cast<double>(lcs) / static_cast<double>(refs[i].size());
    sum += 2.0 * p * r / (p + r);
  }
  return 100.0 * sum / static_cast<double>(hyps.size());
}

double meteor_lite(const std::vector<Sentence>& hyps,
                   const std::vector<Sentence>& refs) {
  check_aligned(hyps, refs);
  double sum = 0.0;
  for (std::size_t si = 0; si < hyps.size(); ++si) {
    const Sentence& hyp = hyps[si];
    const Sentence& ref = refs[si];
    if (ref.empty()) throw DataError("empty reference sentence");
    if (hyp.empty()) continue;

    std::vector<bool> ref_used(ref.size(), false);
    std::size_t matches = 0;
    std::size_t chunks = 0;
    std::ptrdiff_t prev_hyp = -2;
    std::ptrdiff_t prev_ref = -2;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
      // Prefer continuing the current chunk, else earliest unused occurrence.
      std::ptrdiff_t pick = -1;
      const std::size_t cont = static_cast<std::size_t>(prev_ref + 1);
      if (prev_ref + 1 >= 0 && cont < ref.size() && !ref_used[cont] &&
          ref[cont] == hyp[i]) {
        pick = prev_ref + 1;
      } else {
        for (std::size_t j = 0; j < ref.size(); ++j) {
          if (!ref_used[j] && ref[j] == hyp[i]) {
            pick = static_cast<std::ptrdiff_t>(j);
            break;
          }
        }
      }
      if (pick < 0) continue;
      ref_used[static_cast<std::size_t>(pick)] = true;
      ++matches;
      if (static_cast<std::ptrdiff_t>(i) != prev_hyp + 1 || pick != prev_ref + 1) {
        ++chunks;
      }
      prev_hyp = static_cast<std::ptrdiff_t>(i);
      prev_ref = pick;
    }
    if (matches == 0) continue;
    const double p = static_cast<double>(matches) / static_cast<double>(hyp.size());
    const double r = static_cast<double>(matches) / static_cast<double>(ref.size());
    const double f_mean = 10.0 * p * r / (r + 9.0 * p);
    const double frag = static_cast<double>(chunks) / static_cast<double>(matches);
    const double penalty = 0.5 * frag * frag * frag;
    sum += f_mean * (1.0 - penalty);
  }
  return 100.0 * sum / static_cast<double>(hyps.size());
}

void BucketSpec::validate() const {
  if (freq_cuts[0] <= 0 || freq_cuts[0] >= freq_cuts[1]) {
    throw DataError("frequency cut points must be strictly increasing");
  }
  if (len_cuts[0] <= 0 || len_cuts[0] >= len_cuts[1]) {
    throw DataError("length cut points must be strictly increasing");
  }
}

namespace {

enum Bucket { kLow = 0, kMedium = 1, kHigh = 2 };

Bucket freq_bucket(const std::string& word, const VocabStats& stats,
                   const BucketSpec& spec) {
  auto it = stats.counts.find(word);
  const std::int64_t freq = it == stats.counts.end() ? 0 : it->second;
  if (freq >= spec.freq_cuts[1]) return kHigh;
  if (freq >= spec.freq_cuts[0]) return kMedium;
  return kLow;
}

std::map<std::string, std::int64_t> token_counts(const Sentence& s) {
  std::map<std::string, std::int64_t> counts;
  for (const Token& t : s) ++counts[t];
  return counts;
}

}  // namespace

FreqBucketF1 f1_by_frequency(const std::vector<Sentence>& hyps,
                             const std::vector<Sentence>& refs,
                             const VocabStats& train_stats,
                             const BucketSpec& spec) {
  check_aligned(hyps, refs);
  spec.validate();

  std::array<std::int64_t, 3> match{};
  std::array<std::int64_t, 3> hyp_total{};
  std::array<std::int64_t, 3> ref_total{};
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto hc = token_counts(hyps[i]);
    const auto rc = token_counts(refs[i]);
    for (const auto& [w, c] : hc) {
      const Bucket b = freq_bucket(w, train_stats, spec);
      hyp_total[b] += c;
      auto it = rc.find(w);
      if (it != rc.end()) match[b] += std::min(c, it->second);
    }
    for (const auto& [w, c] : rc) {
      ref_total[freq_bucket(w, train_stats, spec)] += c;
    }
  }

  auto f1_of = [&](Bucket b) -> std::optional<double> {
    if (hyp_total[b] == 0 && ref_total[b] == 0) return std::nullopt;
    const double p = hyp_total[b] == 0
                         ? 0.0
                         : static_cast<double>(match[b]) /
                               static_cast<double>(hyp_total[b]);
    const double r = ref_total[b] == 0
                         ? 0.0
                         : static_cast<double>(match[b]) /
                               static_cast<double>(ref_total[b]);
    if (p + r == 0.0) return 0.0;
    return 100.0 * 2.0 * p * r / (p + r);
  };
  return {f1_of(kLow), f1_of(kMedium), f1_of(kHigh)};
}

LengthBucketBleu bleu_by_length(const std::vector<Sentence>& hyps,
                                const std::vector<Sentence>& refs,
                                const BucketSpec& spec) {
  check_aligned(hyps, refs);
  spec.validate();

  std::array<std::vector<Sentence>, 3> bucket_hyps;
  std::array<std::vector<Sentence>, 3> bucket_refs;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto len = static_cast<std::int64_t>(refs[i].size());
    const std::size_t b = len <= spec.len_cuts[0] ? 0
                          : len <= spec.len_cuts[1] ? 1
                                                    : 2;
    bucket_hyps[b].push_back(hyps[i]);
    bucket_refs[b].push_back(refs[i]);
  }
  auto bleu_of = [&](std::size_t b) -> std::optional<double> {
    if (bucket_hyps[b].empty()) return std::nullopt;
    return corpus_bleu(bucket_hyps[b], bucket_refs[b]).bleu[3];
  };
  return {bleu_of(0), bleu_of(1), bleu_of(2)};
}

EvalReport evaluate(const std::vector<Sentence>& hyps,
                    const std::vector<Sentence>& refs,
                    const VocabStats* train_stats, const BucketSpec& spec) {
  const BleuResult bleu = corpus_bleu(hyps, refs);
  EvalReport report;
  report.bleu = bleu.bleu;
  report.brevity_penalty = bleu.brevity_penalty;
  report.rouge_l = rouge_l(hyps, refs);
  report.meteor = meteor_lite(hyps, refs);
  report.sentence_count = hyps.size();
  if (train_stats) {
    report.freq_f1 = f1_by_frequency(hyps, refs, *train_stats, spec);
  }
  report.length_bleu = bleu_by_length(hyps, refs, spec);
  return report;
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace

std::string eval_report_json(const EvalReport& report) {
  nlohmann::json j;
  j["bleu"] = report.bleu;
  j["rouge_l"] = report.rouge_l;
  j["meteor"] = report.meteor;
  j["bp"] = report.brevity_penalty;
  j["sentence_count"] = report.sentence_count;
  nlohmann::json buckets = nlohmann::json::object();
  if (report.freq_f1) {
    buckets["frequency"] = {{"low", opt_json(report.freq_f1->low)},
                            {"medium", opt_json(report.freq_f1->medium)},
                            {"high", opt_json(report.freq_f1->high)}};
  }
  if (report.length_bleu) {
    buckets["length"] = {{"short", opt_json(report.length_bleu->short_refs)},
                         {"medium", opt_json(report.length_bleu->medium_refs)},
                         {"long", opt_json(report.length_bleu->long_refs)}};
  }
  j["buckets"] = std::move(buckets);
  return j.dump(2) + "\n";
}

}  // namespace glossgen
