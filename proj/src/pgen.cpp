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

#include "glossgen/pgen.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <unordered_set>

#include "glossgen/rng.hpp"

#include "json.hpp"

namespace glossgen {

void PromptConfig::validate() const {
  if (k < 1) throw DataError("prompt length k must be >= 1");
  if (target_size < 1) throw DataError("target_size must be >= 1");
  if (min_len > max_len) throw DataError("min_len must be <= max_len");
  if (temperature <= 0.0) throw DataError("temperature must be > 0");
  if (max_new_tokens < 1) throw DataError("max_new_tokens must be >= 1");
  if (effective_budget() < target_size) {
    throw DataError("attempt_budget must be >= target_size");
  }
}

namespace {

// Draws `take` distinct sentence indices in draw order.
std::vector<std::size_t> draw_without_replacement(std::size_t pool,
                                                  std::size_t take, Rng& rng) {
  std::vector<std::size_t> idx(pool);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::size_t> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(pool - i));
    std::swap(idx[i], idx[j]);
    out.push_back(idx[i]);
  }
  return out;
}

}  // namespace

std::vector<Sentence> build_tuning_samples(const MonoCorpus& corpus, int k,
                                           std::size_t count,
                                           std::uint64_t seed) {
  if (k < 1) throw DataError("k must be >= 1");
  if (count < 1) throw DataError("sample count must be >= 1");
  if (corpus.size() < static_cast<std::size_t>(k)) {
    throw DataError("corpus of " + std::to_string(corpus.size()) +
                    " sentences is smaller than k = " + std::to_string(k));
  }
  Rng rng(seed);
  std::vector<Sentence> samples;
  samples.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const auto picks =
        draw_without_replacement(corpus.size(), static_cast<std::size_t>(k), rng);
    Sentence sample;
    for (std::size_t i = 0; i < picks.size(); ++i) {
      const Sentence& sent = corpus.sentences[picks[i]];
      sample.insert(sample.end(), sent.begin(), sent.end());
      sample.push_back(i + 1 < picks.size() ? Token(kSep) : Token(kEos));
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

Sentence build_generation_prompt(const MonoCorpus& corpus, int k,
                                 std::uint64_t seed, std::uint64_t index) {
  if (k < 1) throw DataError("k must be >= 1");
  const std::size_t take = static_cast<std::size_t>(k - 1);
  if (corpus.size() < take) {
    throw DataError("corpus of " + std::to_string(corpus.size()) +
                    " sentences is smaller than k-1 = " + std::to_string(take));
  }
  Sentence prompt;
  if (take == 0) return prompt;
  Rng rng(mix_seed(seed, index));
  const auto picks = draw_without_replacement(corpus.size(), take, rng);
  for (std::size_t pick : picks) {
    const Sentence& sent = corpus.sentences[pick];
    prompt.insert(prompt.end(), sent.begin(), sent.end());
    prompt.push_back(Token(kSep));
  }
  return prompt;
}

BigUint permutation_count(std::uint64_t n, std::uint64_t k) {
  if (k < 1) throw DataError("k must be >= 1");
  if (k - 1 > n) {
    throw DataError("k-1 = " + std::to_string(k - 1) + " exceeds N = " +
                    std::to_string(n));
  }
  BigUint prod(1);
  for (std::uint64_t i = 0; i < k - 1; ++i) {
    prod.mul(n - i);
  }
  return prod;
}

GenerationResult generate_corpus(const GenerationBackend& backend,
                                 const MonoCorpus& source,
                                 const MonoCorpus& authentic,
                                 const PromptConfig& cfg, int workers) {
  cfg.validate();
  if (!backend) throw BackendError("null generation backend");
  if (workers < 1) workers = 1;

  std::unordered_set<std::string> authentic_set;
  if (cfg.dedup_against_authentic) {
    for (const Sentence& s : authentic.sentences) authentic_set.insert(join(s));
  }
  std::unordered_set<std::string> seen;

  GenerationResult result;
  result.corpus.name = "pgen";
  result.corpus.domain_label = DomainLabel::kPgen;
  GenerationStats& st = result.stats;

  const std::size_t budget = cfg.effective_budget();
  const std::size_t batch = static_cast<std::size_t>(workers) * 8;

  std::size_t next_index = 0;
  while (st.accepted < cfg.target_size && st.prompts_used < budget) {
    const std::size_t n = std::min(batch, budget - next_index);
    std::vector<Sentence> continuations(n);
    if (workers == 1) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t index = next_index + i;
        continuations[i] = backend(
            build_generation_prompt(source, cfg.k, cfg.seed, index), index);
      }
    } else {
      std::vector<std::future<void>> futs;
      const std::size_t chunk = (n + static_cast<std::size_t>(workers) - 1) /
                                static_cast<std::size_t>(workers);
      for (int w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, [&, lo, hi] {
          for (std::size_t i = lo; i < hi; ++i) {
            const std::uint64_t index = next_index + i;
            continuations[i] = backend(
                build_generation_prompt(source, cfg.k, cfg.seed, index), index);
          }
        }));
      }
      for (auto& f : futs) f.get();
    }

    // Sequential merge in prompt-index order keeps the accepted set
    // independent of scheduling.
    for (std::size_t i = 0;
         i < n && st.accepted < cfg.target_size && st.prompts_used < budget;
         ++i) {
      ++st.prompts_used;
      Sentence cont = continuations[i];
      bool ended_with_eos = false;
      if (!cont.empty() && cont.back() == kEos) {
        ended_with_eos = true;
        cont.pop_back();
      }
      std::vector<Sentence> segments(1);
      for (const Token& t : cont) {
        if (t == kSep) {
          segments.emplace_back();
        } else {
          segments.back().push_back(t);
        }
      }
      if (!ended_with_eos) {
        // Last segment was cut off by the token cap, not terminated.
        if (!segments.back().empty()) ++st.discarded_tails;
        segments.pop_back();
      }
      for (Sentence& seg : segments) {
        if (st.accepted >= cfg.target_size) break;
        ++st.candidates;
        if (seg.size() < cfg.min_len || seg.size() > cfg.max_len) {
          ++st.rejected_length;
          continue;
        }
        if (std::any_of(seg.begin(), seg.end(),
                        [](const Token& t) { return is_reserved(t); })) {
          ++st.rejected_reserved;
          continue;
        }
        const std::string key = join(seg);
        if (cfg.dedup_against_authentic && authentic_set.count(key)) {
          ++st.rejected_dup_authentic;
          continue;
        }
        if (cfg.dedup_within) {
          if (seen.count(key)) {
            ++st.rejected_dup_within;
            continue;
          }
          seen.insert(key);
        }
        result.corpus.sentences.push_back(std::move(seg));
        ++st.accepted;
      }
    }
    next_index += n;
  }

  if (st.accepted < cfg.target_size) {
    std::string msg =
        "attempt budget of " + std::to_string(budget) + " prompts exhausted with " +
        std::to_string(st.accepted) + "/" + std::to_string(cfg.target_size) +
        " sentences accepted";
    throw GenerationBudgetError(msg, std::move(result));
  }
  return result;
}

GenerationBackend make_ngram_backend(const NGramModel& model,
                                     std::size_t max_new_tokens,
                                     double temperature, std::uint64_t seed) {
  return [&model, max_new_tokens, temperature, seed](const Sentence& prompt,
                                                     std::uint64_t index) {
    return sample_continuation(model, prompt, max_new_tokens, temperature,
                               mix_seed(seed, index));
  };
}

std::string generation_stats_json(const GenerationStats& st) {
  nlohmann::json j;
  j["prompts_used"] = st.prompts_used;
  j["candidates"] = st.candidates;
  j["accepted"] = st.accepted;
  j["rejected_length"] = st.rejected_length;
  j["rejected_reserved"] = st.rejected_reserved;
  j["rejected_dup_within"] = st.rejected_dup_within;
  j["rejected_dup_authentic"] = st.rejected_dup_authentic;
  j["discarded_tails"] = st.discarded_tails;
  return j.dump(2) + "\n";
}

}  // namespace glossgen
