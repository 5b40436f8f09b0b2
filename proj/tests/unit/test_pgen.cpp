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

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "glossgen/pgen.hpp"
#include "glossgen/subprocess.hpp"

#include "helpers.hpp"

using namespace glossgen;
using namespace testutil;

TEST_CASE("tuning samples: k = 1 is one sentence plus [EOS]") {
  const MonoCorpus c = corpus_of({"a b", "c d", "e f"});
  const auto samples = build_tuning_samples(c, 1, 4, 9);
  REQUIRE(samples.size() == 4);
  for (const Sentence& s : samples) {
    REQUIRE(s.size() == 3);
    CHECK(s.back() == kEos);
    CHECK(std::count(s.begin(), s.end(), Token(kSep)) == 0);
  }
}

TEST_CASE("tuning samples: k sentences joined by [SEP], terminated by [EOS]") {
  const MonoCorpus c = corpus_of({"a b", "c d", "e f", "g h"});
  const auto samples = build_tuning_samples(c, 3, 10, 5);
  for (const Sentence& s : samples) {
    CHECK(s.size() == 9);  // (2+1) * 3 with [EOS] replacing the last [SEP]
    CHECK(s.back() == kEos);
    CHECK(std::count(s.begin(), s.end(), Token(kSep)) == 2);
  }
  // Within one sample the k sentences are distinct (drawn without
  // replacement): with 2-token sentences, the first tokens never repeat.
  for (const Sentence& s : samples) {
    std::set<std::string> firsts;
    for (std::size_t i = 0; i + 1 < s.size(); i += 3) {
      CHECK(firsts.insert(s[i]).second);
    }
  }
  CHECK_THROWS_AS(build_tuning_samples(c, 5, 1, 1), DataError);
  const auto again = build_tuning_samples(c, 3, 10, 5);
  CHECK(again == samples);
}

TEST_CASE("generation prompt: k = 1 is the empty prompt") {
  const MonoCorpus c = corpus_of({"a b"});
  CHECK(build_generation_prompt(c, 1, 3, 0).empty());
}

TEST_CASE("generation prompt structure and (seed, index) purity") {
  const MonoCorpus c = corpus_of({"a b", "c d", "e f", "g h", "i j"});
  const Sentence p = build_generation_prompt(c, 3, 11, 4);
  REQUIRE(p.size() == 6);  // (2+1) * 2
  CHECK(p.back() == kSep);
  CHECK(p[2] == kSep);

  CHECK(build_generation_prompt(c, 3, 11, 4) == p);
  // Prompt i is independent of whether other prompts were built first.
  Sentence later;
  for (std::uint64_t i = 0; i <= 4; ++i) {
    later = build_generation_prompt(c, 3, 11, i);
  }
  CHECK(later == p);

  CHECK_THROWS_AS(build_generation_prompt(c, 7, 1, 0), DataError);
}

TEST_CASE("permutation count matches the iterated-product oracle") {
  CHECK(permutation_count(5, 3).to_string() == "20");  // 5 * 4
  CHECK(permutation_count(9, 1).to_string() == "1");   // empty product
  CHECK(permutation_count(0, 1).to_string() == "1");
  CHECK_THROWS_AS(permutation_count(3, 5), DataError);

  // Independent oracle for a case that still fits in 64 bits.
  std::uint64_t expected = 1;
  for (std::uint64_t i = 0; i < 7; ++i) expected *= 50 - i;
  CHECK(permutation_count(50, 8).to_string() == std::to_string(expected));
}

TEST_CASE("permutation count of the default setting dwarfs the corpus size") {
  const BigUint big = permutation_count(7086, 20);
  CHECK(big.compare(7086) > 0);
  // Digit-count cross-check: sum of log10 of the 19 factors.
  double log10_sum = 0.0;
  for (int i = 0; i < 19; ++i) log10_sum += std::log10(7086.0 - i);
  CHECK(big.digit_count() == static_cast<std::size_t>(log10_sum) + 1);
  // permutation_count(N, k) >= N whenever k >= 2 and N >= 2.
  for (std::uint64_t n = 2; n < 40; n += 7) {
    for (std::uint64_t k = 2; k <= n + 1; k += 3) {
      CHECK(permutation_count(n, k).compare(n) >= 0);
    }
  }
}

TEST_CASE("prompt config validation") {
  PromptConfig cfg;
  cfg.target_size = 10;
  CHECK_NOTHROW(cfg.validate());
  cfg.k = 0;
  CHECK_THROWS_AS(cfg.validate(), DataError);
  cfg.k = 2;
  cfg.min_len = 10;
  cfg.max_len = 3;
  CHECK_THROWS_AS(cfg.validate(), DataError);
  cfg.min_len = 1;
  cfg.attempt_budget = 5;  // below target
  CHECK_THROWS_AS(cfg.validate(), DataError);
}

namespace {

PromptConfig small_config(std::size_t target) {
  PromptConfig cfg;
  cfg.k = 2;
  cfg.target_size = target;
  cfg.min_len = 1;
  cfg.max_len = 60;
  cfg.seed = 3;
  cfg.attempt_budget = 50;
  return cfg;
}

}  // namespace

TEST_CASE("echo backend with dedup off produces M copies") {
  const MonoCorpus source = corpus_of({"p q", "r s", "t u"});
  const GenerationBackend constant = [](const Sentence&, std::uint64_t) {
    return sent("a b [EOS]");
  };
  PromptConfig cfg = small_config(5);
  cfg.dedup_within = false;
  cfg.dedup_against_authentic = false;
  const GenerationResult r = generate_corpus(constant, source, source, cfg);
  REQUIRE(r.corpus.size() == 5);
  for (const Sentence& s : r.corpus.sentences) CHECK(s == sent("a b"));
  CHECK(r.corpus.domain_label == DomainLabel::kPgen);
}

TEST_CASE("constant backend with dedup saturates at one sentence") {
  const MonoCorpus source = corpus_of({"p q", "r s", "t u"});
  const GenerationBackend constant = [](const Sentence&, std::uint64_t) {
    return sent("a b c [EOS]");
  };
  PromptConfig cfg = small_config(5);
  try {
    generate_corpus(constant, source, source, cfg);
    FAIL("expected GenerationBudgetError");
  } catch (const GenerationBudgetError& e) {
    CHECK(e.partial().corpus.size() == 1);
    CHECK(e.partial().stats.prompts_used == cfg.attempt_budget);
    CHECK(e.partial().stats.rejected_dup_within == cfg.attempt_budget - 1);
  }
}

TEST_CASE("length and reserved-token filters reject candidates") {
  const MonoCorpus source = corpus_of({"p q", "r s", "t u"});
  PromptConfig cfg = small_config(3);
  cfg.min_len = 3;

  const GenerationBackend too_short = [](const Sentence&, std::uint64_t) { return sent("a [EOS]"); };
  CHECK_THROWS_AS(generate_corpus(too_short, source, source, cfg),
                  GenerationBudgetError);

  const GenerationBackend has_unk = [](const Sentence&, std::uint64_t) {
    return sent("a [UNK] b c [EOS]");
  };
  try {
    generate_corpus(has_unk, source, source, cfg);
    FAIL("expected GenerationBudgetError");
  } catch (const GenerationBudgetError& e) {
    CHECK(e.partial().stats.rejected_reserved == cfg.attempt_budget);
  }
}

TEST_CASE("dedup against authentic removes exact matches") {
  const MonoCorpus source = corpus_of({"a b c", "d e f"});
  const GenerationBackend copies_authentic = [](const Sentence&, std::uint64_t) {
    return sent("a b c [EOS]");
  };
  PromptConfig cfg = small_config(1);
  cfg.dedup_within = false;
  CHECK_THROWS_AS(generate_corpus(copies_authentic, source, source, cfg),
                  GenerationBudgetError);
  // Same backend against a disjoint authentic corpus is fine.
  const MonoCorpus other = corpus_of({"x y z"});
  const GenerationResult r = generate_corpus(copies_authentic, source, other, cfg);
  CHECK(r.corpus.size() == 1);
}

TEST_CASE("a continuation may carry several [SEP]-separated sentences") {
  const MonoCorpus source = corpus_of({"p q", "r s", "t u"});
  // No [EOS]: the trailing segment was cut off and must be discarded.
  const GenerationBackend multi = [](const Sentence&, std::uint64_t) {
    return sent("a b c [SEP] d e f [SEP] g h");
  };
  PromptConfig cfg = small_config(2);
  cfg.min_len = 3;
  const GenerationResult r = generate_corpus(multi, source, source, cfg);
  REQUIRE(r.corpus.size() == 2);
  CHECK(r.corpus.sentences[0] == sent("a b c"));
  CHECK(r.corpus.sentences[1] == sent("d e f"));
  CHECK(r.stats.discarded_tails == 1);
  CHECK(r.stats.prompts_used == 1);
}

TEST_CASE("generated output is invariant to the worker count") {
  const MonoCorpus toy = load_mono(toy_indomain());
  const auto tuning = build_tuning_samples(toy, 4, 200, 21);
  const NGramModel lm = train_lm(tuning, 3, {0.1, 0.3, 0.6}, 0);
  const GenerationBackend backend = make_ngram_backend(lm, 30, 1.0, 77);

  PromptConfig cfg;
  cfg.k = 4;
  cfg.target_size = 120;
  cfg.min_len = 3;
  cfg.max_len = 60;
  cfg.seed = 5;
  cfg.attempt_budget = 2000;

  const GenerationResult r1 = generate_corpus(backend, toy, toy, cfg, 1);
  const GenerationResult r4 = generate_corpus(backend, toy, toy, cfg, 4);
  CHECK(r1.corpus.sentences == r4.corpus.sentences);
  CHECK(r1.stats.prompts_used == r4.stats.prompts_used);
  CHECK(r1.stats.accepted == r4.stats.accepted);

  // Accepted sentences respect the filters and dedup flags.
  std::set<std::string> seen;
  for (const Sentence& s : r1.corpus.sentences) {
    CHECK(s.size() >= cfg.min_len);
    CHECK(s.size() <= cfg.max_len);
    for (const Token& t : s) CHECK_FALSE(is_reserved(t));
    CHECK(seen.insert(join(s)).second);
  }
}

TEST_CASE("builtin backend is a pure function of prompt and index") {
  const MonoCorpus toy = load_mono(toy_indomain());
  const auto tuning = build_tuning_samples(toy, 3, 100, 2);
  const NGramModel lm = train_lm(tuning, 3, {0.1, 0.3, 0.6}, 0);
  const GenerationBackend backend = make_ngram_backend(lm, 20, 1.0, 5);
  const Sentence prompt = build_generation_prompt(toy, 3, 9, 0);
  const Sentence c1 = backend(prompt, 0);
  const Sentence c2 = backend(prompt, 0);
  CHECK(c1 == c2);
  for (const Token& t : c1) CHECK(t != kBos);
  // Distinct indices redraw even when the prompt repeats.
  bool any_diff = false;
  for (std::uint64_t i = 1; i <= 10 && !any_diff; ++i) {
    any_diff = backend(prompt, i) != c1;
  }
  CHECK(any_diff);
}

TEST_CASE("k = 1 generates fresh unconditional sentences") {
  const MonoCorpus toy = load_mono(toy_indomain());
  const auto tuning = build_tuning_samples(toy, 1, 400, 8);
  const NGramModel lm = train_lm(tuning, 3, {0.1, 0.3, 0.6}, 0);
  const GenerationBackend backend = make_ngram_backend(lm, 48, 1.0, 13);

  PromptConfig cfg;
  cfg.k = 1;
  cfg.target_size = 100;
  cfg.min_len = 3;
  cfg.max_len = 60;
  cfg.seed = 3;
  cfg.attempt_budget = 4000;
  const GenerationResult r = generate_corpus(backend, toy, toy, cfg);
  CHECK(r.corpus.size() == 100);  // dedup_within on: 100 distinct sentences
}

TEST_CASE("external line backend speaks the one-line protocol") {
  LineProcess cat("cat");
  const Sentence request = sent("a b [SEP] c [SEP]");
  CHECK(cat.round_trip(request) == request);
  CHECK(cat.round_trip({}).empty());  // empty line is a valid empty response

  LineProcess dead("true");
  CHECK_THROWS_AS(dead.round_trip(sent("x")), BackendError);
}
