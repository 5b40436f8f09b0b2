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

#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "glossgen/errors.hpp"
#include "glossgen/ngram_lm.hpp"
#include "glossgen/rng.hpp"

#include "helpers.hpp"

using namespace glossgen;
using namespace testutil;

TEST_CASE("unigram Laplace probabilities match the hand formula") {
  // One sample "a b": vocab {a, b, [SEP], [EOS], [UNK], [BOS]} -> V = 6,
  // total = 2, so P(a) = P(b) = (1+1)/(2+6).
  const NGramModel m = train_lm({sent("a b")}, 1, {1.0}, 0);
  CHECK(m.vocab().size() == 6);
  const Sentence empty;
  CHECK(m.cond_prob("a", empty) == doctest::Approx(2.0 / 8.0).epsilon(1e-12));
  CHECK(m.cond_prob("b", empty) == doctest::Approx(2.0 / 8.0).epsilon(1e-12));
  CHECK(m.cond_prob("zzz", empty) ==
        doctest::Approx(1.0 / 8.0).epsilon(1e-12));  // scored as [UNK]
}

TEST_CASE("conditionals are normalized for random contexts") {
  const std::vector<Sentence> samples = {
      sent("der wind weht stark"), sent("der regen kommt morgen"),
      sent("morgen regen [EOS]"), sent("wind und regen [EOS]"),
      sent("es bleibt trocken")};
  const NGramModel m = train_lm(samples, 3, {0.1, 0.3, 0.6}, 0);
  Rng rng(7);
  const auto& vocab = m.vocab();
  for (int trial = 0; trial < 100; ++trial) {
    Sentence ctx;
    const std::size_t len = rng.next_below(4);
    for (std::size_t i = 0; i < len; ++i) {
      ctx.push_back(vocab[rng.next_below(vocab.size())]);
    }
    const std::vector<double> probs = m.full_conditional(ctx);
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    // Spot-check the vector against scalar lookups.
    const std::size_t i = rng.next_below(vocab.size());
    CHECK(probs[i] == doctest::Approx(m.cond_prob(vocab[i], ctx)).epsilon(1e-12));
  }
}

TEST_CASE("training is deterministic") {
  const std::vector<Sentence> samples = {sent("a b c"), sent("b c a"),
                                         sent("c a b")};
  const NGramModel m1 = train_lm(samples, 2, {0.4, 0.6}, 1);
  const NGramModel m2 = train_lm(samples, 2, {0.4, 0.6}, 1);
  CHECK(m1.to_json() == m2.to_json());
}

TEST_CASE("train_lm validates its arguments") {
  CHECK_THROWS_AS(train_lm({}, 1, {1.0}, 0), DataError);
  CHECK_THROWS_AS(train_lm({sent("a")}, 0, {}, 0), DataError);
  CHECK_THROWS_AS(train_lm({sent("a")}, 2, {1.0}, 0), DataError);       // wrong length
  CHECK_THROWS_AS(train_lm({sent("a")}, 2, {0.3, 0.3}, 0), DataError);  // sum != 1
  CHECK_THROWS_AS(train_lm({sent("a")}, 1, {1.0}, -1), DataError);
}

TEST_CASE("cross entropy of an exact 50/50 unigram model is ln 2") {
  // alpha = 0 disables smoothing, so probabilities are exactly 1/2.
  const NGramModel m = train_lm({sent("a b")}, 1, {1.0}, 0, /*alpha=*/0.0);
  const double ce = cross_entropy(m, sent("a b"));
  CHECK(ce == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("all-unknown sentences collapse to the [UNK] unigram") {
  // "selten" occurs once and the threshold is 1, so it maps to [UNK].
  const std::vector<Sentence> samples = {sent("oft oft oft selten")};
  const NGramModel m = train_lm(samples, 1, {1.0}, 1);
  CHECK_FALSE(m.in_vocab("selten"));
  const double oov_ce = cross_entropy(m, sent("xyz qqq zzz"));
  const double unk_ce = cross_entropy(m, Sentence{"[UNK]"});
  CHECK(oov_ce == doctest::Approx(unk_ce).epsilon(1e-12));
}

TEST_CASE("pure unigram cross entropy is permutation invariant") {
  const std::vector<Sentence> samples = {sent("a a b c"), sent("b c c a")};
  const NGramModel m = train_lm(samples, 1, {1.0}, 0);
  const double ce1 = cross_entropy(m, sent("a b c c"));
  const double ce2 = cross_entropy(m, sent("c c b a"));
  CHECK(ce1 == doctest::Approx(ce2).epsilon(1e-12));
}

TEST_CASE("perplexity is exp of cross entropy") {
  const std::vector<Sentence> samples = {sent("a b c d e"), sent("b d a c e")};
  const NGramModel m = train_lm(samples, 2, {0.5, 0.5}, 0);
  const Sentence s = sent("a b d");
  const double ce = cross_entropy(m, s);
  CHECK(perplexity(m, s) ==
        doctest::Approx(std::exp(ce)).epsilon(1e-9));
}

TEST_CASE("raising a token's count never lowers its unigram probability") {
  for (int extra = 0; extra < 6; ++extra) {
    std::vector<Sentence> base = {sent("a b b c c c")};
    std::vector<Sentence> more = base;
    Sentence added{"a"};
    for (int i = 0; i < extra; ++i) more.push_back(added);
    const NGramModel m1 = train_lm(base, 1, {1.0}, 0);
    const NGramModel m2 = train_lm(more, 1, {1.0}, 0);
    const Sentence empty;
    CHECK(m2.cond_prob("a", empty) >= m1.cond_prob("a", empty) - 1e-15);
  }
}

TEST_CASE("sampling frequencies converge to model probabilities") {
  const std::vector<Sentence> samples = {
      sent("regen kommt"), sent("regen bleibt"), sent("wind kommt"),
      sent("regen kommt"), sent("sonne bleibt")};
  const NGramModel m = train_lm(samples, 2, {0.3, 0.7}, 0);
  const Sentence prompt = sent("regen");

  // Model distribution renormalized without [BOS], which sampling excludes.
  const auto& vocab = m.vocab();
  std::vector<double> probs = m.full_conditional(prompt);
  double z = 0.0;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab[i] == kBos) probs[i] = 0.0;
    z += probs[i];
  }

  const int n = 10000;
  std::map<std::string, int> hits;
  for (int i = 0; i < n; ++i) {
    const Sentence cont = sample_continuation(m, prompt, 1, 1.0, 1000 + i);
    REQUIRE(cont.size() == 1);
    ++hits[cont[0]];
  }
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const double p = probs[i] / z;
    const double expected = p * n;
    if (expected < 5.0) continue;  // too rare for the normal approximation
    const double se = std::sqrt(p * (1.0 - p) * n);
    const double observed = hits.count(vocab[i]) ? hits.at(vocab[i]) : 0;
    CHECK(std::abs(observed - expected) <= 3.0 * se + 1e-9);
  }
}

TEST_CASE("temperature zero is argmax with a dominant token") {
  std::vector<Sentence> samples;
  for (int i = 0; i < 9; ++i) samples.push_back(sent("x x x"));
  samples.push_back(sent("y"));
  const NGramModel m = train_lm(samples, 1, {1.0}, 0);
  const Sentence cont = sample_continuation(m, {}, 5, 0.0, 42);
  REQUIRE(cont.size() == 5);  // never emits [EOS], runs to the cap
  for (const Token& t : cont) CHECK(t == "x");
}

namespace {

// Independent interpolated-probability oracle, rebuilt from the raw samples
// with plain loops (no NGramModel machinery).
struct TinyOracle {
  int order;
  std::vector<double> lambdas;
  double alpha;
  std::map<std::string, std::map<std::string, long long>> counts;  // key: joined ctx
  std::map<std::string, long long> totals;
  std::set<std::string> vocab{"[SEP]", "[EOS]", "[UNK]", "[BOS]"};
  long long unigrams = 0;

  TinyOracle(const std::vector<Sentence>& samples, int order_,
             std::vector<double> lambdas_, double alpha_)
      : order(order_), lambdas(std::move(lambdas_)), alpha(alpha_) {
    for (const Sentence& s : samples) {
      Sentence padded(static_cast<std::size_t>(order - 1), "[BOS]");
      padded.insert(padded.end(), s.begin(), s.end());
      for (std::size_t pos = static_cast<std::size_t>(order - 1);
           pos < padded.size(); ++pos) {
        vocab.insert(padded[pos]);
        ++unigrams;
        for (int lvl = 0; lvl < order; ++lvl) {
          std::string key = std::to_string(lvl) + "|";
          for (int j = lvl; j >= 1; --j) key += padded[pos - static_cast<std::size_t>(j)] + " ";
          ++counts[key][padded[pos]];
          ++totals[key];
        }
      }
    }
  }

  double prob(const std::string& tok, const Sentence& ctx) const {
    double p = 0.0;
    double uni_w = lambdas[0];
    for (int lvl = order - 1; lvl >= 1; --lvl) {
      if (ctx.size() < static_cast<std::size_t>(lvl)) {
        uni_w += lambdas[static_cast<std::size_t>(lvl)];
        continue;
      }
      std::string key = std::to_string(lvl) + "|";
      for (int j = lvl; j >= 1; --j) key += ctx[ctx.size() - static_cast<std::size_t>(j)] + " ";
      auto it = counts.find(key);
      if (it == counts.end()) {
        uni_w += lambdas[static_cast<std::size_t>(lvl)];
        continue;
      }
      auto nit = it->second.find(tok);
      if (nit != it->second.end()) {
        p += lambdas[static_cast<std::size_t>(lvl)] *
             static_cast<double>(nit->second) /
             static_cast<double>(totals.at(key));
      }
    }
    const std::string uni_key = "0|";
    auto it = counts.find(uni_key);
    long long c = 0;
    if (it != counts.end()) {
      auto nit = it->second.find(tok);
      if (nit != it->second.end()) c = nit->second;
    }
    p += uni_w * (static_cast<double>(c) + alpha) /
         (static_cast<double>(unigrams) + alpha * static_cast<double>(vocab.size()));
    return p;
  }

  // Argmax walk (lexicographic ties, [BOS] excluded) until [EOS] or cap.
  Sentence walk(Sentence ctx, std::size_t cap) const {
    Sentence out;
    for (std::size_t step = 0; step < cap; ++step) {
      std::string best;
      double best_p = -1.0;
      for (const std::string& tok : vocab) {
        if (tok == "[BOS]") continue;
        const double p = prob(tok, ctx);
        if (p > best_p) {
          best_p = p;
          best = tok;
        }
      }
      out.push_back(best);
      ctx.push_back(best);
      if (best == "[EOS]") break;
    }
    return out;
  }
};

}  // namespace

TEST_CASE("near-greedy sampling follows the oracle argmax walk to [EOS]") {
  std::vector<Sentence> samples;
  for (int i = 0; i < 5; ++i) samples.push_back(sent("x y [EOS]"));
  const std::vector<double> lambdas{0.1, 0.3, 0.6};
  const NGramModel m = train_lm(samples, 3, lambdas, 0);

  const TinyOracle oracle(samples, 3, lambdas, 1.0);
  Sentence oracle_ctx{"[BOS]", "[BOS]", "x"};
  const Sentence expected = oracle.walk(oracle_ctx, 10);
  REQUIRE(!expected.empty());
  CHECK(expected.back() == "[EOS]");

  const Sentence greedy = sample_continuation(m, sent("x"), 10, 0.0, 1);
  CHECK(greedy == expected);
  // Temperature 0.01 concentrates enough to match the argmax walk too.
  const Sentence near_greedy = sample_continuation(m, sent("x"), 10, 0.01, 99);
  CHECK(near_greedy == expected);
  CHECK(near_greedy.back() == "[EOS]");
}

TEST_CASE("same seed gives the same continuation") {
  const std::vector<Sentence> samples = {sent("a b c [EOS]"), sent("b a c [EOS]"),
                                         sent("c b a [EOS]")};
  const NGramModel m = train_lm(samples, 2, {0.4, 0.6}, 0);
  const Sentence c1 = sample_continuation(m, sent("a"), 20, 1.0, 777);
  const Sentence c2 = sample_continuation(m, sent("a"), 20, 1.0, 777);
  CHECK(c1 == c2);
  // Distinct seeds are allowed to differ (and do on this fixture).
  bool any_diff = false;
  for (int s = 0; s < 20 && !any_diff; ++s) {
    any_diff = sample_continuation(m, sent("a"), 20, 1.0, s) != c1;
  }
  CHECK(any_diff);
}

TEST_CASE("reserved tokens participate in vocabulary and counts") {
  const std::vector<Sentence> samples = {sent("a [SEP] b [EOS]")};
  const NGramModel m = train_lm(samples, 2, {0.5, 0.5}, 0);
  CHECK(m.in_vocab("[SEP]"));
  CHECK(m.in_vocab("[EOS]"));
  // The [SEP] transition was counted: P([SEP] | a) is far above the floor.
  CHECK(m.cond_prob("[SEP]", sent("a")) > 0.4);
}

TEST_CASE("model JSON round-trips") {
  const std::vector<Sentence> samples = {sent("a b [SEP] c [EOS]"),
                                         sent("c a b [EOS]")};
  const NGramModel m = train_lm(samples, 3, {0.2, 0.3, 0.5}, 0);
  const NGramModel n = NGramModel::from_json(m.to_json());
  CHECK(n.to_json() == m.to_json());
  const Sentence ctx = sent("a b");
  for (const Token& t : m.vocab()) {
    CHECK(n.cond_prob(t, ctx) == doctest::Approx(m.cond_prob(t, ctx)).epsilon(1e-15));
  }
}

TEST_CASE("load_lm_samples accepts prompt-sample files with reserved tokens") {
  TempDir tmp;
  write_file(tmp.file("tuning.txt"), "a b [SEP] c d [EOS]\n\nx y [EOS]\n");
  const auto samples = load_lm_samples(tmp.file("tuning.txt"));
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].size() == 6);
}
