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

#include "glossgen/selection.hpp"

#include <algorithm>
#include <cstdio>

#include "glossgen/errors.hpp"

namespace glossgen {

double moore_lewis_score(const Sentence& sentence, const NGramModel& lm_in,
                         const NGramModel& lm_gen) {
  return cross_entropy(lm_in, sentence) - cross_entropy(lm_gen, sentence);
}

SelectionResult select_top_scored(const MonoCorpus& pool,
                                  const std::vector<double>& scores,
                                  std::size_t n) {
  if (scores.size() != pool.size()) {
    throw DataError("scores/pool size mismatch");
  }
  if (n < 1 || n > pool.size()) {
    throw DataError("selection size " + std::to_string(n) +
                    " out of range [1, " + std::to_string(pool.size()) + "]");
  }
  SelectionResult result;
  result.scored.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    result.scored.push_back({pool.sentences[i], scores[i], i});
  }
  std::sort(result.scored.begin(), result.scored.end(),
            [](const ScoredSentence& a, const ScoredSentence& b) {
              if (a.score != b.score) return a.score < b.score;
              return a.pool_index < b.pool_index;
            });

  std::vector<std::size_t> chosen;
  chosen.reserve(n);
  for (std::size_t i = 0; i < n; ++i) chosen.push_back(result.scored[i].pool_index);
  std::sort(chosen.begin(), chosen.end());

  result.selected.name = pool.name + "-selected";
  result.selected.domain_label = DomainLabel::kSelected;
  result.selected.sentences.reserve(n);
  for (std::size_t i : chosen) {
    result.selected.sentences.push_back(pool.sentences[i]);
  }
  return result;
}

SelectionResult select_top(const MonoCorpus& pool, const NGramModel& lm_in,
                           const NGramModel& lm_gen, std::size_t n) {
  std::vector<double> scores;
  scores.reserve(pool.size());
  for (const Sentence& s : pool.sentences) {
    scores.push_back(moore_lewis_score(s, lm_in, lm_gen));
  }
  return select_top_scored(pool, scores, n);
}

std::string scored_tsv(const SelectionResult& result) {
  std::string out;
  char buf[64];
  for (const ScoredSentence& s : result.scored) {
    std::snprintf(buf, sizeof(buf), "%.6f", s.score);
    out += buf;
    out.push_back('\t');
    out += join(s.sentence);
    out.push_back('\n');
  }
  return out;
}

}  // namespace glossgen
