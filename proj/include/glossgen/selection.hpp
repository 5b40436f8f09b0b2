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
// Cross-entropy-difference data selection: score each pool sentence by
// H_in(s) - H_gen(s) in nats per token; lower scores are more in-domain.

#ifndef GLOSSGEN_SELECTION_HPP_
#define GLOSSGEN_SELECTION_HPP_

#include <cstddef>
#include <vector>

#include "glossgen/corpus.hpp"
#include "glossgen/ngram_lm.hpp"

namespace glossgen {

struct ScoredSentence {
  Sentence sentence;
  double score = 0.0;       // nats per token
  std::size_t pool_index = 0;
};

struct SelectionResult {
  // Ascending by score, ties broken by original pool order.
  std::vector<ScoredSentence> scored;
  // First n of scored, re-ordered to the original pool order.
  MonoCorpus selected;
};

double moore_lewis_score(const Sentence& sentence, const NGramModel& lm_in,
                         const NGramModel& lm_gen);

SelectionResult select_top(const MonoCorpus& pool, const NGramModel& lm_in,
                           const NGramModel& lm_gen, std::size_t n);

// Same selection from precomputed scores (scores[i] belongs to pool
// sentence i). Lets callers study score transformations directly.
SelectionResult select_top_scored(const MonoCorpus& pool,
                                  const std::vector<double>& scores,
                                  std::size_t n);

// TSV "score<TAB>sentence", ascending.
std::string scored_tsv(const SelectionResult& result);

}  // namespace glossgen

#endif  // GLOSSGEN_SELECTION_HPP_
