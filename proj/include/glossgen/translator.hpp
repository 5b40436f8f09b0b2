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
// Desk-scale back-translation: IBM Model 1 lexical tables trained with EM on
// text->gloss pairs, monotone greedy decoding, and synthesis of mixed
// authentic+synthetic training corpora. A subprocess backend slot admits a
// real seq2seq translator without code changes.

#ifndef GLOSSGEN_TRANSLATOR_HPP_
#define GLOSSGEN_TRANSLATOR_HPP_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "glossgen/corpus.hpp"

namespace glossgen {

// Special source token every sentence is augmented with; gloss words with no
// textual counterpart align to it.
inline constexpr std::string_view kNullWord = "NULL";

// Lexical probabilities t(target | source); rows sum to 1.
struct TranslationTable {
  std::map<std::string, std::map<std::string, double>> t;

  bool has_source(const std::string& source) const {
    return t.find(source) != t.end();
  }
};

using TranslatorBackend = std::function<Sentence(const Sentence&)>;

struct SynthesisPlan {
  std::size_t ratio = 1;  // synthetic-to-authentic multiple R
  std::uint64_t shuffle_seed = 1;
};

struct SynthesisResult {
  ParallelCorpus train;     // shuffled mix of authentic + R*N synthetic
  ParallelCorpus finetune;  // the untouched authentic pairs
};

// Classic IBM Model 1 EM over (source = text side + NULL, target = gloss
// side). Initialization is uniform over co-occurring pairs; deterministic.
// When ll_trace is given it receives the corpus log-likelihood under the
// parameters at the start of each iteration (length = iterations).
TranslationTable train_ibm1(const ParallelCorpus& parallel, int iterations,
                            std::vector<double>* ll_trace = nullptr);

// Corpus log-likelihood under the standard Model 1 decomposition, including
// the 1/(l+1)^m alignment normalizer.
double ibm1_log_likelihood(const TranslationTable& table,
                           const ParallelCorpus& parallel);

// Monotone lexical decoding: each source token maps to its argmax target
// (ties lexicographic); unseen tokens and tokens whose best probability falls
// below drop_threshold are dropped. An empty result becomes a single [UNK].
Sentence translate_greedy(const TranslationTable& table,
                          const Sentence& sentence,
                          double drop_threshold = 0.3);

// Pairs (gloss = backend(text), text) in corpus order. Backend failures are
// rethrown with the failing sentence index.
ParallelCorpus back_translate(const TranslatorBackend& backend,
                              const MonoCorpus& mono);

TranslatorBackend make_table_backend(const TranslationTable& table,
                                     double drop_threshold = 0.3);

// train = shuffle(authentic + first R*N synthetic pairs); finetune =
// authentic unchanged. Requires |synthetic| >= R * |authentic|.
SynthesisResult synthesize(const ParallelCorpus& authentic,
                           const ParallelCorpus& synthetic,
                           const SynthesisPlan& plan);

// TSV "source<TAB>target<TAB>prob", sorted, full double precision.
std::string table_tsv(const TranslationTable& table);
TranslationTable table_from_tsv(const std::string& text);
void save_table(const TranslationTable& table, const std::string& path);
TranslationTable load_table(const std::string& path);

}  // namespace glossgen

#endif  // GLOSSGEN_TRANSLATOR_HPP_
