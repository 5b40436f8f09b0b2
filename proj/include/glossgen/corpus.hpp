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
// Monolingual and parallel corpora: loading, sampling, vocabulary statistics.
// All types are immutable after construction; operations are pure functions
// of their inputs plus an explicit seed.

#ifndef GLOSSGEN_CORPUS_HPP_
#define GLOSSGEN_CORPUS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "glossgen/text.hpp"

namespace glossgen {

enum class DomainLabel { kAuthentic, kPgen, kSelected, kGeneral, kOther };

std::string to_string(DomainLabel label);

// One sentence per line, tokens whitespace-separated, load order preserved.
struct MonoCorpus {
  std::vector<Sentence> sentences;
  std::string name;
  DomainLabel domain_label = DomainLabel::kOther;

  std::size_t size() const { return sentences.size(); }
};

struct GlossTextPair {
  Sentence gloss;
  Sentence text;
};

// Aligned gloss/text pairs, both sides non-empty.
struct ParallelCorpus {
  std::vector<GlossTextPair> pairs;
  std::string name;

  std::size_t size() const { return pairs.size(); }

  // The spoken-text side as a monolingual corpus (prompting, LM training).
  MonoCorpus text_side(const std::string& corpus_name = "text") const;
  MonoCorpus gloss_side(const std::string& corpus_name = "gloss") const;
};

struct VocabStats {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total_tokens = 0;
  // Words sorted by descending count, ties broken lexicographically.
  std::vector<std::string> rank_order;
};

// Loads a monolingual file: UTF-8, one sentence per line. Blank lines are
// skipped (the skip count is reported via *skipped_lines when given). A file
// with zero usable lines is a DataError, as is any literal [SEP]/[EOS] token.
MonoCorpus load_mono(const std::string& path, bool lowercase = false,
                     DomainLabel label = DomainLabel::kOther,
                     std::size_t* skipped_lines = nullptr);

// Builds a corpus from in-memory lines; shares all validation with load_mono.
MonoCorpus mono_from_lines(const std::vector<std::string>& lines,
                           const std::string& name, bool lowercase = false,
                           DomainLabel label = DomainLabel::kOther,
                           std::size_t* skipped_lines = nullptr);

// Loads a parallel TSV: exactly one tab per line, "gloss<TAB>text", both
// sides non-empty after tokenization. Errors name the offending line number.
ParallelCorpus load_parallel(const std::string& path);

ParallelCorpus parallel_from_lines(const std::vector<std::string>& lines,
                                   const std::string& name);

VocabStats vocab_stats(const MonoCorpus& corpus);

// Uniform sample of n sentences without replacement; output keeps the
// original relative order. Deterministic for a fixed seed.
MonoCorpus sample_corpus(const MonoCorpus& corpus, std::size_t n,
                         std::uint64_t seed);

// One sentence per line, tokens joined with single spaces, trailing newline.
void save_mono(const MonoCorpus& corpus, const std::string& path);
std::string serialize_mono(const MonoCorpus& corpus);

// "gloss<TAB>text" lines.
void save_parallel(const ParallelCorpus& corpus, const std::string& path);
std::string serialize_parallel(const ParallelCorpus& corpus);

// JSON object {word: count, ...} plus a "_total" key.
std::string vocab_stats_json(const VocabStats& stats);

}  // namespace glossgen

#endif  // GLOSSGEN_CORPUS_HPP_
