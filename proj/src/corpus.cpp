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

#include "glossgen/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "glossgen/errors.hpp"
#include "glossgen/rng.hpp"

#include "json.hpp"

namespace glossgen {

std::string to_string(DomainLabel label) {
  switch (label) {
    case DomainLabel::kAuthentic: return "authentic";
    case DomainLabel::kPgen: return "pgen";
    case DomainLabel::kSelected: return "selected";
    case DomainLabel::kGeneral: return "general";
    case DomainLabel::kOther: return "other";
  }
  return "other";
}

MonoCorpus ParallelCorpus::text_side(const std::string& corpus_name) const {
  MonoCorpus out;
  out.name = corpus_name;
  out.domain_label = DomainLabel::kAuthentic;
  out.sentences.reserve(pairs.size());
  for (const auto& p : pairs) out.sentences.push_back(p.text);
  return out;
}

MonoCorpus ParallelCorpus::gloss_side(const std::string& corpus_name) const {
  MonoCorpus out;
  out.name = corpus_name;
  out.domain_label = DomainLabel::kAuthentic;
  out.sentences.reserve(pairs.size());
  for (const auto& p : pairs) out.sentences.push_back(p.gloss);
  return out;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Loaded corpora must not contain the prompt delimiters; those are injected
// only when prompt samples are built.
void check_loadable_token(const Token& tok, const std::string& name,
                          std::size_t line_no) {
  if (tok == kSep || tok == kEos) {
    throw DataError(name + ":" + std::to_string(line_no) +
                    ": reserved token '" + tok + "' in input");
  }
}

}  // namespace

MonoCorpus mono_from_lines(const std::vector<std::string>& lines,
                           const std::string& name, bool lowercase,
                           DomainLabel label, std::size_t* skipped_lines) {
  MonoCorpus out;
  out.name = name;
  out.domain_label = label;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Sentence toks =
        lowercase ? split_ws(ascii_lower(lines[i])) : split_ws(lines[i]);
    if (toks.empty()) {
      ++skipped;
      continue;
    }
    for (const Token& t : toks) check_loadable_token(t, name, i + 1);
    out.sentences.push_back(std::move(toks));
  }
  if (skipped_lines) *skipped_lines = skipped;
  if (out.sentences.empty()) {
    throw DataError(name + ": no usable lines");
  }
  return out;
}

MonoCorpus load_mono(const std::string& path, bool lowercase,
                     DomainLabel label, std::size_t* skipped_lines) {
  return mono_from_lines(read_lines(path), path, lowercase, label,
                         skipped_lines);
}

ParallelCorpus parallel_from_lines(const std::vector<std::string>& lines,
                                   const std::string& name) {
  ParallelCorpus out;
  out.name = name;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::size_t tabs =
        static_cast<std::size_t>(std::count(line.begin(), line.end(), '\t'));
    if (tabs != 1) {
      throw DataError(name + ":" + std::to_string(i + 1) + ": expected 1 tab, found " +
                      std::to_string(tabs));
    }
    const std::size_t cut = line.find('\t');
    GlossTextPair pair;
    pair.gloss = split_ws(line.substr(0, cut));
    pair.text = split_ws(line.substr(cut + 1));
    if (pair.gloss.empty() || pair.text.empty()) {
      throw DataError(name + ":" + std::to_string(i + 1) + ": empty " +
                      (pair.gloss.empty() ? "gloss" : "text") + " side");
    }
    for (const Token& t : pair.gloss) check_loadable_token(t, name, i + 1);
    for (const Token& t : pair.text) check_loadable_token(t, name, i + 1);
    out.pairs.push_back(std::move(pair));
  }
  if (out.pairs.empty()) throw DataError(name + ": no pairs");
  return out;
}

ParallelCorpus load_parallel(const std::string& path) {
  return parallel_from_lines(read_lines(path), path);
}

VocabStats vocab_stats(const MonoCorpus& corpus) {
  VocabStats stats;
  for (const Sentence& s : corpus.sentences) {
    for (const Token& t : s) {
      ++stats.counts[t];
      ++stats.total_tokens;
    }
  }
  stats.rank_order.reserve(stats.counts.size());
  for (const auto& [word, count] : stats.counts) stats.rank_order.push_back(word);
  std::sort(stats.rank_order.begin(), stats.rank_order.end(),
            [&](const std::string& a, const std::string& b) {
              const std::int64_t ca = stats.counts.at(a);
              const std::int64_t cb = stats.counts.at(b);
              if (ca != cb) return ca > cb;
              return a < b;
            });
  return stats;
}

MonoCorpus sample_corpus(const MonoCorpus& corpus, std::size_t n,
                         std::uint64_t seed) {
  if (n < 1 || n > corpus.size()) {
    throw DataError("sample size " + std::to_string(n) + " out of range [1, " +
                    std::to_string(corpus.size()) + "]");
  }
  std::vector<std::size_t> idx(corpus.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.next_below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());

  MonoCorpus out;
  out.name = corpus.name + "-sample" + std::to_string(n);
  out.domain_label = corpus.domain_label;
  out.sentences.reserve(n);
  for (std::size_t i : idx) out.sentences.push_back(corpus.sentences[i]);
  return out;
}

std::string serialize_mono(const MonoCorpus& corpus) {
  std::string out;
  for (const Sentence& s : corpus.sentences) {
    out += join(s);
    out.push_back('\n');
  }
  return out;
}

void save_mono(const MonoCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << serialize_mono(corpus);
}

std::string serialize_parallel(const ParallelCorpus& corpus) {
  std::string out;
  for (const GlossTextPair& p : corpus.pairs) {
    out += join(p.gloss);
    out.push_back('\t');
    out += join(p.text);
    out.push_back('\n');
  }
  return out;
}

void save_parallel(const ParallelCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << serialize_parallel(corpus);
}

std::string vocab_stats_json(const VocabStats& stats) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [word, count] : stats.counts) j[word] = count;
  j["_total"] = stats.total_tokens;
  return j.dump(2) + "\n";
}

}  // namespace glossgen
