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

#include "glossgen/translator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "glossgen/errors.hpp"
#include "glossgen/rng.hpp"

namespace glossgen {

namespace {

// Source side of a pair: NULL + text tokens.
std::vector<std::string> source_tokens(const GlossTextPair& pair) {
  std::vector<std::string> out;
  out.reserve(pair.text.size() + 1);
  out.emplace_back(kNullWord);
  out.insert(out.end(), pair.text.begin(), pair.text.end());
  return out;
}

}  // namespace

TranslationTable train_ibm1(const ParallelCorpus& parallel, int iterations,
                            std::vector<double>* ll_trace) {
  if (iterations < 1) throw DataError("iterations must be >= 1");
  if (parallel.pairs.empty()) throw DataError("empty parallel corpus");
  if (ll_trace) ll_trace->clear();

  TranslationTable table;
  // Uniform initialization over co-occurring (source, target) pairs.
  for (const GlossTextPair& pair : parallel.pairs) {
    for (const std::string& s : source_tokens(pair)) {
      auto& row = table.t[s];
      for (const Token& g : pair.gloss) row[g];  // default 0, filled below
    }
  }
  for (auto& [s, row] : table.t) {
    const double uniform = 1.0 / static_cast<double>(row.size());
    for (auto& [g, p] : row) p = uniform;
  }

  for (int iter = 0; iter < iterations; ++iter) {
    if (ll_trace) ll_trace->push_back(ibm1_log_likelihood(table, parallel));
    std::map<std::string, std::map<std::string, double>> counts;
    std::map<std::string, double> totals;
    for (const GlossTextPair& pair : parallel.pairs) {
      const auto sources = source_tokens(pair);
      std::vector<const std::map<std::string, double>*> rows;
      rows.reserve(sources.size());
      for (const std::string& s : sources) rows.push_back(&table.t.at(s));
      for (const Token& g : pair.gloss) {
        double denom = 0.0;
        for (const auto* row : rows) denom += row->at(g);
        for (std::size_t i = 0; i < sources.size(); ++i) {
          const double delta = rows[i]->at(g) / denom;
          counts[sources[i]][g] += delta;
          totals[sources[i]] += delta;
        }
      }
    }
    for (auto& [s, row] : counts) {
      const double total = totals[s];
      auto& trow = table.t[s];
      for (auto& [g, c] : row) trow[g] = c / total;
    }
  }
  return table;
}

double ibm1_log_likelihood(const TranslationTable& table,
                           const ParallelCorpus& parallel) {
  double ll = 0.0;
  for (const GlossTextPair& pair : parallel.pairs) {
    const auto sources = source_tokens(pair);
    for (const Token& g : pair.gloss) {
      double p = 0.0;
      for (const std::string& s : sources) {
        auto sit = table.t.find(s);
        if (sit == table.t.end()) continue;
        auto git = sit->second.find(g);
        if (git != sit->second.end()) p += git->second;
      }
      ll += std::log(p) - std::log(static_cast<double>(sources.size()));
    }
  }
  return ll;
}

Sentence translate_greedy(const TranslationTable& table,
                          const Sentence& sentence, double drop_threshold) {
  if (sentence.empty()) throw DataError("translate_greedy of empty sentence");
  Sentence out;
  for (const Token& tok : sentence) {
    auto sit = table.t.find(tok);
    if (sit == table.t.end() || sit->second.empty()) continue;
    // std::map order makes the first strict max the lexicographic tie-winner.
    const std::string* best = nullptr;
    double best_p = -1.0;
    for (const auto& [g, p] : sit->second) {
      if (p > best_p) {
        best_p = p;
        best = &g;
      }
    }
    if (best_p < drop_threshold) continue;
    out.push_back(*best);
  }
  if (out.empty()) out.emplace_back(kUnk);
  return out;
}

ParallelCorpus back_translate(const TranslatorBackend& backend,
                              const MonoCorpus& mono) {
  if (!backend) throw BackendError("null translator backend");
  if (mono.sentences.empty()) throw DataError("empty monolingual corpus");
  ParallelCorpus out;
  out.name = mono.name + "-bt";
  out.pairs.reserve(mono.size());
  for (std::size_t i = 0; i < mono.size(); ++i) {
    Sentence gloss;
    try {
      gloss = backend(mono.sentences[i]);
    } catch (const BackendError& e) {
      throw BackendError("sentence " + std::to_string(i) + ": " + e.what());
    }
    if (gloss.empty()) gloss.emplace_back(kUnk);
    out.pairs.push_back({std::move(gloss), mono.sentences[i]});
  }
  return out;
}

TranslatorBackend make_table_backend(const TranslationTable& table,
                                     double drop_threshold) {
  return [&table, drop_threshold](const Sentence& s) {
    return translate_greedy(table, s, drop_threshold);
  };
}

SynthesisResult synthesize(const ParallelCorpus& authentic,
                           const ParallelCorpus& synthetic,
                           const SynthesisPlan& plan) {
  if (plan.ratio < 1) throw DataError("ratio must be >= 1");
  if (authentic.pairs.empty()) throw DataError("empty authentic corpus");
  const std::size_t need = plan.ratio * authentic.size();
  if (synthetic.size() < need) {
    throw DataError("synthesis needs " + std::to_string(need) +
                    " synthetic pairs, got " + std::to_string(synthetic.size()));
  }

  SynthesisResult result;
  result.finetune = authentic;
  result.finetune.name = authentic.name + "-finetune";

  result.train.name = authentic.name + "-train";
  result.train.pairs = authentic.pairs;
  result.train.pairs.insert(result.train.pairs.end(), synthetic.pairs.begin(),
                            synthetic.pairs.begin() +
                                static_cast<std::ptrdiff_t>(need));
  Rng rng(plan.shuffle_seed);
  auto& pairs = result.train.pairs;
  for (std::size_t i = pairs.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(pairs[i - 1], pairs[j]);
  }
  return result;
}

std::string table_tsv(const TranslationTable& table) {
  std::string out;
  char buf[64];
  for (const auto& [s, row] : table.t) {
    for (const auto& [g, p] : row) {
      std::snprintf(buf, sizeof(buf), "%.17g", p);
      out += s;
      out.push_back('\t');
      out += g;
      out.push_back('\t');
      out += buf;
      out.push_back('\n');
    }
  }
  return out;
}

TranslationTable table_from_tsv(const std::string& text) {
  TranslationTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? std::string::npos
                                                   : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw DataError("table line " + std::to_string(line_no) +
                      ": expected source<TAB>target<TAB>prob");
    }
    const std::string source = line.substr(0, t1);
    const std::string target = line.substr(t1 + 1, t2 - t1 - 1);
    double prob = 0.0;
    try {
      prob = std::stod(line.substr(t2 + 1));
    } catch (const std::exception&) {
      throw DataError("table line " + std::to_string(line_no) + ": bad probability");
    }
    if (prob < 0.0 || source.empty() || target.empty()) {
      throw DataError("table line " + std::to_string(line_no) + ": invalid entry");
    }
    table.t[source][target] = prob;
  }
  if (table.t.empty()) throw DataError("empty translation table");
  return table;
}

void save_table(const TranslationTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << table_tsv(table);
}

TranslationTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return table_from_tsv(ss.str());
}

}  // namespace glossgen
