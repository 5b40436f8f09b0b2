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

#include "glossgen/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "glossgen/errors.hpp"
#include "glossgen/rng.hpp"

#include "json.hpp"

namespace glossgen {

namespace {

constexpr char kCtxSep = '\x01';

std::string context_key(std::span<const Token> ctx) {
  std::string key;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) key.push_back(kCtxSep);
    key += ctx[i];
  }
  return key;
}

void check_lambdas(const std::vector<double>& lambdas, int order) {
  if (static_cast<int>(lambdas.size()) != order) {
    throw DataError("lambdas length " + std::to_string(lambdas.size()) +
                    " does not match order " + std::to_string(order));
  }
  double sum = 0.0;
  for (double l : lambdas) {
    if (l < 0.0) throw DataError("negative interpolation weight");
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DataError("interpolation weights must sum to 1");
  }
}

}  // namespace

NGramModel NGramModel::train(const std::vector<Sentence>& samples, int order,
                             std::vector<double> lambdas,
                             std::int64_t unk_threshold, double alpha) {
  if (order < 1) throw DataError("order must be >= 1");
  if (samples.empty()) throw DataError("empty training sample set");
  if (unk_threshold < 0) throw DataError("unk_threshold must be >= 0");
  if (alpha < 0.0) throw DataError("alpha must be >= 0");
  check_lambdas(lambdas, order);

  // Raw unigram counts decide the [UNK] collapse; reserved tokens are kept.
  std::map<Token, std::int64_t> raw;
  for (const Sentence& s : samples) {
    for (const Token& t : s) ++raw[t];
  }
  std::unordered_set<std::string> kept;
  for (const auto& [tok, count] : raw) {
    if (is_reserved(tok) || count > unk_threshold) kept.insert(tok);
  }

  NGramModel model;
  model.order_ = order;
  model.lambdas_ = std::move(lambdas);
  model.alpha_ = alpha;
  model.levels_.resize(static_cast<std::size_t>(order));

  std::set<Token> vocab(
      {std::string(kSep), std::string(kEos), std::string(kUnk), std::string(kBos)});
  vocab.insert(kept.begin(), kept.end());
  model.vocab_.assign(vocab.begin(), vocab.end());
  model.rebuild_index();

  const Token unk{kUnk};
  for (const Sentence& s : samples) {
    Sentence mapped;
    mapped.reserve(s.size() + static_cast<std::size_t>(order - 1));
    mapped.assign(static_cast<std::size_t>(order - 1), Token(kBos));
    for (const Token& t : s) mapped.push_back(kept.count(t) ? t : unk);
    const std::size_t pad = static_cast<std::size_t>(order - 1);
    for (std::size_t pos = pad; pos < mapped.size(); ++pos) {
      for (int level = 0; level < order; ++level) {
        std::span<const Token> ctx(&mapped[pos - static_cast<std::size_t>(level)],
                                   static_cast<std::size_t>(level));
        ContextCounts& cc = model.levels_[static_cast<std::size_t>(level)]
                                         [context_key(ctx)];
        ++cc.next[mapped[pos]];
        ++cc.total;
      }
    }
  }
  model.unigram_total_ = model.levels_[0].at("").total;
  return model;
}

void NGramModel::rebuild_index() {
  vocab_index_.clear();
  for (std::size_t i = 0; i < vocab_.size(); ++i) vocab_index_[vocab_[i]] = i;
}

const Token& NGramModel::map_token(const Token& tok) const {
  static const Token unk{kUnk};
  return in_vocab(tok) ? tok : unk;
}

double NGramModel::cond_prob(const Token& token,
                             std::span<const Token> context) const {
  const Token& tok = map_token(token);
  const std::size_t ctx_len = std::min(
      context.size(), static_cast<std::size_t>(order_ - 1));
  std::span<const Token> ctx = context.last(ctx_len);

  double prob = 0.0;
  double unigram_weight = lambdas_[0];
  Sentence mapped_ctx;  // built lazily only when higher orders exist
  if (order_ > 1) {
    mapped_ctx.reserve(ctx.size());
    for (const Token& t : ctx) mapped_ctx.push_back(map_token(t));
  }
  for (int level = order_ - 1; level >= 1; --level) {
    if (static_cast<std::size_t>(level) > mapped_ctx.size()) {
      unigram_weight += lambdas_[static_cast<std::size_t>(level)];
      continue;
    }
    std::span<const Token> suffix(&mapped_ctx[mapped_ctx.size() -
                                              static_cast<std::size_t>(level)],
                                  static_cast<std::size_t>(level));
    const auto& lvl = levels_[static_cast<std::size_t>(level)];
    auto it = lvl.find(context_key(suffix));
    if (it == lvl.end()) {
      unigram_weight += lambdas_[static_cast<std::size_t>(level)];
      continue;
    }
    auto nit = it->second.next.find(tok);
    if (nit != it->second.next.end()) {
      prob += lambdas_[static_cast<std::size_t>(level)] *
              static_cast<double>(nit->second) /
              static_cast<double>(it->second.total);
    }
  }

  const auto& uni = levels_[0].at("");
  auto uit = uni.next.find(tok);
  const double count = uit == uni.next.end() ? 0.0 : static_cast<double>(uit->second);
  const double denom = static_cast<double>(unigram_total_) +
                       alpha_ * static_cast<double>(vocab_.size());
  prob += unigram_weight * (count + alpha_) / denom;
  return prob;
}

std::vector<double> NGramModel::full_conditional(
    std::span<const Token> context) const {
  const std::size_t ctx_len = std::min(
      context.size(), static_cast<std::size_t>(order_ - 1));
  std::span<const Token> ctx = context.last(ctx_len);
  Sentence mapped_ctx;
  mapped_ctx.reserve(ctx.size());
  for (const Token& t : ctx) mapped_ctx.push_back(map_token(t));

  double unigram_weight = lambdas_[0];
  std::vector<double> probs(vocab_.size(), 0.0);
  for (int level = order_ - 1; level >= 1; --level) {
    if (static_cast<std::size_t>(level) > mapped_ctx.size()) {
      unigram_weight += lambdas_[static_cast<std::size_t>(level)];
      continue;
    }
    std::span<const Token> suffix(&mapped_ctx[mapped_ctx.size() -
                                              static_cast<std::size_t>(level)],
                                  static_cast<std::size_t>(level));
    const auto& lvl = levels_[static_cast<std::size_t>(level)];
    auto it = lvl.find(context_key(suffix));
    if (it == lvl.end()) {
      unigram_weight += lambdas_[static_cast<std::size_t>(level)];
      continue;
    }
    const double total = static_cast<double>(it->second.total);
    const double weight = lambdas_[static_cast<std::size_t>(level)];
    for (const auto& [tok, count] : it->second.next) {
      probs[vocab_index_.at(tok)] += weight * static_cast<double>(count) / total;
    }
  }

  const auto& uni = levels_[0].at("");
  const double denom = static_cast<double>(unigram_total_) +
                       alpha_ * static_cast<double>(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    auto it = uni.next.find(vocab_[i]);
    const double count = it == uni.next.end() ? 0.0 : static_cast<double>(it->second);
    probs[i] += unigram_weight * (count + alpha_) / denom;
  }
  return probs;
}

NGramModel train_lm(const std::vector<Sentence>& samples, int order,
                    const std::vector<double>& lambdas,
                    std::int64_t unk_threshold, double alpha) {
  return NGramModel::train(samples, order, lambdas, unk_threshold, alpha);
}

std::vector<Sentence> load_lm_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<Sentence> samples;
  std::string line;
  while (std::getline(in, line)) {
    Sentence toks = split_ws(line);
    if (!toks.empty()) samples.push_back(std::move(toks));
  }
  if (samples.empty()) throw DataError(path + ": no usable lines");
  return samples;
}

double cross_entropy(const NGramModel& model, const Sentence& sentence) {
  if (sentence.empty()) throw DataError("cross_entropy of empty sentence");
  Sentence padded;
  const std::size_t pad = static_cast<std::size_t>(model.order() - 1);
  padded.reserve(sentence.size() + pad);
  padded.assign(pad, Token(kBos));
  for (const Token& t : sentence) padded.push_back(model.map_token(t));

  double nll = 0.0;
  for (std::size_t pos = pad; pos < padded.size(); ++pos) {
    std::span<const Token> ctx(padded.data(), pos);
    nll -= std::log(model.cond_prob(padded[pos], ctx));
  }
  return nll / static_cast<double>(sentence.size());
}

double perplexity(const NGramModel& model, const Sentence& sentence) {
  return std::exp(cross_entropy(model, sentence));
}

Sentence sample_continuation(const NGramModel& model, const Sentence& prompt,
                             std::size_t max_new, double temperature,
                             std::uint64_t rng_seed) {
  if (max_new < 1) throw DataError("max_new must be >= 1");
  if (temperature < 0.0) throw DataError("temperature must be >= 0");

  const std::vector<Token>& vocab = model.vocab();
  std::size_t bos_index = vocab.size();
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab[i] == kBos) bos_index = i;
  }

  Sentence context;
  const std::size_t pad = static_cast<std::size_t>(model.order() - 1);
  context.assign(pad, Token(kBos));
  for (const Token& t : prompt) context.push_back(model.map_token(t));

  Rng rng(rng_seed);
  Sentence out;
  std::vector<double> weights(vocab.size());
  for (std::size_t step = 0; step < max_new; ++step) {
    std::vector<double> probs = model.full_conditional(context);
    if (bos_index < probs.size()) probs[bos_index] = 0.0;  // never emit [BOS]

    std::size_t pick = 0;
    if (temperature == 0.0) {
      for (std::size_t i = 1; i < probs.size(); ++i) {
        if (probs[i] > probs[pick]) pick = i;  // first max = lexicographic tie-break
      }
    } else {
      double max_log = -HUGE_VAL;
      for (double p : probs) {
        if (p > 0.0) max_log = std::max(max_log, std::log(p));
      }
      double total = 0.0;
      for (std::size_t i = 0; i < probs.size(); ++i) {
        weights[i] = probs[i] > 0.0
                         ? std::exp((std::log(probs[i]) - max_log) / temperature)
                         : 0.0;
        total += weights[i];
      }
      const double u = rng.next_unit() * total;
      double acc = 0.0;
      pick = probs.size() - 1;
      for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    }
    out.push_back(vocab[pick]);
    context.push_back(vocab[pick]);
    if (vocab[pick] == kEos) break;
  }
  return out;
}

std::string NGramModel::to_json() const {
  nlohmann::json j;
  j["order"] = order_;
  j["lambdas"] = lambdas_;
  j["alpha"] = alpha_;
  j["vocab"] = vocab_;
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& lvl : levels_) {
    nlohmann::json level = nlohmann::json::object();
    // std::map keys below give a deterministic dump; context keys are sorted
    // by nlohmann's object ordering.
    for (const auto& [ctx, cc] : lvl) {
      nlohmann::json next = nlohmann::json::object();
      for (const auto& [tok, count] : cc.next) next[tok] = count;
      level[ctx] = std::move(next);
    }
    levels.push_back(std::move(level));
  }
  j["counts"] = std::move(levels);
  return j.dump(2) + "\n";
}

NGramModel NGramModel::from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad model JSON: ") + e.what());
  }
  NGramModel model;
  try {
    model.order_ = j.at("order").get<int>();
    model.lambdas_ = j.at("lambdas").get<std::vector<double>>();
    model.alpha_ = j.at("alpha").get<double>();
    model.vocab_ = j.at("vocab").get<std::vector<Token>>();
    const auto& levels = j.at("counts");
    model.levels_.resize(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
      for (auto it = levels[i].begin(); it != levels[i].end(); ++it) {
        ContextCounts cc;
        for (auto nit = it.value().begin(); nit != it.value().end(); ++nit) {
          const std::int64_t c = nit.value().get<std::int64_t>();
          cc.next[nit.key()] = c;
          cc.total += c;
        }
        model.levels_[i][it.key()] = std::move(cc);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad model JSON: ") + e.what());
  }
  if (model.order_ < 1 ||
      model.levels_.size() != static_cast<std::size_t>(model.order_)) {
    throw DataError("model JSON: order/count levels mismatch");
  }
  check_lambdas(model.lambdas_, model.order_);
  std::sort(model.vocab_.begin(), model.vocab_.end());
  model.rebuild_index();
  auto uit = model.levels_[0].find("");
  if (uit == model.levels_[0].end()) {
    throw DataError("model JSON: missing unigram counts");
  }
  model.unigram_total_ = uit->second.total;
  return model;
}

void NGramModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << to_json();
}

NGramModel NGramModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace glossgen
