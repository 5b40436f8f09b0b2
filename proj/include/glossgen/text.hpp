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
// Token-level helpers and the reserved control tokens.

#ifndef GLOSSGEN_TEXT_HPP_
#define GLOSSGEN_TEXT_HPP_

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace glossgen {

using Token = std::string;
using Sentence = std::vector<Token>;

// Control tokens. [SEP]/[EOS] are injected by prompt construction, [BOS] pads
// n-gram contexts, [UNK] stands in for out-of-vocabulary words.
inline constexpr std::string_view kSep = "[SEP]";
inline constexpr std::string_view kEos = "[EOS]";
inline constexpr std::string_view kUnk = "[UNK]";
inline constexpr std::string_view kBos = "[BOS]";

inline bool is_reserved(std::string_view tok) {
  return tok == kSep || tok == kEos || tok == kUnk || tok == kBos;
}

// Splits on runs of whitespace (space, tab, CR, LF, VT, FF).
inline Sentence split_ws(std::string_view line) {
  Sentence out;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

inline std::string join(const Sentence& tokens, char sep = ' ') {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(sep);
    out += tokens[i];
  }
  return out;
}

// ASCII-only case fold; multi-byte UTF-8 sequences pass through untouched.
inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace glossgen

#endif  // GLOSSGEN_TEXT_HPP_
