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

#ifndef GLOSSGEN_TESTS_HELPERS_HPP_
#define GLOSSGEN_TESTS_HELPERS_HPP_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "glossgen/corpus.hpp"

namespace testutil {

inline std::string data_dir() { return GLOSSGEN_DATA_DIR; }
inline std::string cli_path() { return GLOSSGEN_CLI; }

inline std::string toy_indomain() { return data_dir() + "/toy/indomain.txt"; }
inline std::string toy_general() { return data_dir() + "/toy/general.txt"; }
inline std::string toy_parallel() { return data_dir() + "/toy/parallel.tsv"; }
inline std::string toy_config() { return data_dir() + "/toy/config.json"; }

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    const auto tag = std::to_string(rd()) + "_" + std::to_string(counter++);
    path_ = std::filesystem::temp_directory_path() / ("glossgen_test_" + tag);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline glossgen::Sentence sent(const std::string& space_joined) {
  return glossgen::split_ws(space_joined);
}

inline glossgen::MonoCorpus corpus_of(const std::vector<std::string>& lines,
                                      const std::string& name = "test") {
  glossgen::MonoCorpus c;
  c.name = name;
  for (const std::string& line : lines) c.sentences.push_back(sent(line));
  return c;
}

}  // namespace testutil

#endif  // GLOSSGEN_TESTS_HELPERS_HPP_
