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
// End-to-end checks of the command line binary: exit codes, file outputs,
// and the external backend protocol.

#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>

#include "glossgen/corpus.hpp"

#include "json.hpp"

#include "helpers.hpp"

using namespace glossgen;
using namespace testutil;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("stats writes counts JSON") {
  TempDir tmp;
  const std::string out = tmp.file("stats.json");
  REQUIRE(run_cli("stats --in " + toy_indomain() + " --out " + out) == 0);
  const nlohmann::json j = nlohmann::json::parse(read_file(out));
  const VocabStats stats = vocab_stats(load_mono(toy_indomain()));
  CHECK(j.at("_total").get<std::int64_t>() == stats.total_tokens);
  CHECK(j.at("regen").get<std::int64_t>() == stats.counts.at("regen"));
}

TEST_CASE("exit codes: usage 1, data 2, backend 3") {
  TempDir tmp;
  CHECK(run_cli("no-such-subcommand") == 1);
  CHECK(run_cli("stats --bogus-flag x") == 1);
  CHECK(run_cli("stats --in " + tmp.file("missing.txt")) == 2);

  write_file(tmp.file("bad.tsv"), "a\tb\tc\n");
  CHECK(run_cli("train-bt --parallel " + tmp.file("bad.tsv") + " --out " +
                tmp.file("t.tsv")) == 2);

  // Child that exits without answering.
  write_file(tmp.file("mono.txt"), "a b c\nd e f\n");
  CHECK(run_cli("back-translate --mono " + tmp.file("mono.txt") +
                " --backend external:true --out " + tmp.file("o.tsv")) == 3);
}

TEST_CASE("back-translate with an external cat backend echoes the text") {
  TempDir tmp;
  write_file(tmp.file("mono.txt"), "a b\nc d e\n");
  REQUIRE(run_cli("back-translate --mono " + tmp.file("mono.txt") +
                  " --backend external:cat --out " + tmp.file("bt.tsv")) == 0);
  const ParallelCorpus out = load_parallel(tmp.file("bt.tsv"));
  REQUIRE(out.size() == 2);
  CHECK(out.pairs[0].gloss == out.pairs[0].text);
  CHECK(out.pairs[1].gloss == out.pairs[1].text);
}

TEST_CASE("train-bt then back-translate with the builtin table backend") {
  TempDir tmp;
  REQUIRE(run_cli("train-bt --parallel " + toy_parallel() + " --iterations 10 --out " +
                  tmp.file("table.tsv")) == 0);
  REQUIRE(run_cli("back-translate --mono " + toy_indomain() + " --table " +
                  tmp.file("table.tsv") + " --out " + tmp.file("bt.tsv")) == 0);
  const ParallelCorpus out = load_parallel(tmp.file("bt.tsv"));
  const MonoCorpus mono = load_mono(toy_indomain());
  REQUIRE(out.size() == mono.size());
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(out.pairs[i].text == mono.sentences[i]);  // text side verbatim
  }
}

TEST_CASE("build-prompts + train-lm + generate chain on files") {
  TempDir tmp;
  REQUIRE(run_cli("build-prompts --in " + toy_indomain() +
                  " --k 5 --count 300 --seed 3 --mode tuning --out " +
                  tmp.file("tuning.txt")) == 0);
  REQUIRE(run_cli("train-lm --in " + tmp.file("tuning.txt") +
                  " --order 3 --unk-threshold 0 --out " + tmp.file("lm.json")) == 0);
  REQUIRE(run_cli("generate --source " + toy_indomain() + " --model " +
                  tmp.file("lm.json") +
                  " --k 5 --target-size 50 --seed 9 --attempt-budget 2000 --out " +
                  tmp.file("gen.txt")) == 0);
  const MonoCorpus generated = load_mono(tmp.file("gen.txt"));
  CHECK(generated.size() == 50);
}

TEST_CASE("generate with the external cat backend recycles prompt sentences") {
  TempDir tmp;
  // cat echoes the prompt, whose k-1 sentences all end in [SEP]; with dedup
  // off they are harvested as candidates.
  REQUIRE(run_cli("generate --source " + toy_indomain() +
                  " --backend external:cat --k 3 --target-size 10 --seed 4"
                  " --no-dedup-within --no-dedup-authentic --out " +
                  tmp.file("gen.txt")) == 0);
  const MonoCorpus generated = load_mono(tmp.file("gen.txt"));
  CHECK(generated.size() == 10);
  const MonoCorpus source = load_mono(toy_indomain());
  std::set<std::string> source_set;
  for (const Sentence& s : source.sentences) source_set.insert(join(s));
  for (const Sentence& s : generated.sentences) {
    CHECK(source_set.count(join(s)) == 1);
  }
}

TEST_CASE("evaluate reports perfect scores for identical files") {
  TempDir tmp;
  REQUIRE(run_cli("evaluate --hyp " + toy_indomain() + " --ref " + toy_indomain() +
                  " --train-text " + toy_indomain() + " --out " +
                  tmp.file("report.json")) == 0);
  const nlohmann::json j = nlohmann::json::parse(read_file(tmp.file("report.json")));
  CHECK(j.at("bleu")[3].get<double>() == doctest::Approx(100.0));
  CHECK(j.at("rouge_l").get<double>() == doctest::Approx(100.0));
  CHECK(j.at("buckets").at("length").contains("short"));
}

TEST_CASE("synthesize writes train and finetune files of the right size") {
  TempDir tmp;
  REQUIRE(run_cli("synthesize --authentic " + toy_parallel() + " --synthetic " +
                  toy_parallel() + " --ratio 1 --shuffle-seed 11 --train-out " +
                  tmp.file("train.tsv") + " --finetune-out " + tmp.file("ft.tsv")) == 0);
  CHECK(load_parallel(tmp.file("train.tsv")).size() == 1000);
  CHECK(load_parallel(tmp.file("ft.tsv")).size() == 500);
}

TEST_CASE("select writes the scored TSV and the selected corpus") {
  TempDir tmp;
  REQUIRE(run_cli("select --pool " + toy_general() + " --in-domain " + toy_indomain() +
                  " --n 40 --out " + tmp.file("sel.txt") + " --scored-out " +
                  tmp.file("scored.tsv")) == 0);
  CHECK(load_mono(tmp.file("sel.txt")).size() == 40);
  const std::string scored = read_file(tmp.file("scored.tsv"));
  CHECK(std::count(scored.begin(), scored.end(), '\n') == 500);
}

TEST_CASE("sweep over one value matches a direct pipeline run") {
  TempDir tmp;
  REQUIRE(run_cli("sweep --config " + toy_config() + " --axis ratio --values 2 --out " +
                  tmp.file("sweep")) == 0);
  REQUIRE(run_cli("pipeline --config " + toy_config() + " --ratio 2 --out " +
                  tmp.file("direct")) == 0);
  CHECK(read_file(tmp.file("sweep") + "/ratio_2/manifest.json") ==
        read_file(tmp.file("direct") + "/manifest.json"));
  const std::string summary = read_file(tmp.file("sweep") + "/summary.tsv");
  CHECK(summary.find("\n2\t") != std::string::npos);
}

TEST_CASE("a manifest reproduces its run when used as the config") {
  TempDir tmp;
  REQUIRE(run_cli("pipeline --config " + toy_config() + " --out " + tmp.file("a")) == 0);
  REQUIRE(run_cli("pipeline --config " + tmp.file("a") + "/manifest.json --out " +
                  tmp.file("b")) == 0);
  for (const std::string name :
       {"generated.txt", "train.tsv", "finetune.tsv", "manifest.json"}) {
    CHECK(read_file(tmp.file("a") + "/" + name) ==
          read_file(tmp.file("b") + "/" + name));
  }
}

TEST_CASE("sweep over k accepts 0 as unconditional generation") {
  TempDir tmp;
  REQUIRE(run_cli("sweep --config " + toy_config() + " --axis k --values 0,1 --out " +
                  tmp.file("sweep")) == 0);
  // k = 0 and k = 1 both mean the empty prompt, so the runs coincide.
  CHECK(read_file(tmp.file("sweep") + "/k_0/generated.txt") ==
        read_file(tmp.file("sweep") + "/k_1/generated.txt"));
}

TEST_CASE("parallel sweep produces the same artifacts as a sequential one") {
  TempDir tmp;
  REQUIRE(run_cli("sweep --config " + toy_config() +
                  " --axis ratio --values 1,2 --out " + tmp.file("seq")) == 0);
  REQUIRE(run_cli("sweep --config " + toy_config() +
                  " --axis ratio --values 1,2 --parallel --out " + tmp.file("par")) == 0);
  for (const std::string dir : {"ratio_1", "ratio_2"}) {
    CHECK(read_file(tmp.file("seq") + "/" + dir + "/manifest.json") ==
          read_file(tmp.file("par") + "/" + dir + "/manifest.json"));
  }
  CHECK(read_file(tmp.file("seq") + "/summary.tsv") ==
        read_file(tmp.file("par") + "/summary.tsv"));
}

TEST_CASE("sweep records failing values and continues") {
  TempDir tmp;
  // ratio 0 is invalid and must not abort the remaining values.
  REQUIRE(run_cli("sweep --config " + toy_config() + " --axis ratio --values 0,1 --out " +
                  tmp.file("sweep")) == 0);
  const std::string summary = read_file(tmp.file("sweep") + "/summary.tsv");
  CHECK(summary.find("ratio must be >= 1") != std::string::npos);
  CHECK(std::filesystem::exists(tmp.file("sweep") + "/ratio_1/manifest.json"));
}
