// Copyright (C) 2026 The advrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "advrank/cli/commands.hpp"
#include "advrank/cli/config.hpp"
#include "advrank/common/errors.hpp"
#include "advrank/corpus/corpus_io.hpp"
#include "advrank/eval/records.hpp"
#include "advrank/ranker/checkpoint.hpp"
#include "support.hpp"

namespace advrank {
namespace {

namespace fs = std::filesystem;

TEST(RunConfig, DefaultsAreTotalAndTyped) {
  const RunConfig c;
  EXPECT_EQ(c.get_size("eval.docs_per_group"), 10u);
  EXPECT_EQ(c.get_size_list("eval.length_grid"), (std::vector<std::size_t>{1, 3, 5, 7, 10, 15, 20}));
  EXPECT_EQ(c.get("eval.position_grid"), "start,end,middle,random,max_grad,min_grad");
  EXPECT_EQ(c.generator().vocab_size, GeneratorConfig{}.vocab_size);
  EXPECT_EQ(c.ranker(), RankerConfig{});
  const ExperimentPlan p = c.plan();
  EXPECT_EQ(p.methods.size(), 3u);
  EXPECT_EQ(p.attack.shortlist_k, AttackSpec{}.shortlist_k);
  for (const auto& [k, v] : c.values()) EXPECT_NE(k.find_first_of("= "), 0u);
}

TEST(RunConfig, MergeFileRules) {
  RunConfig c;
  std::stringstream ok("# comment\n\nattack.beam_width = 5\n  eval.methods=local,random\n");
  c.merge(ok, "test");
  EXPECT_EQ(c.attack().beam_width, 5u);
  EXPECT_EQ(c.plan().methods.size(), 2u);
  std::stringstream unknown("attack.beam = 5\n");
  EXPECT_THROW(c.merge(unknown, "test"), ConfigError);
  std::stringstream dup("seed=1\nseed=2\n");
  EXPECT_THROW(c.merge(dup, "test"), ConfigError);
  std::stringstream noeq("seed\n");
  EXPECT_THROW(c.merge(noeq, "test"), ConfigError);
}

TEST(RunConfig, ValueErrors) {
  RunConfig c;
  c.set("attack.n_tokens", "five");
  EXPECT_THROW(c.attack(), ConfigError);
  c = RunConfig{};
  c.set("eval.directions", "down");
  EXPECT_THROW(c.plan(), ConfigError);
  c = RunConfig{};
  c.set("deterministic", "maybe");
  EXPECT_THROW(c.threads(), ConfigError);
  c.set("deterministic", "true");
  c.set("threads", "8");
  EXPECT_EQ(c.threads(), 1u);
  EXPECT_THROW(c.set_assignment("nokey"), ConfigError);
  EXPECT_THROW(c.set("nope", "1"), ConfigError);
}

TEST(RunConfig, WriteIsSortedAndReloads) {
  RunConfig c;
  c.set("seed", "42");
  std::stringstream out;
  c.write(out);
  RunConfig back;
  std::stringstream in(out.str());
  back.merge(in, "resolved");
  EXPECT_EQ(back.values(), c.values());
  std::string prev, line;
  std::stringstream lines(out.str());
  while (std::getline(lines, line)) {
    EXPECT_LT(prev, line);
    prev = line;
  }
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("advrank_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    const auto& s = testing::tiny_setup();
    save_corpus(s.corpus, dir_ / "corpus.jsonl");
    save_model(s.model, dir_ / "model.rkr");
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  fs::path dir_;
  std::stringstream out_;
  std::stringstream err_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(out_.str().find("attack-local"), std::string::npos);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(err_.str().rfind("error kind=usage message=\"", 0), 0u);
  EXPECT_EQ(run({"ablate", "sideways"}), 2);
  EXPECT_EQ(run({"rank", "--out", (dir_ / "r").string()}), 1);
  EXPECT_EQ(err_.str().rfind("error kind=usage", 0), 0u);
  const std::string text = err_.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST_F(CliTest, VocabularyMismatchNamesBothHashes) {
  GeneratorConfig g = testing::tiny_generator();
  g.vocab_size = 120;
  const Corpus other = generate_corpus(g);
  save_corpus(other, dir_ / "other.jsonl");
  const std::uint64_t model_hash = testing::tiny_setup().model.vocab_hash;
  EXPECT_EQ(run({"attack-local", "--corpus", (dir_ / "other.jsonl").string(), "--model",
                 (dir_ / "model.rkr").string(), "--out", (dir_ / "x").string()}),
            1);
  EXPECT_NE(err_.str().find("kind=validation"), std::string::npos);
  EXPECT_NE(err_.str().find(hash_hex(model_hash)), std::string::npos);
  EXPECT_NE(err_.str().find(hash_hex(other.vocab().hash())), std::string::npos);
}

TEST_F(CliTest, LengthAblationRowsPerDirection) {
  const fs::path out = dir_ / "len";
  ASSERT_EQ(run({"ablate", "length", "--corpus", (dir_ / "corpus.jsonl").string(), "--model",
                 (dir_ / "model.rkr").string(), "--out", out.string(), "--set",
                 "eval.length_grid=1,3,5", "--set", "eval.query_count=2", "--set",
                 "eval.docs_per_group=1", "--set", "eval.repetitions=1"}),
            0)
      << err_.str();
  std::ifstream in(out / "summary_length.csv");
  const Table t = read_csv(in);
  EXPECT_EQ(t.rows.size(), 6u);
  std::size_t demote = 0;
  for (const auto& row : t.rows) demote += row[1] == "demote";
  EXPECT_EQ(demote, 3u);
  RunConfig resolved;
  resolved.merge_file(out / "config.resolved");
  EXPECT_EQ(resolved.get("eval.length_grid"), "1,3,5");
}

TEST_F(CliTest, ConfigFileAndFlagsOverride) {
  std::ofstream(dir_ / "run.cfg") << "seed = 5\nthreads = 2\ncorpus.n_queries = 3\n"
                                  << "corpus.depth = 10\ncorpus.vocab_size = 300\n";
  const fs::path out = dir_ / "gen";
  ASSERT_EQ(run({"gen-corpus", "--config", (dir_ / "run.cfg").string(), "--seed", "9",
                 "--deterministic", "--out", out.string()}),
            0)
      << err_.str();
  RunConfig resolved;
  resolved.merge_file(out / "config.resolved");
  EXPECT_EQ(resolved.get("seed"), "9");
  EXPECT_EQ(resolved.get("threads"), "1");
  EXPECT_EQ(resolved.get("deterministic"), "true");
  const Corpus c = load_corpus(out / "corpus.jsonl");
  EXPECT_EQ(c.queries().size(), 3u);
  EXPECT_EQ(run({"gen-corpus", "--set", "corpus.bogus=1", "--out", out.string()}), 1);
  EXPECT_NE(err_.str().find("corpus.bogus"), std::string::npos);
}

TEST_F(CliTest, ReportConcatenatesSummaries) {
  fs::create_directories(dir_ / "a");
  std::ofstream(dir_ / "a" / "summary_x.csv") << "k,v\n1,2\n";
  std::ofstream(dir_ / "a" / "records.csv") << "skip\n";
  ASSERT_EQ(run({"report", (dir_ / "a").string(), "--out", (dir_ / "r").string()}), 0);
  std::ifstream in(dir_ / "r" / "manifest.txt");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("summary_x.csv\nk,v\n1,2\n"), std::string::npos);
  EXPECT_EQ(text.find("skip"), std::string::npos);
}

}  // namespace
}  // namespace advrank
