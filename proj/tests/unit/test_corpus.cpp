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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "advrank/common/errors.hpp"
#include "advrank/corpus/corpus_io.hpp"
#include "advrank/corpus/generator.hpp"
#include "advrank/corpus/trec.hpp"
#include "support.hpp"

namespace advrank {
namespace {

namespace fs = std::filesystem;

TEST(Vocabulary, SpecialsAndLookup) {
  const Vocabulary v = Vocabulary::from_regular_terms({"alpha", "beta"});
  EXPECT_EQ(v.size(), 7u);
  EXPECT_EQ(v.id("alpha"), Vocabulary::kFirstRegular);
  EXPECT_EQ(v.term(6), "beta");
  EXPECT_EQ(v.id("gamma"), Vocabulary::kOov);
  EXPECT_TRUE(Vocabulary::is_special(Vocabulary::kMask));
  EXPECT_THROW(Vocabulary::from_regular_terms({"a", "a"}), ValidationError);
  EXPECT_THROW(Vocabulary::from_regular_terms({"[CLS]"}), ValidationError);
}

TEST(Vocabulary, HashIsFnv1aOverOrderedTerms) {
  const Vocabulary a = Vocabulary::from_regular_terms({"x", "y"});
  const Vocabulary b = Vocabulary::from_regular_terms({"y", "x"});
  // Reference value: FNV-1a 64 over every term, each followed by a NUL.
  EXPECT_EQ(a.hash(), 0x23d4785d219ab461ULL);
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_EQ(a.hash(), Vocabulary::from_regular_terms({"x", "y"}).hash());
  EXPECT_EQ(hash_hex(0xabcULL), "0000000000000abc");
}

TEST(Generator, SameSeedSameCorpus) {
  const Corpus a = generate_corpus(testing::tiny_generator(5));
  const Corpus b = generate_corpus(testing::tiny_generator(5));
  const Corpus c = generate_corpus(testing::tiny_generator(6));
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
}

TEST(Generator, ShapeAndGrades) {
  const GeneratorConfig g = testing::tiny_generator();
  const Corpus c = generate_corpus(g);
  EXPECT_EQ(c.queries().size(), g.n_queries);
  EXPECT_EQ(c.vocab().size(), g.vocab_size);
  EXPECT_EQ(c.depth(), g.depth);
  for (const CandidatePool& pool : c.pools()) {
    const std::set<TokenId> qterms(c.query(pool.query_id).tokens.begin(),
                                   c.query(pool.query_id).tokens.end());
    bool any_relevant = false;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const Document& d = c.document(pool.doc_ids[i]);
      EXPECT_GE(d.tokens.size(), g.min_doc_len);
      EXPECT_LE(d.tokens.size(), g.max_doc_len);
      EXPECT_GE(pool.grades[i], 0);
      EXPECT_LE(pool.grades[i], 3);
      any_relevant |= pool.grades[i] > 0;
      bool overlap = false;
      for (TokenId t : d.tokens) {
        EXPECT_FALSE(Vocabulary::is_special(t));
        overlap |= qterms.count(t) > 0;
      }
      if (!overlap) EXPECT_EQ(pool.grades[i], 0);
    }
    EXPECT_TRUE(any_relevant);
  }
}

TEST(CorpusIo, RoundTrip) {
  const Corpus c = generate_corpus(testing::tiny_generator());
  std::stringstream buf;
  write_corpus(c, buf);
  const Corpus back = read_corpus(buf);
  EXPECT_TRUE(back == c);
  std::stringstream again;
  write_corpus(back, again);
  std::stringstream first;
  write_corpus(c, first);
  EXPECT_EQ(first.str(), again.str());
}

TEST(CorpusIo, MalformedInputNamesLine) {
  std::stringstream bad("{\"kind\":\"vocab\",\"terms\":[]}\nnot json\n");
  try {
    read_corpus(bad);
    FAIL() << "expected an error";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 1u);
  } catch (const Error&) {
  }
}

TEST(Trec, Tokenize) {
  const auto t = tokenize_text("Hello, World!  (it's) --");
  const std::vector<std::string> expect{"hello", "world", "it's"};
  EXPECT_EQ(t, expect);
}

class TrecIngest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("advrank_trec_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    std::ofstream(dir_ / "q.jsonl") << "{\"id\":\"q1\",\"text\":\"red apple\"}\n"
                                    << "{\"id\":\"q2\",\"text\":\"blue sky\"}\n";
    std::ofstream(dir_ / "d.jsonl") << "{\"id\":\"d1\",\"text\":\"red apple pie\"}\n"
                                    << "{\"id\":\"d2\",\"text\":\"green apple\"}\n"
                                    << "{\"id\":\"d3\",\"text\":\"blue red sky\"}\n";
    std::ofstream(dir_ / "qrels") << "q1 0 d1 2\nq1 0 d2 0\nq1 0 d9 1\nq1 0 d1 1\n"
                                  << "q2 0 d3 1\nqx 0 d1 1\n";
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(TrecIngest, BuildsPoolsAndReports) {
  IngestOptions o;
  o.depth = 2;
  o.min_term_frequency = 2;
  const IngestResult r = ingest_trec(dir_ / "qrels", dir_ / "d.jsonl", dir_ / "q.jsonl", o);
  EXPECT_EQ(r.corpus.queries().size(), 1u);  // q2 has one judged doc
  EXPECT_EQ(r.report.dropped_short_pools, 1u);
  EXPECT_EQ(r.report.unknown_doc_rows, 1u);
  EXPECT_EQ(r.report.unknown_query_rows, 1u);
  EXPECT_EQ(r.report.duplicate_rows, 1u);
  const CandidatePool& p = r.corpus.pool("q1");
  EXPECT_EQ(p.doc_ids, (std::vector<std::string>{"d1", "d2"}));
  EXPECT_EQ(p.grades, (std::vector<int>{2, 0}));
  EXPECT_TRUE(r.corpus.vocab().contains("apple"));
  EXPECT_FALSE(r.corpus.vocab().contains("pie"));  // seen once
  EXPECT_EQ(r.corpus.document("d1").tokens.back(), Vocabulary::kOov);
}

TEST_F(TrecIngest, BadQrelsLine) {
  std::ofstream(dir_ / "qrels") << "q1 0 d1\n";
  EXPECT_THROW(ingest_trec(dir_ / "qrels", dir_ / "d.jsonl", dir_ / "q.jsonl"), ParseError);
  EXPECT_THROW(ingest_trec(dir_ / "missing", dir_ / "d.jsonl", dir_ / "q.jsonl"), IoError);
}

}  // namespace
}  // namespace advrank
