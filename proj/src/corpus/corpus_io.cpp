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

#include "advrank/corpus/corpus_io.hpp"

#include <fstream>
#include <unordered_set>

#include "advrank/common/errors.hpp"
#include "json.hpp"

namespace advrank {

using nlohmann::json;

namespace {

json token_strings(const Vocabulary& vocab, const TokenSequence& tokens) {
  json arr = json::array();
  for (TokenId t : tokens) arr.push_back(vocab.term(t));
  return arr;
}

TokenSequence token_ids(const Vocabulary& vocab, const json& arr, std::size_t line) {
  if (!arr.is_array()) throw ParseError(line, "tokens must be an array");
  TokenSequence out;
  out.reserve(arr.size());
  for (const json& t : arr) {
    if (!t.is_string()) throw ParseError(line, "token must be a string");
    const auto& s = t.get_ref<const std::string&>();
    if (!vocab.contains(s)) throw ParseError(line, "token '" + s + "' not in vocabulary");
    out.push_back(vocab.id(s));
  }
  return out;
}

template <typename T>
T field(const json& rec, const char* name, std::size_t line) {
  auto it = rec.find(name);
  if (it == rec.end()) throw ParseError(line, std::string("missing field '") + name + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(line, std::string("field '") + name + "' has the wrong type");
  }
}

}  // namespace

void write_corpus(const Corpus& corpus, std::ostream& out) {
  const Vocabulary& vocab = corpus.vocab();
  out << json{{"kind", "vocab"}, {"terms", vocab.terms()}, {"hash", hash_hex(vocab.hash())}}.dump()
      << '\n';
  for (const Query& q : corpus.queries()) {
    out << json{{"kind", "query"}, {"id", q.id}, {"tokens", token_strings(vocab, q.tokens)}}.dump()
        << '\n';
  }
  for (const Document& d : corpus.documents()) {
    out << json{{"kind", "doc"}, {"id", d.id}, {"tokens", token_strings(vocab, d.tokens)}}.dump()
        << '\n';
  }
  for (const CandidatePool& p : corpus.pools()) {
    out << json{{"kind", "pool"},
                {"query_id", p.query_id},
                {"doc_ids", p.doc_ids},
                {"grades", p.grades}}
               .dump()
        << '\n';
  }
}

Corpus read_corpus(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_vocab = false;
  Vocabulary vocab;
  std::vector<Query> queries;
  std::vector<Document> docs;
  std::vector<CandidatePool> pools;
  std::unordered_set<std::string> query_ids, doc_ids;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(lineno, "record is not an object");
    const auto kind = field<std::string>(rec, "kind", lineno);
    if (kind == "vocab") {
      if (have_vocab) throw ParseError(lineno, "second vocab record");
      try {
        vocab = Vocabulary::from_terms(field<std::vector<std::string>>(rec, "terms", lineno));
      } catch (const ValidationError& e) {
        throw ParseError(lineno, e.what());
      }
      if (rec.contains("hash") && rec["hash"] != hash_hex(vocab.hash())) {
        throw ParseError(lineno, "vocabulary hash mismatch: stored " + rec["hash"].dump() +
                                     ", computed " + hash_hex(vocab.hash()));
      }
      have_vocab = true;
      continue;
    }
    if (!have_vocab) throw ParseError(lineno, "vocab record must come first");
    if (kind == "query") {
      Query q{field<std::string>(rec, "id", lineno), {}};
      q.tokens = token_ids(vocab, rec.value("tokens", json()), lineno);
      if (!query_ids.insert(q.id).second) throw ValidationError("duplicate query id: " + q.id);
      queries.push_back(std::move(q));
    } else if (kind == "doc") {
      Document d{field<std::string>(rec, "id", lineno), {}};
      d.tokens = token_ids(vocab, rec.value("tokens", json()), lineno);
      if (!doc_ids.insert(d.id).second) throw ValidationError("duplicate document id: " + d.id);
      docs.push_back(std::move(d));
    } else if (kind == "pool") {
      CandidatePool p;
      p.query_id = field<std::string>(rec, "query_id", lineno);
      p.doc_ids = field<std::vector<std::string>>(rec, "doc_ids", lineno);
      p.grades = field<std::vector<int>>(rec, "grades", lineno);
      pools.push_back(std::move(p));
    } else {
      throw ParseError(lineno, "unknown record kind '" + kind + "'");
    }
  }
  if (queries.empty()) throw ValidationError("no queries");
  return Corpus(std::move(vocab), std::move(queries), std::move(docs), std::move(pools));
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file " + path.string());
  write_corpus(corpus, out);
  if (!out) throw IoError("write failed for corpus file " + path.string());
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corpus file " + path.string());
  return read_corpus(in);
}

}  // namespace advrank
