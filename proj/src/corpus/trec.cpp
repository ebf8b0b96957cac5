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

#include "advrank/corpus/trec.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "advrank/common/errors.hpp"
#include "json.hpp"

namespace advrank {

namespace {

struct TextRecord {
  std::string id;
  std::vector<std::string> tokens;
};

std::vector<TextRecord> read_text_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<TextRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(lineno, path.filename().string() + ": malformed JSON: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("text") ||
        !rec["text"].is_string()) {
      throw ParseError(lineno, path.filename().string() + ": expected {\"id\", \"text\"}");
    }
    std::string id = rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump();
    out.push_back({std::move(id), tokenize_text(rec["text"].get<std::string>())});
  }
  return out;
}

struct QrelRow {
  std::string qid;
  std::string docid;
  int grade;
};

std::vector<QrelRow> read_qrels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<QrelRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string qid, iter, docid, grade_s, extra;
    if (!(ls >> qid)) continue;
    if (!(ls >> iter >> docid >> grade_s) || (ls >> extra)) {
      throw ParseError(lineno, "qrels: expected 'qid 0 docid grade'");
    }
    int grade = 0;
    try {
      std::size_t used = 0;
      grade = std::stoi(grade_s, &used);
      if (used != grade_s.size()) throw std::invalid_argument(grade_s);
    } catch (const std::exception&) {
      throw ParseError(lineno, "qrels: grade '" + grade_s + "' is not an integer");
    }
    rows.push_back({qid, docid, std::max(grade, 0)});
  }
  return rows;
}

}  // namespace

std::vector<std::string> tokenize_text(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t b = i, e = j;
    while (b < e && std::ispunct(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(text[e - 1]))) --e;
    if (e > b) {
      std::string tok(text.substr(b, e - b));
      std::transform(tok.begin(), tok.end(), tok.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      out.push_back(std::move(tok));
    }
    i = j;
  }
  return out;
}

IngestResult ingest_trec(const std::filesystem::path& qrels_path,
                         const std::filesystem::path& docs_path,
                         const std::filesystem::path& queries_path, const IngestOptions& options) {
  if (options.depth < 1) throw ConfigError("ingest.depth must be >= 1");
  const std::vector<QrelRow> qrels = read_qrels(qrels_path);
  std::vector<TextRecord> doc_recs = read_text_jsonl(docs_path);
  std::vector<TextRecord> query_recs = read_text_jsonl(queries_path);

  IngestReport report;
  std::unordered_map<std::string, std::size_t> doc_pos;
  for (std::size_t i = 0; i < doc_recs.size(); ++i) {
    if (doc_recs[i].tokens.empty()) {
      ++report.empty_documents;
      continue;
    }
    if (!doc_pos.emplace(doc_recs[i].id, i).second) {
      throw ValidationError("duplicate document id: " + doc_recs[i].id);
    }
  }
  std::unordered_map<std::string, std::size_t> query_pos;
  for (std::size_t i = 0; i < query_recs.size(); ++i) {
    if (!query_pos.emplace(query_recs[i].id, i).second) {
      throw ValidationError("duplicate query id: " + query_recs[i].id);
    }
  }

  // Rows per query in file order.
  std::unordered_map<std::string, std::vector<const QrelRow*>> by_query;
  std::unordered_map<std::string, std::unordered_set<std::string>> seen;
  for (const QrelRow& row : qrels) {
    if (!query_pos.count(row.qid)) {
      ++report.unknown_query_rows;
      continue;
    }
    if (!doc_pos.count(row.docid)) {
      ++report.unknown_doc_rows;
      continue;
    }
    if (!seen[row.qid].insert(row.docid).second) {
      ++report.duplicate_rows;
      continue;
    }
    by_query[row.qid].push_back(&row);
  }

  std::map<std::string, std::size_t> counts;
  for (const TextRecord& r : doc_recs) {
    for (const std::string& t : r.tokens) ++counts[t];
  }
  for (const TextRecord& r : query_recs) {
    for (const std::string& t : r.tokens) ++counts[t];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [term, n] : counts) {
    const bool special = std::find(Vocabulary::kSpecialTerms.begin(),
                                   Vocabulary::kSpecialTerms.end(),
                                   term) != Vocabulary::kSpecialTerms.end();
    if (n >= options.min_term_frequency && !special) ranked.emplace_back(term, n);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> terms;
  terms.reserve(ranked.size());
  for (auto& [term, n] : ranked) terms.push_back(term);
  Vocabulary vocab = Vocabulary::from_regular_terms(std::move(terms));

  auto encode = [&vocab](const std::vector<std::string>& toks) {
    TokenSequence ids;
    ids.reserve(toks.size());
    for (const std::string& t : toks) ids.push_back(vocab.id(t));
    return ids;
  };

  std::vector<Query> queries;
  std::vector<CandidatePool> pools;
  std::vector<Document> documents;
  std::unordered_set<std::string> used_docs;
  for (const TextRecord& qr : query_recs) {
    auto it = by_query.find(qr.id);
    const std::size_t judged = it == by_query.end() ? 0 : it->second.size();
    if (judged < options.depth) {
      ++report.dropped_short_pools;
      continue;
    }
    if (qr.tokens.empty()) {
      ++report.dropped_empty_queries;
      continue;
    }
    CandidatePool pool;
    pool.query_id = qr.id;
    for (std::size_t k = 0; k < options.depth; ++k) {
      pool.doc_ids.push_back(it->second[k]->docid);
      pool.grades.push_back(it->second[k]->grade);
    }
    if (std::none_of(pool.grades.begin(), pool.grades.end(), [](int g) { return g > 0; })) {
      ++report.dropped_no_relevant;
      continue;
    }
    for (const std::string& d : pool.doc_ids) used_docs.insert(d);
    queries.push_back({qr.id, encode(qr.tokens)});
    pools.push_back(std::move(pool));
  }
  for (const TextRecord& dr : doc_recs) {
    if (used_docs.count(dr.id)) documents.push_back({dr.id, encode(dr.tokens)});
  }
  if (queries.empty()) throw ValidationError("no queries");

  std::clog << "ingest: kept " << queries.size() << " queries; dropped "
            << report.dropped_short_pools << " with fewer than " << options.depth
            << " judged documents, " << report.dropped_no_relevant
            << " without relevant documents; skipped " << report.unknown_doc_rows
            << " qrels rows with unknown docids\n";
  return {Corpus(std::move(vocab), std::move(queries), std::move(documents), std::move(pools)),
          report};
}

}  // namespace advrank
