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


#include "advrank/analysis/tokens.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "advrank/common/errors.hpp"

namespace advrank {

std::size_t TokenFrequencyMatrix::total(const std::string& token) const {
  auto it = std::find(tokens.begin(), tokens.end(), token);
  return it == tokens.end() ? 0 : totals[static_cast<std::size_t>(it - tokens.begin())];
}

std::vector<std::string> TokenFrequencyMatrix::top(std::size_t i) const {
  return {tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(std::min(i, tokens.size()))};
}

Table TokenFrequencyMatrix::to_table() const {
  Table t;
  t.header.push_back("query_id");
  t.header.insert(t.header.end(), tokens.begin(), tokens.end());
  for (std::size_t q = 0; q < query_ids.size(); ++q) {
    std::vector<std::string> row{query_ids[q]};
    for (std::size_t c : counts[q]) row.push_back(std::to_string(c));
    t.rows.push_back(std::move(row));
  }
  std::vector<std::string> row{"_total"};
  for (std::size_t c : totals) row.push_back(std::to_string(c));
  t.rows.push_back(std::move(row));
  return t;
}

TokenFrequencyMatrix build_frequency_matrix(const std::vector<AttackResult>& results,
                                            std::optional<Direction> direction) {
  std::map<std::string, std::map<std::string, std::size_t>> per_query;
  std::map<std::string, std::size_t> totals;
  for (const AttackResult& r : results) {
    if (direction && r.direction != *direction) continue;
    if (r.token_strings.size() != r.perturbation.tokens.size()) {
      throw ValidationError("attack result " + r.query_id + "/" + r.doc_id +
                            " has mismatched token strings");
    }
    auto& row = per_query[r.query_id];
    for (const std::string& t : r.token_strings) {
      ++row[t];
      ++totals[t];
    }
  }
  TokenFrequencyMatrix m;
  std::vector<std::pair<std::string, std::size_t>> order(totals.begin(), totals.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [token, total] : order) {
    m.tokens.push_back(token);
    m.totals.push_back(total);
  }
  for (const auto& [qid, row] : per_query) {
    m.query_ids.push_back(qid);
    std::vector<std::size_t> counts;
    for (const std::string& t : m.tokens) {
      auto it = row.find(t);
      counts.push_back(it == row.end() ? 0 : it->second);
    }
    m.counts.push_back(std::move(counts));
  }
  return m;
}

Table frequency_list(const TokenFrequencyMatrix& matrix) {
  Table t{{"token", "frequency"}, {}};
  for (std::size_t i = 0; i < matrix.tokens.size(); ++i) {
    t.rows.push_back({matrix.tokens[i], std::to_string(matrix.totals[i])});
  }
  return t;
}

double trigger_overlap(const TokenFrequencyMatrix& matrix,
                       const std::vector<std::string>& trigger_tokens) {
  if (trigger_tokens.empty()) return 0.0;
  const auto top = matrix.top(trigger_tokens.size());
  const std::set<std::string> local(top.begin(), top.end());
  const std::set<std::string> trig(trigger_tokens.begin(), trigger_tokens.end());
  std::size_t shared = 0;
  for (const std::string& t : trig) shared += local.count(t);
  return static_cast<double>(shared) / static_cast<double>(trigger_tokens.size());
}

MostFrequentResult most_frequent_attack(const RankerModelF& model, const Corpus& corpus,
                                        const ExperimentPlan& plan,
                                        const TokenFrequencyMatrix& matrix,
                                        const TriggerResult& trigger, std::size_t i) {
  if (trigger.direction != Direction::kDemote) {
    throw UsageError("most_frequent_attack: the trigger must be a demotion trigger");
  }
  MostFrequentResult out;
  for (const std::string& t : matrix.tokens) {
    if (out.tokens.size() == i) break;
    if (corpus.vocab().contains(t)) out.tokens.push_back(corpus.vocab().id(t));
  }
  auto frequent = evaluate_prepended(model, corpus, plan, out.tokens, Method::kMostFrequent,
                                     Direction::kDemote);
  auto global = evaluate_prepended(model, corpus, plan, trigger.tokens, Method::kGlobal,
                                   Direction::kDemote);
  double random_mean = 0;
  if (i > 0) {
    ExperimentPlan rp = plan;
    rp.methods = {Method::kRandom};
    rp.directions = {Direction::kDemote};
    rp.n_tokens = i;
    const auto random = run_effectiveness(model, corpus, rp);
    random_mean = summarize(random.records, [](const RankShiftRecord&) { return true; }).mean;
  }
  out.summary.header = {"method", "i", "mean", "stddev", "records", "random_mean"};
  auto add_row = [&](Method m, std::size_t n, const std::vector<RankShiftRecord>& recs) {
    const MeanStd s = summarize(recs, [](const RankShiftRecord&) { return true; });
    out.summary.rows.push_back({std::string(to_string(m)), std::to_string(n),
                                format_number(s.mean), format_number(s.stddev),
                                std::to_string(s.count), format_number(random_mean)});
  };
  add_row(Method::kMostFrequent, out.tokens.size(), frequent);
  add_row(Method::kGlobal, trigger.tokens.size(), global);
  out.records = std::move(frequent);
  out.records.insert(out.records.end(), global.begin(), global.end());
  sort_records(out.records);
  return out;
}

double query_token_fraction(const std::vector<AttackResult>& results, const Corpus& corpus) {
  std::size_t hits = 0;
  std::size_t total = 0;
  for (const AttackResult& r : results) {
    if (r.direction != Direction::kPromote) continue;
    const auto& q = corpus.query(r.query_id).tokens;
    const std::set<TokenId> terms(q.begin(), q.end());
    for (TokenId t : r.perturbation.tokens) {
      hits += terms.count(t);
      ++total;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

double query_token_chance_rate(const Corpus& corpus) {
  if (corpus.queries().empty() || corpus.vocab().size() == 0) return 0.0;
  double sum = 0;
  for (const Query& q : corpus.queries()) {
    sum += static_cast<double>(std::set<TokenId>(q.tokens.begin(), q.tokens.end()).size());
  }
  return sum / static_cast<double>(corpus.queries().size()) /
         static_cast<double>(corpus.vocab().size());
}

}  // namespace advrank
