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

#ifndef ADVRANK_EVAL_RECORDS_HPP
#define ADVRANK_EVAL_RECORDS_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "advrank/attack/local.hpp"
#include "advrank/eval/metrics.hpp"

namespace advrank {

enum class Method { kLocal, kGlobal, kRandom, kMostFrequent };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

struct RankShiftRecord {
  std::string query_id;
  std::string doc_id;
  Method method = Method::kLocal;
  Direction direction = Direction::kDemote;
  std::size_t n_tokens = 0;
  PositionStrategy position = PositionStrategy::kStart;
  std::size_t rank_before = 0;
  std::size_t rank_after = 0;
  double value = 0;  // NRS, or NRC under the nrc metric flag
  bool degenerate = false;
  std::size_t repetition = 0;

  bool operator==(const RankShiftRecord&) const = default;
};

RankShiftRecord make_record(const AttackResult& result, Method method, std::size_t depth,
                            MetricVariant metric, std::size_t repetition);

// Canonical order: query id, doc id, then method, direction, i, position,
// repetition.
void sort_records(std::vector<RankShiftRecord>& records);

// Header: query_id,doc_id,method,direction,i,position,rank_before,rank_after,nrs
void write_records_csv(const std::vector<RankShiftRecord>& records, std::ostream& out);
// The degenerate flag and repetition are not stored; degenerate is
// recomputed from the ranks with `depth`.
std::vector<RankShiftRecord> read_records_csv(std::istream& in, std::size_t depth);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const Table& table, std::ostream& out);
void save_csv(const Table& table, const std::filesystem::path& path);
Table read_csv(std::istream& in);

// Shortest decimal string that parses back to the same double.
std::string format_number(double v);

struct MeanStd {
  double mean = 0;
  double stddev = 0;  // population standard deviation
  std::size_t count = 0;
};

MeanStd mean_std(const std::vector<double>& values);

}  // namespace advrank

#endif  // ADVRANK_EVAL_RECORDS_HPP
