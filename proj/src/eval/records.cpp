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

#include "advrank/eval/records.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include "advrank/common/errors.hpp"

namespace advrank {

namespace {

constexpr std::array<std::string_view, 4> kMethods = {"local", "global", "random",
                                                      "most_frequent"};
constexpr std::string_view kRecordHeader =
    "query_id,doc_id,method,direction,i,position,rank_before,rank_after,nrs";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
T parse_field(const std::string& s, std::size_t line, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

template <typename F>
auto parse_name(F parse, const std::string& s, std::size_t line) {
  try {
    return parse(s);
  } catch (const ConfigError& e) {
    throw ParseError(line, e.what());
  }
}

void check_cell(const std::string& cell) {
  if (cell.find_first_of(",\n\r") != std::string::npos) {
    throw ValidationError("csv: value '" + cell + "' contains a separator");
  }
}

}  // namespace

std::string_view to_string(Method m) { return kMethods[static_cast<std::size_t>(m)]; }

Method parse_method(std::string_view s) {
  for (std::size_t i = 0; i < kMethods.size(); ++i) {
    if (kMethods[i] == s) return static_cast<Method>(i);
  }
  throw ConfigError("unknown method '" + std::string(s) +
                    "' (expected local, global, random or most_frequent)");
}

RankShiftRecord make_record(const AttackResult& r, Method method, std::size_t depth,
                            MetricVariant metric, std::size_t repetition) {
  RankShiftRecord rec;
  rec.query_id = r.query_id;
  rec.doc_id = r.doc_id;
  rec.method = method;
  rec.direction = r.direction;
  rec.n_tokens = r.perturbation.tokens.size();
  rec.position = r.position;
  rec.rank_before = r.rank_before;
  rec.rank_after = r.rank_after;
  const RankShift s = rank_shift_metric(metric, r.rank_before, r.rank_after, depth, r.direction);
  rec.value = s.value;
  rec.degenerate = s.degenerate;
  rec.repetition = repetition;
  return rec;
}

void sort_records(std::vector<RankShiftRecord>& records) {
  auto key = [](const RankShiftRecord& r) {
    return std::tie(r.query_id, r.doc_id, r.method, r.direction, r.n_tokens, r.position,
                    r.repetition);
  };
  std::stable_sort(records.begin(), records.end(),
                   [&key](const auto& a, const auto& b) { return key(a) < key(b); });
}

void write_records_csv(const std::vector<RankShiftRecord>& records, std::ostream& out) {
  out << kRecordHeader << '\n';
  for (const RankShiftRecord& r : records) {
    check_cell(r.query_id);
    check_cell(r.doc_id);
    out << r.query_id << ',' << r.doc_id << ',' << to_string(r.method) << ','
        << to_string(r.direction) << ',' << r.n_tokens << ',' << to_string(r.position) << ','
        << r.rank_before << ',' << r.rank_after << ',' << format_number(r.value) << '\n';
  }
}

std::vector<RankShiftRecord> read_records_csv(std::istream& in, std::size_t depth) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line != kRecordHeader) {
    throw ParseError(1, "expected header '" + std::string(kRecordHeader) + "'");
  }
  std::vector<RankShiftRecord> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c = split(line, ',');
    if (c.size() != 9) throw ParseError(lineno, "expected 9 fields");
    RankShiftRecord r;
    r.query_id = c[0];
    r.doc_id = c[1];
    r.method = parse_name(parse_method, c[2], lineno);
    r.direction = parse_name(parse_direction, c[3], lineno);
    r.n_tokens = parse_field<std::size_t>(c[4], lineno, "i");
    r.position = parse_name(parse_position, c[5], lineno);
    r.rank_before = parse_field<std::size_t>(c[6], lineno, "rank_before");
    r.rank_after = parse_field<std::size_t>(c[7], lineno, "rank_after");
    r.value = parse_field<double>(c[8], lineno, "nrs");
    try {
      r.degenerate = normalized_rank_shift(r.rank_before, r.rank_after, depth, r.direction).degenerate;
    } catch (const ValidationError& e) {
      throw ParseError(lineno, e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_csv(const Table& table, std::ostream& out) {
  auto row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      check_cell(cells[i]);
      out << (i ? "," : "") << cells[i];
    }
    out << '\n';
  };
  row(table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) {
      throw ShapeError("csv: row has " + std::to_string(r.size()) + " cells, header has " +
                       std::to_string(table.header.size()));
    }
    row(r);
  }
}

void save_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(table, out);
  if (!out) throw IoError("write failed for " + path.string());
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ParseError(lineno, "expected " + std::to_string(t.header.size()) + " fields");
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::string format_number(double v) {
  if (!std::isfinite(v)) throw NumericError("format_number: non-finite value");
  if (v == 0) return "0";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericError("format_number: conversion failed");
  return std::string(buf, ptr);
}

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd m;
  m.count = values.size();
  if (values.empty()) return m;
  double sum = 0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - m.mean) * (v - m.mean);
  m.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return m;
}

}  // namespace advrank
