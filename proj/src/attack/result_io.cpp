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

#include "advrank/attack/result_io.hpp"

#include <fstream>

#include "advrank/common/errors.hpp"
#include "json.hpp"

namespace advrank {

using nlohmann::json;

namespace {

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

template <typename F>
F parse_name(F (*parse)(std::string_view), const std::string& s, std::size_t line) {
  try {
    return parse(s);
  } catch (const ConfigError& e) {
    throw ParseError(line, e.what());
  }
}

json to_json(const AttackResult& r) {
  return json{{"query_id", r.query_id},
              {"doc_id", r.doc_id},
              {"direction", to_string(r.direction)},
              {"mode", to_string(r.mode)},
              {"position", to_string(r.position)},
              {"positions", r.perturbation.positions},
              {"tokens", r.perturbation.tokens},
              {"token_strings", r.token_strings},
              {"score_original", r.score_original},
              {"score_before", r.score_before},
              {"score_after", r.score_after},
              {"rank_before", r.rank_before},
              {"rank_after", r.rank_after},
              {"iterations", r.iterations},
              {"score_trace", r.score_trace}};
}

AttackResult attack_from_json(const json& j, std::size_t line) {
  AttackResult r;
  r.query_id = field<std::string>(j, "query_id", line);
  r.doc_id = field<std::string>(j, "doc_id", line);
  r.direction = parse_name(parse_direction, field<std::string>(j, "direction", line), line);
  r.mode = parse_name(parse_mode, field<std::string>(j, "mode", line), line);
  r.position = parse_name(parse_position, field<std::string>(j, "position", line), line);
  r.perturbation.positions = field<std::vector<std::size_t>>(j, "positions", line);
  r.perturbation.tokens = field<TokenSequence>(j, "tokens", line);
  r.token_strings = field<std::vector<std::string>>(j, "token_strings", line);
  if (r.perturbation.positions.size() != r.perturbation.tokens.size() ||
      r.token_strings.size() != r.perturbation.tokens.size()) {
    throw ParseError(line, "positions, tokens and token_strings differ in length");
  }
  r.score_original = field<double>(j, "score_original", line);
  r.score_before = field<double>(j, "score_before", line);
  r.score_after = field<double>(j, "score_after", line);
  r.rank_before = field<std::size_t>(j, "rank_before", line);
  r.rank_after = field<std::size_t>(j, "rank_after", line);
  r.iterations = field<std::size_t>(j, "iterations", line);
  r.score_trace = field<std::vector<double>>(j, "score_trace", line);
  return r;
}

json parse_line(const std::string& line, std::size_t lineno) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(lineno, std::string("malformed JSON: ") + e.what());
  }
  if (!rec.is_object()) throw ParseError(lineno, "record is not an object");
  return rec;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

void write_attack_results(const std::vector<AttackResult>& results, std::ostream& out) {
  for (const AttackResult& r : results) out << to_json(r).dump() << '\n';
}

std::vector<AttackResult> read_attack_results(std::istream& in) {
  std::vector<AttackResult> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    out.push_back(attack_from_json(parse_line(line, lineno), lineno));
  }
  return out;
}

void write_trigger(const TriggerResult& t, std::ostream& out) {
  json pairs = json::array();
  for (const QueryDocPair& p : t.eval_pairs) pairs.push_back({p.query_id, p.doc_id});
  out << json{{"direction", to_string(t.direction)},
              {"selector", to_string(t.selector)},
              {"tokens", t.tokens},
              {"token_strings", t.token_strings},
              {"mean_score_original", t.mean_score_original},
              {"mean_score_before", t.mean_score_before},
              {"mean_score_after", t.mean_score_after},
              {"iterations", t.iterations},
              {"score_trace", t.score_trace},
              {"eval_pairs", pairs}}
             .dump()
      << '\n';
}

TriggerResult read_trigger(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const json j = parse_line(line, lineno);
    TriggerResult t;
    t.direction = parse_name(parse_direction, field<std::string>(j, "direction", lineno), lineno);
    t.selector = parse_name(parse_selector, field<std::string>(j, "selector", lineno), lineno);
    t.tokens = field<TokenSequence>(j, "tokens", lineno);
    t.token_strings = field<std::vector<std::string>>(j, "token_strings", lineno);
    if (t.tokens.empty() || t.tokens.size() != t.token_strings.size()) {
      throw ParseError(lineno, "trigger tokens and token_strings must be non-empty and equal length");
    }
    t.mean_score_original = field<double>(j, "mean_score_original", lineno);
    t.mean_score_before = field<double>(j, "mean_score_before", lineno);
    t.mean_score_after = field<double>(j, "mean_score_after", lineno);
    t.iterations = field<std::size_t>(j, "iterations", lineno);
    t.score_trace = field<std::vector<double>>(j, "score_trace", lineno);
    for (const auto& p : field<std::vector<std::vector<std::string>>>(j, "eval_pairs", lineno)) {
      if (p.size() != 2) throw ParseError(lineno, "eval_pairs entries must be [query_id, doc_id]");
      t.eval_pairs.push_back({p[0], p[1]});
    }
    return t;
  }
  throw ParseError(lineno, "no trigger record");
}

void save_attack_results(const std::vector<AttackResult>& results,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write attack results " + path.string());
  write_attack_results(results, out);
  if (!out) throw IoError("write failed for attack results " + path.string());
}

std::vector<AttackResult> load_attack_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read attack results " + path.string());
  return read_attack_results(in);
}

void save_trigger(const TriggerResult& trigger, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write trigger " + path.string());
  write_trigger(trigger, out);
  if (!out) throw IoError("write failed for trigger " + path.string());
}

TriggerResult load_trigger(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read trigger " + path.string());
  return read_trigger(in);
}

}  // namespace advrank
