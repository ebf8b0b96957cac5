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


#include "advrank/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <set>

#include "advrank/common/errors.hpp"
#include "advrank/eval/records.hpp"

namespace advrank {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ',';
    if constexpr (std::is_arithmetic_v<T>) {
      out += std::to_string(item);
    } else {
      out += std::string(to_string(item));
    }
  }
  return out;
}

template <typename T>
T parse_integer(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

template <typename T, typename F>
std::vector<T> parse_names(const RunConfig& cfg, const std::string& key, F parse) {
  std::vector<T> out;
  for (const std::string& name : cfg.get_list(key)) {
    try {
      out.push_back(parse(name));
    } catch (const Error& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

RunConfig::RunConfig() {
  const GeneratorConfig g;
  const IngestOptions ingest;
  const RankerConfig r;
  const AttackSpec a;
  const GlobalOptions gl;
  const ExperimentPlan p;
  values_ = {
      {"seed", "1"},
      {"threads", "1"},
      {"deterministic", "false"},
      {"paths.corpus", ""},
      {"paths.model", ""},
      {"paths.attacks", ""},
      {"paths.trigger", ""},
      {"paths.qrels", ""},
      {"paths.docs", ""},
      {"paths.queries", ""},
      {"paths.out", "out"},
      {"corpus.seed", std::to_string(g.seed)},
      {"corpus.n_queries", std::to_string(g.n_queries)},
      {"corpus.depth", std::to_string(g.depth)},
      {"corpus.vocab_size", std::to_string(g.vocab_size)},
      {"corpus.topic_count", std::to_string(g.topic_count)},
      {"corpus.min_doc_len", std::to_string(g.min_doc_len)},
      {"corpus.max_doc_len", std::to_string(g.max_doc_len)},
      {"corpus.median_doc_len", format_number(g.median_doc_len)},
      {"ingest.min_term_frequency", std::to_string(ingest.min_term_frequency)},
      {"ranker.embed_dim", std::to_string(r.embed_dim)},
      {"ranker.n_layers", std::to_string(r.n_layers)},
      {"ranker.n_heads", std::to_string(r.n_heads)},
      {"ranker.ffn_dim", std::to_string(r.ffn_dim)},
      {"ranker.max_len", std::to_string(r.max_len)},
      {"ranker.margin", format_number(r.margin)},
      {"ranker.learning_rate", format_number(r.learning_rate)},
      {"ranker.epochs", std::to_string(r.epochs)},
      {"ranker.pairs_per_query", std::to_string(r.pairs_per_query)},
      {"ranker.batch_pairs", std::to_string(r.batch_pairs)},
      {"ranker.heldout_fraction", format_number(r.heldout_fraction)},
      {"ranker.seed", std::to_string(r.seed)},
      {"attack.direction", std::string(to_string(a.direction))},
      {"attack.n_tokens", std::to_string(a.n_tokens)},
      {"attack.mode", std::string(to_string(a.mode))},
      {"attack.position", std::string(to_string(a.position))},
      {"attack.beam_width", std::to_string(a.beam_width)},
      {"attack.shortlist_k", std::to_string(a.shortlist_k)},
      {"attack.max_iterations", std::to_string(a.max_iterations)},
      {"attack.epsilon", format_number(a.epsilon)},
      {"global.batch_size", std::to_string(gl.batch_size)},
      {"global.eval_size", std::to_string(gl.eval_size)},
      {"eval.query_count", std::to_string(p.query_count)},
      {"eval.query_ids", ""},
      {"eval.docs_per_group", std::to_string(p.docs_per_group)},
      {"eval.repetitions", std::to_string(p.repetitions)},
      {"eval.n_tokens", std::to_string(p.n_tokens)},
      {"eval.length_grid", join(p.length_grid)},
      {"eval.position_grid", join(p.position_grid)},
      {"eval.methods", join(p.methods)},
      {"eval.directions", join(p.directions)},
      {"eval.metric", std::string(to_string(p.metric))},
      {"analysis.min_support", "2"},
      {"analysis.n_tokens", "5"},
  };
}

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  if (value.find_first_of("\n\r") != std::string::npos) {
    throw ConfigError(key + ": value contains a line break");
  }
  it->second = value;
}

void RunConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("expected key=value, got '" + assignment + "'");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  merge(in, path.string());
}

void RunConfig::merge(std::istream& in, const std::string& source) {
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    if (!has(key)) throw ConfigError(where + ": unknown config key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    set(key, trim(t.substr(eq + 1)));
  }
}

void RunConfig::write(std::ostream& out) const {
  for (const auto& [k, v] : values_) out << k << '=' << v << '\n';
}

void RunConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write(out);
  if (!out) throw IoError("write failed for " + path.string());
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  return parse_integer<std::uint64_t>(key, get(key));
}

std::size_t RunConfig::get_size(const std::string& key) const {
  return parse_integer<std::size_t>(key, get(key));
}

double RunConfig::get_double(const std::string& key) const {
  const std::string& text = get(key);
  double v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string& text = get(key);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<std::string> RunConfig::get_list(const std::string& key) const {
  std::vector<std::string> out;
  const std::string& text = get(key);
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const std::string item = trim(text.substr(start, comma - start));
    if (item.empty()) throw ConfigError(key + ": empty list item");
    out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::size_t> RunConfig::get_size_list(const std::string& key) const {
  std::vector<std::size_t> out;
  for (const std::string& item : get_list(key)) out.push_back(parse_integer<std::size_t>(key, item));
  return out;
}

GeneratorConfig RunConfig::generator() const {
  GeneratorConfig g;
  g.seed = get_u64("corpus.seed");
  g.n_queries = get_size("corpus.n_queries");
  g.depth = get_size("corpus.depth");
  g.vocab_size = get_size("corpus.vocab_size");
  g.topic_count = get_size("corpus.topic_count");
  g.min_doc_len = get_size("corpus.min_doc_len");
  g.max_doc_len = get_size("corpus.max_doc_len");
  g.median_doc_len = get_double("corpus.median_doc_len");
  return g;
}

IngestOptions RunConfig::ingest() const {
  IngestOptions o;
  o.depth = get_size("corpus.depth");
  o.min_term_frequency = get_size("ingest.min_term_frequency");
  return o;
}

RankerConfig RunConfig::ranker() const {
  RankerConfig r;
  r.embed_dim = get_size("ranker.embed_dim");
  r.n_layers = get_size("ranker.n_layers");
  r.n_heads = get_size("ranker.n_heads");
  r.ffn_dim = get_size("ranker.ffn_dim");
  r.max_len = get_size("ranker.max_len");
  r.margin = get_double("ranker.margin");
  r.learning_rate = get_double("ranker.learning_rate");
  r.epochs = get_size("ranker.epochs");
  r.pairs_per_query = get_size("ranker.pairs_per_query");
  r.batch_pairs = get_size("ranker.batch_pairs");
  r.heldout_fraction = get_double("ranker.heldout_fraction");
  r.seed = get_u64("ranker.seed");
  try {
    r.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return r;
}

AttackSpec RunConfig::attack() const {
  AttackSpec a;
  try {
    a.direction = parse_direction(get("attack.direction"));
    a.mode = parse_mode(get("attack.mode"));
    a.position = parse_position(get("attack.position"));
  } catch (const Error& e) {
    throw ConfigError(std::string("attack: ") + e.what());
  }
  a.n_tokens = get_size("attack.n_tokens");
  a.beam_width = get_size("attack.beam_width");
  a.shortlist_k = get_size("attack.shortlist_k");
  a.max_iterations = get_size("attack.max_iterations");
  a.epsilon = get_double("attack.epsilon");
  a.seed = get_u64("seed");
  return a;
}

GlobalOptions RunConfig::global() const {
  GlobalOptions o;
  o.batch_size = get_size("global.batch_size");
  o.eval_size = get_size("global.eval_size");
  if (o.batch_size == 0 || o.eval_size == 0) {
    throw ConfigError("global.batch_size and global.eval_size must be >= 1");
  }
  return o;
}

std::size_t RunConfig::threads() const {
  if (get_bool("deterministic")) return 1;
  const std::size_t t = get_size("threads");
  if (t == 0) throw ConfigError("threads must be >= 1");
  return t;
}

ExperimentPlan RunConfig::plan() const {
  ExperimentPlan p;
  p.query_ids = get_list("eval.query_ids");
  p.query_count = get_size("eval.query_count");
  p.seed = get_u64("seed");
  p.docs_per_group = get_size("eval.docs_per_group");
  p.repetitions = get_size("eval.repetitions");
  p.n_tokens = get_size("eval.n_tokens");
  p.length_grid = get_size_list("eval.length_grid");
  p.position_grid = parse_names<PositionStrategy>(*this, "eval.position_grid", parse_position);
  p.methods = parse_names<Method>(*this, "eval.methods", parse_method);
  p.directions = parse_names<Direction>(*this, "eval.directions", parse_direction);
  try {
    p.metric = parse_metric(get("eval.metric"));
  } catch (const Error& e) {
    throw ConfigError(std::string("eval.metric: ") + e.what());
  }
  p.attack = attack();
  p.position = p.attack.position;
  p.global = global();
  p.threads = threads();
  return p;
}

}  // namespace advrank
