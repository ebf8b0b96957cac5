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


#ifndef ADVRANK_CLI_CONFIG_HPP
#define ADVRANK_CLI_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "advrank/attack/global.hpp"
#include "advrank/attack/spec.hpp"
#include "advrank/corpus/generator.hpp"
#include "advrank/corpus/trec.hpp"
#include "advrank/eval/experiments.hpp"
#include "advrank/ranker/config.hpp"

namespace advrank {

// Flat key=value settings with section prefixes (corpus., ranker., attack.,
// global., eval., analysis., paths.). Every key has a default, so the
// resolved form is total. Unknown keys are rejected.
class RunConfig {
 public:
  RunConfig();  // all defaults

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  // Throws ConfigError for unknown keys; values are checked when read.
  void set(const std::string& key, const std::string& value);
  // `key=value` form, as given on the command line.
  void set_assignment(const std::string& assignment);

  // Lines of `key = value`; `#` starts a comment line. Duplicates within
  // one file are an error.
  void merge_file(const std::filesystem::path& path);
  void merge(std::istream& in, const std::string& source);

  // Sorted `key=value` lines.
  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;

  std::uint64_t get_u64(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  // Comma-separated; empty string gives an empty list.
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<std::size_t> get_size_list(const std::string& key) const;

  GeneratorConfig generator() const;
  IngestOptions ingest() const;
  RankerConfig ranker() const;
  AttackSpec attack() const;
  GlobalOptions global() const;
  ExperimentPlan plan() const;
  std::size_t threads() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace advrank

#endif  // ADVRANK_CLI_CONFIG_HPP
