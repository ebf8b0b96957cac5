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

#ifndef ADVRANK_ATTACK_RESULT_IO_HPP
#define ADVRANK_ATTACK_RESULT_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "advrank/attack/global.hpp"
#include "advrank/attack/local.hpp"

namespace advrank {

// One JSON object per line; field names follow the struct members.
void write_attack_results(const std::vector<AttackResult>& results, std::ostream& out);
std::vector<AttackResult> read_attack_results(std::istream& in);
void save_attack_results(const std::vector<AttackResult>& results, const std::filesystem::path& path);
std::vector<AttackResult> load_attack_results(const std::filesystem::path& path);

void write_trigger(const TriggerResult& trigger, std::ostream& out);
TriggerResult read_trigger(std::istream& in);
void save_trigger(const TriggerResult& trigger, const std::filesystem::path& path);
TriggerResult load_trigger(const std::filesystem::path& path);

}  // namespace advrank

#endif  // ADVRANK_ATTACK_RESULT_IO_HPP
