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


#ifndef ADVRANK_CLI_COMMANDS_HPP
#define ADVRANK_CLI_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace advrank {

// Entry point of the advrank tool. args excludes the program name. Errors
// are reported as a single `error kind=<kind> message=<json string>` line on
// `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace advrank

#endif  // ADVRANK_CLI_COMMANDS_HPP
