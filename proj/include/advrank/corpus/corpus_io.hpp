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

#ifndef ADVRANK_CORPUS_CORPUS_IO_HPP
#define ADVRANK_CORPUS_CORPUS_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "advrank/corpus/corpus.hpp"

namespace advrank {

// JSONL corpus format, one record per line:
//   {"kind":"vocab","terms":[...],"hash":"<hex>"}   (always first)
//   {"kind":"query","id":...,"tokens":[...]}
//   {"kind":"doc","id":...,"tokens":[...]}
//   {"kind":"pool","query_id":...,"doc_ids":[...],"grades":[...]}
void write_corpus(const Corpus& corpus, std::ostream& out);
Corpus read_corpus(std::istream& in);

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(const std::filesystem::path& path);

}  // namespace advrank

#endif  // ADVRANK_CORPUS_CORPUS_IO_HPP
