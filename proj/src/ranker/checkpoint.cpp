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

#include "advrank/ranker/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "advrank/common/errors.hpp"
#include "advrank/corpus/vocabulary.hpp"
#include "json.hpp"

namespace advrank {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw FormatError(std::string("checkpoint truncated while reading ") + what);
  }
  return v;
}

json config_json(const RankerConfig& c) {
  return json{{"embed_dim", c.embed_dim},         {"n_layers", c.n_layers},
              {"n_heads", c.n_heads},             {"ffn_dim", c.ffn_dim},
              {"max_len", c.max_len},             {"margin", c.margin},
              {"learning_rate", c.learning_rate}, {"epochs", c.epochs},
              {"pairs_per_query", c.pairs_per_query}, {"batch_pairs", c.batch_pairs},
              {"heldout_fraction", c.heldout_fraction},
              {"seed", c.seed}};
}

RankerConfig config_from_json(const json& j) {
  RankerConfig c;
  c.embed_dim = j.at("embed_dim").get<std::size_t>();
  c.n_layers = j.at("n_layers").get<std::size_t>();
  c.n_heads = j.at("n_heads").get<std::size_t>();
  c.ffn_dim = j.at("ffn_dim").get<std::size_t>();
  c.max_len = j.at("max_len").get<std::size_t>();
  c.margin = j.at("margin").get<double>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.pairs_per_query = j.at("pairs_per_query").get<std::size_t>();
  c.batch_pairs = j.at("batch_pairs").get<std::size_t>();
  c.heldout_fraction = j.at("heldout_fraction").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

void write_model(const RankerModelF& model, std::ostream& out) {
  const auto names = RankerModelF::param_names(model.config.n_layers);
  json manifest = json::array();
  for (std::size_t i = 0; i < model.params.size(); ++i) {
    manifest.push_back({{"name", names[i]},
                        {"shape", {model.params[i].rows(), model.params[i].cols()}}});
  }
  const std::string meta = json{{"config", config_json(model.config)},
                                {"vocab_size", model.vocab_size},
                                {"vocab_hash", hash_hex(model.vocab_hash)},
                                {"tensors", manifest}}
                               .dump();
  out.write(kCheckpointMagic, 4);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, meta.size());
  out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  for (const MatrixF& p : model.params) {
    out.write(reinterpret_cast<const char*>(p.data()),
              static_cast<std::streamsize>(p.size() * sizeof(float)));
  }
}

RankerModelF read_model(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw FormatError("not a ranker checkpoint (bad magic)");
  }
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint format version " + std::to_string(version) +
                      " is not supported (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  const auto meta_len = get<std::uint64_t>(in, "metadata length");
  if (meta_len > (std::uint64_t{1} << 30)) throw FormatError("checkpoint metadata too large");
  std::string meta(meta_len, '\0');
  if (!in.read(meta.data(), static_cast<std::streamsize>(meta_len))) {
    throw FormatError("checkpoint truncated in metadata");
  }
  RankerModelF model;
  json j;
  try {
    j = json::parse(meta);
    model.config = config_from_json(j.at("config"));
    model.vocab_size = j.at("vocab_size").get<std::size_t>();
    model.vocab_hash = std::stoull(j.at("vocab_hash").get<std::string>(), nullptr, 16);
  } catch (const std::exception& e) {
    throw FormatError(std::string("checkpoint metadata invalid: ") + e.what());
  }
  model.config.validate();
  const auto names = RankerModelF::param_names(model.config.n_layers);
  const json& tensors = j.at("tensors");
  if (!tensors.is_array() || tensors.size() != names.size()) {
    throw FormatError("checkpoint manifest lists " + std::to_string(tensors.size()) +
                      " tensors, expected " + std::to_string(names.size()));
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    const json& t = tensors[i];
    if (t.at("name").get<std::string>() != names[i]) {
      throw FormatError("checkpoint tensor " + std::to_string(i) + " is '" +
                        t.at("name").get<std::string>() + "', expected '" + names[i] + "'");
    }
    const auto rows = t.at("shape").at(0).get<Eigen::Index>();
    const auto cols = t.at("shape").at(1).get<Eigen::Index>();
    if (rows <= 0 || cols <= 0) throw FormatError("checkpoint tensor " + names[i] + " has empty shape");
    MatrixF m(rows, cols);
    if (!in.read(reinterpret_cast<char*>(m.data()),
                 static_cast<std::streamsize>(m.size() * sizeof(float)))) {
      throw FormatError("checkpoint truncated in tensor " + names[i]);
    }
    model.params.push_back(std::move(m));
  }
  // Shape agreement with the config.
  const RankerModelF ref = RankerModelF::initialize(model.config, model.vocab_size, 0);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (ref.params[i].rows() != model.params[i].rows() ||
        ref.params[i].cols() != model.params[i].cols()) {
      throw FormatError("checkpoint tensor " + names[i] + " has shape " +
                        shape_string(model.params[i]) + ", config implies " +
                        shape_string(ref.params[i]));
    }
  }
  if (!model.all_finite()) throw NumericError("checkpoint holds non-finite parameters");
  return model;
}

void save_model(const RankerModelF& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  write_model(model, out);
  if (!out) throw IoError("write failed for checkpoint " + path.string());
}

RankerModelF load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint " + path.string());
  return read_model(in);
}

}  // namespace advrank
