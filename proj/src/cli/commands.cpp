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


#include "advrank/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "advrank/analysis/pca.hpp"
#include "advrank/analysis/tokens.hpp"
#include "advrank/attack/result_io.hpp"
#include "advrank/cli/config.hpp"
#include "advrank/common/errors.hpp"
#include "advrank/corpus/corpus_io.hpp"
#include "advrank/eval/experiments.hpp"
#include "advrank/ranker/checkpoint.hpp"
#include "advrank/ranker/ranking.hpp"
#include "advrank/ranker/train.hpp"

namespace advrank {

namespace {

namespace fs = std::filesystem;

struct Inputs {
  Corpus corpus;
  RankerModelF model;
};

fs::path required_path(const RunConfig& cfg, const std::string& key) {
  const std::string& p = cfg.get(key);
  if (p.empty()) throw UsageError(key + " is required (flag --" + key.substr(6) + ")");
  if (!fs::exists(p)) throw IoError(key + ": no such file " + p);
  return p;
}

Corpus load_corpus_input(const RunConfig& cfg) { return load_corpus(required_path(cfg, "paths.corpus")); }

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in{load_corpus_input(cfg), load_model(required_path(cfg, "paths.model"))};
  const std::uint64_t corpus_hash = in.corpus.vocab().hash();
  if (in.model.vocab_hash != corpus_hash) {
    throw ValidationError("vocabulary hash mismatch: checkpoint " + hash_hex(in.model.vocab_hash) +
                          ", corpus " + hash_hex(corpus_hash));
  }
  return in;
}

fs::path prepare_out(const RunConfig& cfg) {
  const fs::path out = cfg.get("paths.out");
  if (out.empty()) throw UsageError("paths.out must not be empty");
  fs::create_directories(out);
  cfg.save(out / "config.resolved");
  return out;
}

void save_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

Table key_values(std::vector<std::pair<std::string, std::string>> rows) {
  Table t{{"key", "value"}, {}};
  for (auto& [k, v] : rows) t.rows.push_back({k, v});
  return t;
}

void cmd_gen_corpus(const RunConfig& cfg) {
  const fs::path out = prepare_out(cfg);
  const Corpus corpus = generate_corpus(cfg.generator());
  save_corpus(corpus, out / "corpus.jsonl");
  save_csv(key_values({{"queries", std::to_string(corpus.queries().size())},
                       {"documents", std::to_string(corpus.documents().size())},
                       {"depth", std::to_string(corpus.depth())},
                       {"vocab_size", std::to_string(corpus.vocab().size())},
                       {"vocab_hash", hash_hex(corpus.vocab().hash())}}),
           out / "summary_corpus.csv");
}

void cmd_ingest(const RunConfig& cfg) {
  const auto qrels = required_path(cfg, "paths.qrels");
  const auto docs = required_path(cfg, "paths.docs");
  const auto queries = required_path(cfg, "paths.queries");
  const fs::path out = prepare_out(cfg);
  const IngestResult r = ingest_trec(qrels, docs, queries, cfg.ingest());
  save_corpus(r.corpus, out / "corpus.jsonl");
  const IngestReport& rep = r.report;
  save_csv(key_values({{"queries", std::to_string(r.corpus.queries().size())},
                       {"documents", std::to_string(r.corpus.documents().size())},
                       {"vocab_size", std::to_string(r.corpus.vocab().size())},
                       {"vocab_hash", hash_hex(r.corpus.vocab().hash())},
                       {"unknown_doc_rows", std::to_string(rep.unknown_doc_rows)},
                       {"unknown_query_rows", std::to_string(rep.unknown_query_rows)},
                       {"duplicate_rows", std::to_string(rep.duplicate_rows)},
                       {"dropped_short_pools", std::to_string(rep.dropped_short_pools)},
                       {"dropped_no_relevant", std::to_string(rep.dropped_no_relevant)},
                       {"dropped_empty_queries", std::to_string(rep.dropped_empty_queries)},
                       {"empty_documents", std::to_string(rep.empty_documents)}}),
           out / "summary_ingest.csv");
}

void cmd_train(const RunConfig& cfg, std::ostream& log) {
  const Corpus corpus = load_corpus_input(cfg);
  const RankerConfig rc = cfg.ranker();
  const fs::path out = prepare_out(cfg);
  const TrainResult r = train(corpus, rc);
  save_model(r.model, out / "model.rkr");
  Table epochs{{"epoch", "mean_loss", "heldout_ndcg10"}, {}};
  for (const EpochStats& e : r.epochs) {
    epochs.rows.push_back(
        {std::to_string(e.epoch), format_number(e.mean_loss), format_number(e.heldout_ndcg10)});
  }
  save_csv(epochs, out / "training.csv");
  Table split{{"query_id", "split"}, {}};
  for (const auto& q : r.train_queries) split.rows.push_back({q, "train"});
  for (const auto& q : r.heldout_queries) split.rows.push_back({q, "heldout"});
  save_csv(split, out / "split.csv");
  const EpochStats last = r.epochs.empty() ? EpochStats{} : r.epochs.back();
  save_csv(key_values({{"epochs", std::to_string(r.epochs.size())},
                       {"final_mean_loss", format_number(last.mean_loss)},
                       {"heldout_ndcg10", format_number(last.heldout_ndcg10)}}),
           out / "summary_train.csv");
  log << "heldout_ndcg10=" << format_number(last.heldout_ndcg10) << '\n';
}

void cmd_rank(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg);
  const fs::path out = prepare_out(cfg);
  std::ofstream run(out / "run.trec", std::ios::binary);
  if (!run) throw IoError("cannot write " + (out / "run.trec").string());
  std::vector<std::string> ids;
  for (const CandidatePool& pool : in.corpus.pools()) {
    ids.push_back(pool.query_id);
    for (const RankedDoc& d : rank_pool(in.model, in.corpus, pool)) {
      run << pool.query_id << " Q0 " << d.doc_id << ' ' << d.rank << ' '
          << format_number(d.score) << " advrank\n";
    }
  }
  if (!run) throw IoError("write failed for " + (out / "run.trec").string());
  save_csv(key_values({{"queries", std::to_string(ids.size())},
                       {"mean_ndcg10", format_number(mean_ndcg10(in.model, in.corpus, ids))}}),
           out / "summary_rank.csv");
}

void cmd_attack_local(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg);
  ExperimentPlan plan = cfg.plan();
  plan.methods = {Method::kLocal};
  plan.repetitions = 1;
  plan.n_tokens = plan.attack.n_tokens;
  plan.attack.validate(in.model.vocab_size);
  const fs::path out = prepare_out(cfg);
  const ExperimentResult r = run_effectiveness(in.model, in.corpus, plan);
  save_attack_results(r.local_attacks, out / "attacks.jsonl");
  std::ofstream records(out / "records.csv", std::ios::binary);
  write_records_csv(r.records, records);
  save_csv(r.summary, out / "summary_attack_local.csv");
}

void cmd_attack_global(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg);
  const ExperimentPlan plan = cfg.plan();
  AttackSpec spec = plan.attack;
  spec.validate(in.model.vocab_size);
  if (spec.position != PositionStrategy::kStart || spec.mode != Mode::kAdd) {
    throw ConfigError("attack-global prepends its trigger: set attack.mode=add and attack.position=start");
  }
  const DocSelector selector =
      spec.direction == Direction::kDemote ? DocSelector::kTopRanked : DocSelector::kBottomRanked;
  const fs::path out = prepare_out(cfg);
  const TriggerResult t = global_attack(in.model, in.corpus, plan_queries(in.corpus, plan),
                                        selector, spec, plan.global);
  save_trigger(t, out / "trigger.json");
  save_csv(key_values({{"direction", std::string(to_string(t.direction))},
                       {"selector", std::string(to_string(t.selector))},
                       {"iterations", std::to_string(t.iterations)},
                       {"mean_score_original", format_number(t.mean_score_original)},
                       {"mean_score_before", format_number(t.mean_score_before)},
                       {"mean_score_after", format_number(t.mean_score_after)}}),
           out / "summary_attack_global.csv");
}

void cmd_ablate(const RunConfig& cfg, const std::string& suite) {
  const Inputs in = load_inputs(cfg);
  const ExperimentPlan plan = cfg.plan();
  const fs::path out = prepare_out(cfg);
  ExperimentResult r;
  if (suite == "effectiveness") {
    r = run_effectiveness(in.model, in.corpus, plan);
    if (r.triggers.demote) save_trigger(*r.triggers.demote, out / "trigger_demote.json");
    if (r.triggers.promote) save_trigger(*r.triggers.promote, out / "trigger_promote.json");
  } else if (suite == "length") {
    r = run_length_sweep(in.model, in.corpus, plan);
  } else {
    r = run_position_sweep(in.model, in.corpus, plan);
  }
  std::ofstream records(out / ("records_" + suite + ".csv"), std::ios::binary);
  write_records_csv(r.records, records);
  save_attack_results(r.local_attacks, out / ("attacks_" + suite + ".jsonl"));
  save_csv(r.summary, out / ("summary_" + suite + ".csv"));
}

void cmd_analyze(const RunConfig& cfg) {
  const Inputs in = load_inputs(cfg);
  const auto results = load_attack_results(required_path(cfg, "paths.attacks"));
  ExperimentPlan plan = cfg.plan();
  const std::size_t n_tokens = cfg.get_size("analysis.n_tokens");
  const std::size_t min_support = cfg.get_size("analysis.min_support");
  const fs::path out = prepare_out(cfg);

  TriggerResult trigger;
  if (!cfg.get("paths.trigger").empty()) {
    trigger = load_trigger(required_path(cfg, "paths.trigger"));
  } else {
    ExperimentPlan tp = plan;
    tp.directions = {Direction::kDemote};
    tp.n_tokens = std::max<std::size_t>(n_tokens, 1);
    trigger = *train_triggers(in.model, in.corpus, plan_queries(in.corpus, tp), tp).demote;
    save_trigger(trigger, out / "trigger_demote.json");
  }

  const TokenFrequencyMatrix all = build_frequency_matrix(results);
  const TokenFrequencyMatrix demote = build_frequency_matrix(results, Direction::kDemote);
  const TokenFrequencyMatrix promote = build_frequency_matrix(results, Direction::kPromote);
  save_csv(all.to_table(), out / "frequency_matrix.csv");
  save_csv(demote.to_table(), out / "frequency_matrix_demote.csv");
  save_csv(promote.to_table(), out / "frequency_matrix_promote.csv");
  save_csv(frequency_list(all), out / "frequency_list.csv");

  const MostFrequentResult mf = most_frequent_attack(in.model, in.corpus, plan, demote, trigger, n_tokens);
  save_csv(mf.summary, out / "summary_most_frequent.csv");
  std::ofstream mf_records(out / "records_most_frequent.csv", std::ios::binary);
  write_records_csv(mf.records, mf_records);

  const PcaResult pca = pca_projection(in.model, in.corpus.vocab(), all, min_support);
  save_csv(projection_table(pca), out / "pca.csv");

  std::size_t promotion_tokens = 0;
  for (const AttackResult& r : results) {
    if (r.direction == Direction::kPromote) promotion_tokens += r.perturbation.tokens.size();
  }
  const double fraction = query_token_fraction(results, in.corpus);
  const double chance = query_token_chance_rate(in.corpus);
  save_csv(key_values({{"attack_results", std::to_string(results.size())},
                       {"distinct_tokens", std::to_string(all.tokens.size())},
                       {"trigger_overlap", format_number(trigger_overlap(demote, trigger.token_strings))},
                       {"promotion_tokens", std::to_string(promotion_tokens)},
                       {"query_token_fraction", format_number(fraction)},
                       {"query_token_chance_rate", format_number(chance)},
                       {"pca_tokens", std::to_string(pca.points.size())},
                       {"pca_variance_1", format_number(pca.variances(0))},
                       {"pca_variance_2", format_number(pca.variances(1))}}),
           out / "summary_analysis.csv");
}

void cmd_report(const RunConfig& cfg, const std::vector<std::string>& dirs) {
  std::string manifest;
  for (const std::string& d : dirs) {
    if (!fs::is_directory(d)) throw IoError("report: no such directory " + d);
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(d)) {
      const std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && name.rfind("summary", 0) == 0 &&
          entry.path().extension() == ".csv") {
        names.push_back(name);
      }
    }
    std::sort(names.begin(), names.end());
    for (const std::string& name : names) {
      std::ifstream in(fs::path(d) / name, std::ios::binary);
      std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      manifest += "== " + (fs::path(d) / name).generic_string() + '\n' + body;
      if (!body.empty() && body.back() != '\n') manifest += '\n';
    }
  }
  const fs::path out = prepare_out(cfg);
  save_text(out / "manifest.txt", manifest);
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << "error kind=" << kind << " message=" << nlohmann::json(message).dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial ranking attack lab"};
  app.name("advrank");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> assignments;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  bool deterministic = false;
  std::map<std::string, std::string> paths;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--set", assignments, "override one key: --set attack.beam_width=5");
  app.add_option("--seed", seed, "global seed");
  app.add_option("--threads", threads, "worker threads");
  app.add_flag("--deterministic", deterministic, "single-threaded, bit-exact reproduction");
  for (const char* name : {"out", "corpus", "model", "attacks", "trigger", "qrels", "docs", "queries"}) {
    app.add_option(std::string("--") + name, paths[name], std::string("paths.") + name);
  }

  std::string suite;
  std::vector<std::string> report_dirs;
  auto* gen = app.add_subcommand("gen-corpus", "generate the synthetic corpus");
  auto* ingest = app.add_subcommand("ingest", "build a corpus from TREC qrels, docs and queries");
  auto* trn = app.add_subcommand("train", "train the ranker");
  auto* rnk = app.add_subcommand("rank", "write a TREC run of every pool");
  auto* local = app.add_subcommand("attack-local", "per-document attacks on the plan queries");
  auto* global = app.add_subcommand("attack-global", "train one dataset-wide trigger");
  auto* ablate = app.add_subcommand("ablate", "effectiveness, length or position sweep");
  ablate->add_option("suite", suite)->required()->check(
      CLI::IsMember({"effectiveness", "length", "position"}));
  auto* analyze = app.add_subcommand("analyze", "token statistics of local attack results");
  auto* report = app.add_subcommand("report", "concatenate summary CSVs into a manifest");
  report->add_option("dirs", report_dirs, "output directories")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg.merge_file(config_path);
    for (const std::string& a : assignments) cfg.set_assignment(a);
    if (seed) cfg.set("seed", std::to_string(*seed));
    if (threads) cfg.set("threads", std::to_string(*threads));
    if (deterministic) cfg.set("deterministic", "true");
    if (cfg.get_bool("deterministic")) cfg.set("threads", "1");
    for (const auto& [name, value] : paths) {
      if (!value.empty()) cfg.set("paths." + name, value);
    }
    cfg.threads();

    if (gen->parsed()) cmd_gen_corpus(cfg);
    else if (ingest->parsed()) cmd_ingest(cfg);
    else if (trn->parsed()) cmd_train(cfg, out);
    else if (rnk->parsed()) cmd_rank(cfg);
    else if (local->parsed()) cmd_attack_local(cfg);
    else if (global->parsed()) cmd_attack_global(cfg);
    else if (ablate->parsed()) cmd_ablate(cfg, suite);
    else if (analyze->parsed()) cmd_analyze(cfg);
    else if (report->parsed()) cmd_report(cfg, report_dirs);
  } catch (const Error& e) {
    print_error(err, e.kind(), e.what());
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    print_error(err, "io", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace advrank
