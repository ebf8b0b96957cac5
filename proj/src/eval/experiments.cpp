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

#include "advrank/eval/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <thread>
#include <tuple>

#include "advrank/common/errors.hpp"
#include "advrank/ranker/encode.hpp"
#include "advrank/ranker/forward.hpp"
#include "advrank/ranker/ranking.hpp"

namespace advrank {

namespace {

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::vector<std::uint32_t> words;
  for (std::uint64_t p : parts) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::uint64_t string_key(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Runs fn(0..n-1) on up to `threads` workers. The first exception is
// rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

struct Cell {
  Direction direction;
  std::size_t n_tokens;
  PositionStrategy position;
};

struct FixedTokens {
  Direction direction;
  Method method;
  TokenSequence tokens;
};

struct QueryOutput {
  std::vector<RankShiftRecord> records;
  std::vector<AttackResult> local_attacks;
};

std::vector<std::string> sample_group(const std::vector<RankedDoc>& ranked, Direction direction,
                                      std::size_t count, std::uint64_t seed) {
  const std::size_t half = ranked.size() / 2;
  const std::size_t first = direction == Direction::kDemote ? 0 : half;
  const std::size_t last = direction == Direction::kDemote ? half : ranked.size();
  std::vector<std::size_t> idx(last - first);
  std::iota(idx.begin(), idx.end(), first);
  std::mt19937_64 rng(seed);
  const std::size_t take = std::min(count, idx.size());
  for (std::size_t j = 0; j < take; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, idx.size() - 1);
    std::swap(idx[j], idx[pick(rng)]);
  }
  std::vector<std::string> out;
  for (std::size_t j = 0; j < take; ++j) out.push_back(ranked[idx[j]].doc_id);
  return out;
}

QueryOutput run_query(const RankerModelF& model, const Corpus& corpus, const ExperimentPlan& plan,
                      const std::string& query_id, const std::vector<Cell>& cells,
                      const std::vector<Method>& methods, const std::vector<FixedTokens>& fixed) {
  QueryOutput out;
  const PoolContext ctx = make_pool_context(model, corpus, query_id);
  const auto ranked = rank_scores(ctx.pool->doc_ids, ctx.scores);
  const std::size_t depth = ranked.size();
  const bool want_local = std::count(methods.begin(), methods.end(), Method::kLocal) > 0;
  const bool want_random = std::count(methods.begin(), methods.end(), Method::kRandom) > 0;
  const std::uint64_t qkey = string_key(query_id);

  using Key = std::tuple<std::string, int, std::size_t, int, std::uint64_t>;
  std::map<Key, AttackResult> cache;
  std::set<Direction> directions;
  for (const Cell& c : cells) directions.insert(c.direction);
  for (const FixedTokens& f : fixed) directions.insert(f.direction);

  for (std::size_t rep = 0; rep < plan.repetitions; ++rep) {
    for (Direction dir : directions) {
      const auto docs = sample_group(ranked, dir, plan.docs_per_group,
                                     derive_seed({plan.seed, rep, qkey, static_cast<std::uint64_t>(dir)}));
      for (const std::string& doc_id : docs) {
        const std::uint64_t dkey = string_key(doc_id);
        for (std::size_t ci = 0; ci < cells.size(); ++ci) {
          const Cell& cell = cells[ci];
          if (cell.direction != dir) continue;
          const std::uint64_t seed = derive_seed({plan.seed, rep, qkey, dkey, ci});
          if (want_local) {
            AttackSpec spec = plan.attack;
            spec.direction = dir;
            spec.n_tokens = cell.n_tokens;
            spec.position = cell.position;
            // Only the random strategy consumes the seed; other attacks are
            // deterministic and shared across repetitions.
            spec.seed = cell.position == PositionStrategy::kRandom ? seed : 0;
            const Key key{doc_id, static_cast<int>(dir), cell.n_tokens,
                          static_cast<int>(cell.position), spec.seed};
            auto it = cache.find(key);
            if (it == cache.end()) {
              it = cache.emplace(key, local_attack(model, corpus, ctx, doc_id, spec)).first;
              out.local_attacks.push_back(it->second);
            }
            out.records.push_back(make_record(it->second, Method::kLocal, depth, plan.metric, rep));
          }
          if (want_random) {
            const AttackResult r =
                random_baseline(model, corpus, ctx, doc_id, cell.n_tokens, cell.position,
                                plan.attack.mode, dir, derive_seed({seed, 0x72616e64ULL}));
            out.records.push_back(make_record(r, Method::kRandom, depth, plan.metric, rep));
          }
        }
        for (const FixedTokens& f : fixed) {
          if (f.direction != dir) continue;
          const Document& doc = corpus.document(doc_id);
          const EncodedPair enc = encode(*ctx.query, doc, model.config);
          const AttackResult r =
              evaluate_perturbation(model, corpus, ctx, doc_id, prepend_perturbation(enc, f.tokens),
                                    Mode::kAdd, dir, PositionStrategy::kStart);
          out.records.push_back(make_record(r, f.method, depth, plan.metric, rep));
        }
      }
    }
  }
  return out;
}

ExperimentResult run_plan(const RankerModelF& model, const Corpus& corpus,
                          const ExperimentPlan& plan, const std::vector<Cell>& cells,
                          const std::vector<Method>& methods, const std::vector<FixedTokens>& fixed) {
  plan.validate(corpus.depth());
  const auto queries = plan_queries(corpus, plan);
  std::vector<QueryOutput> per_query(queries.size());
  parallel_for(queries.size(), plan.threads, [&](std::size_t i) {
    per_query[i] = run_query(model, corpus, plan, queries[i], cells, methods, fixed);
  });
  ExperimentResult result;
  for (auto& q : per_query) {
    result.records.insert(result.records.end(), q.records.begin(), q.records.end());
    result.local_attacks.insert(result.local_attacks.end(), q.local_attacks.begin(),
                                q.local_attacks.end());
  }
  sort_records(result.records);
  std::stable_sort(result.local_attacks.begin(), result.local_attacks.end(),
                   [](const AttackResult& a, const AttackResult& b) {
                     return std::tie(a.query_id, a.doc_id) < std::tie(b.query_id, b.doc_id);
                   });
  return result;
}

bool has(const std::vector<Method>& methods, Method m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

std::vector<std::string> mean_cells(const MeanStd& m) {
  return {format_number(m.mean), format_number(m.stddev)};
}

}  // namespace

void ExperimentPlan::validate(std::size_t depth) const {
  if (query_ids.empty() && query_count == 0) throw ConfigError("eval.query_count must be >= 1");
  if (docs_per_group == 0) throw ConfigError("eval.docs_per_group must be >= 1");
  if (docs_per_group > depth / 2) {
    throw ConfigError("eval.docs_per_group (" + std::to_string(docs_per_group) +
                      ") exceeds half the retrieval depth (" + std::to_string(depth / 2) + ")");
  }
  if (repetitions == 0) throw ConfigError("eval.repetitions must be >= 1");
  if (n_tokens < 1 || n_tokens > kMaxAttackTokens) {
    throw ConfigError("eval.n_tokens must be in [1, " + std::to_string(kMaxAttackTokens) + "]");
  }
  if (length_grid.empty()) throw ConfigError("eval.length_grid must not be empty");
  for (std::size_t i : length_grid) {
    if (i < 1 || i > kMaxAttackTokens) {
      throw ConfigError("eval.length_grid entries must be in [1, " +
                        std::to_string(kMaxAttackTokens) + "]");
    }
  }
  if (position_grid.empty()) throw ConfigError("eval.position_grid must not be empty");
  if (methods.empty()) throw ConfigError("eval.methods must not be empty");
  if (directions.empty()) throw ConfigError("eval.directions must not be empty");
  if (threads == 0) throw ConfigError("threads must be >= 1");
}

std::vector<std::string> plan_queries(const Corpus& corpus, const ExperimentPlan& plan) {
  if (!plan.query_ids.empty()) {
    for (const std::string& q : plan.query_ids) corpus.pool(q);
    return plan.query_ids;
  }
  const auto& qs = corpus.queries();
  std::vector<std::size_t> idx(qs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(plan.seed);
  const std::size_t take = std::min(plan.query_count, idx.size());
  for (std::size_t j = 0; j < take; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, idx.size() - 1);
    std::swap(idx[j], idx[pick(rng)]);
  }
  idx.resize(take);
  std::sort(idx.begin(), idx.end());
  std::vector<std::string> out;
  for (std::size_t i : idx) out.push_back(qs[i].id);
  return out;
}

AttackResult random_baseline(const RankerModelF& model, const Corpus& corpus,
                             const PoolContext& ctx, const std::string& doc_id,
                             std::size_t n_tokens, PositionStrategy position, Mode mode,
                             Direction direction, std::uint64_t seed) {
  const Document& doc = corpus.document(doc_id);
  const EncodedPair enc = encode(*ctx.query, doc, model.config);
  Perturbation p;
  if (n_tokens > 0) {
    MatrixF grads;
    const bool need = position == PositionStrategy::kMaxGrad || position == PositionStrategy::kMinGrad;
    if (need) grads = score_with_input_grads(model, enc).grads;
    p.positions = select_positions(position, enc, need ? &grads : nullptr, n_tokens, seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<TokenId> pick(Vocabulary::kFirstRegular,
                                                static_cast<TokenId>(model.vocab_size - 1));
    for (std::size_t j = 0; j < n_tokens; ++j) p.tokens.push_back(pick(rng));
  }
  return evaluate_perturbation(model, corpus, ctx, doc_id, p, mode, direction, position);
}

const TriggerResult* TriggerSet::get(Direction d) const {
  const auto& t = d == Direction::kDemote ? demote : promote;
  return t ? &*t : nullptr;
}

TriggerSet train_triggers(const RankerModelF& model, const Corpus& corpus,
                          const std::vector<std::string>& query_ids, const ExperimentPlan& plan) {
  TriggerSet set;
  for (Direction d : plan.directions) {
    AttackSpec spec = plan.attack;
    spec.direction = d;
    spec.n_tokens = plan.n_tokens;
    spec.mode = Mode::kAdd;
    spec.position = PositionStrategy::kStart;
    spec.seed = plan.seed;
    const DocSelector sel = d == Direction::kDemote ? DocSelector::kTopRanked : DocSelector::kBottomRanked;
    auto trigger = global_attack(model, corpus, query_ids, sel, spec, plan.global);
    (d == Direction::kDemote ? set.demote : set.promote) = std::move(trigger);
  }
  return set;
}

MeanStd summarize(const std::vector<RankShiftRecord>& records,
                  const std::function<bool(const RankShiftRecord&)>& keep) {
  std::map<std::size_t, std::pair<double, std::size_t>> per_rep;
  std::size_t count = 0;
  for (const RankShiftRecord& r : records) {
    if (!keep(r)) continue;
    auto& acc = per_rep[r.repetition];
    acc.first += r.value;
    ++acc.second;
    ++count;
  }
  std::vector<double> means;
  for (const auto& [rep, acc] : per_rep) means.push_back(acc.first / static_cast<double>(acc.second));
  MeanStd m = mean_std(means);
  m.count = count;
  return m;
}

ExperimentResult run_effectiveness(const RankerModelF& model, const Corpus& corpus,
                                   const ExperimentPlan& plan, const TriggerSet* triggers) {
  plan.validate(corpus.depth());
  std::vector<Cell> cells;
  for (Direction d : plan.directions) cells.push_back({d, plan.n_tokens, plan.position});
  std::vector<Method> per_doc;
  for (Method m : plan.methods) {
    if (m == Method::kLocal || m == Method::kRandom) per_doc.push_back(m);
  }
  TriggerSet trained;
  std::vector<FixedTokens> fixed;
  if (has(plan.methods, Method::kGlobal)) {
    if (triggers == nullptr) {
      trained = train_triggers(model, corpus, plan_queries(corpus, plan), plan);
      triggers = &trained;
    }
    for (Direction d : plan.directions) {
      const TriggerResult* t = triggers->get(d);
      if (t == nullptr) {
        throw UsageError("run_effectiveness: no " + std::string(to_string(d)) + " trigger given");
      }
      fixed.push_back({d, Method::kGlobal, t->tokens});
    }
  }
  ExperimentResult result = run_plan(model, corpus, plan, cells, per_doc, fixed);
  result.triggers = triggers ? *triggers : TriggerSet{};
  result.summary.header = {"method", "direction", "i", "position", "mean", "stddev", "records"};
  for (Method m : plan.methods) {
    if (m == Method::kMostFrequent) continue;
    const PositionStrategy pos = m == Method::kGlobal ? PositionStrategy::kStart : plan.position;
    for (Direction d : plan.directions) {
      const MeanStd s = summarize(result.records, [&](const RankShiftRecord& r) {
        return r.method == m && r.direction == d;
      });
      auto row = std::vector<std::string>{std::string(to_string(m)), std::string(to_string(d)),
                                          std::to_string(plan.n_tokens),
                                          std::string(to_string(pos))};
      for (auto& c : mean_cells(s)) row.push_back(c);
      row.push_back(std::to_string(s.count));
      result.summary.rows.push_back(std::move(row));
    }
  }
  return result;
}

ExperimentResult run_length_sweep(const RankerModelF& model, const Corpus& corpus,
                                  const ExperimentPlan& plan) {
  plan.validate(corpus.depth());
  std::vector<Cell> cells;
  for (Direction d : plan.directions) {
    for (std::size_t i : plan.length_grid) cells.push_back({d, i, plan.position});
  }
  ExperimentResult result =
      run_plan(model, corpus, plan, cells, {Method::kLocal, Method::kRandom}, {});
  result.summary.header = {"i", "direction", "local_mean", "local_stddev", "random_mean",
                           "random_stddev"};
  for (Direction d : plan.directions) {
    for (std::size_t i : plan.length_grid) {
      std::vector<std::string> row{std::to_string(i), std::string(to_string(d))};
      for (Method m : {Method::kLocal, Method::kRandom}) {
        for (auto& c : mean_cells(summarize(result.records, [&](const RankShiftRecord& r) {
               return r.method == m && r.direction == d && r.n_tokens == i;
             }))) {
          row.push_back(c);
        }
      }
      result.summary.rows.push_back(std::move(row));
    }
  }
  return result;
}

ExperimentResult run_position_sweep(const RankerModelF& model, const Corpus& corpus,
                                    const ExperimentPlan& plan) {
  plan.validate(corpus.depth());
  ExperimentPlan demote = plan;
  demote.directions = {Direction::kDemote};
  std::vector<Cell> cells;
  for (PositionStrategy p : plan.position_grid) cells.push_back({Direction::kDemote, plan.n_tokens, p});
  ExperimentResult result =
      run_plan(model, corpus, demote, cells, {Method::kLocal, Method::kRandom}, {});
  result.summary.header = {"position", "i", "attack_mean", "attack_stddev", "random_mean",
                           "random_stddev"};
  for (PositionStrategy p : plan.position_grid) {
    std::vector<std::string> row{std::string(to_string(p)), std::to_string(plan.n_tokens)};
    for (Method m : {Method::kLocal, Method::kRandom}) {
      for (auto& c : mean_cells(summarize(result.records, [&](const RankShiftRecord& r) {
             return r.method == m && r.position == p;
           }))) {
        row.push_back(c);
      }
    }
    result.summary.rows.push_back(std::move(row));
  }
  return result;
}

std::vector<RankShiftRecord> evaluate_prepended(const RankerModelF& model, const Corpus& corpus,
                                                const ExperimentPlan& plan,
                                                const TokenSequence& tokens, Method method,
                                                Direction direction) {
  ExperimentPlan p = plan;
  p.directions = {direction};
  return run_plan(model, corpus, p, {}, {}, {{direction, method, tokens}}).records;
}

}  // namespace advrank
