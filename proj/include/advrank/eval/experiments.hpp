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

#ifndef ADVRANK_EVAL_EXPERIMENTS_HPP
#define ADVRANK_EVAL_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "advrank/attack/global.hpp"
#include "advrank/attack/local.hpp"
#include "advrank/eval/records.hpp"

namespace advrank {

struct ExperimentPlan {
  // Explicit query ids; when empty, `query_count` ids are sampled with `seed`.
  std::vector<std::string> query_ids;
  std::size_t query_count = 20;
  std::uint64_t seed = 1;
  std::size_t docs_per_group = 10;
  std::size_t repetitions = 5;
  std::size_t n_tokens = 5;  // effectiveness and position sweeps
  // Insertion strategy of the effectiveness and length sweeps.
  PositionStrategy position = PositionStrategy::kStart;
  std::vector<std::size_t> length_grid{1, 3, 5, 7, 10, 15, 20};
  std::vector<PositionStrategy> position_grid{
      PositionStrategy::kStart,  PositionStrategy::kEnd,     PositionStrategy::kMiddle,
      PositionStrategy::kRandom, PositionStrategy::kMaxGrad, PositionStrategy::kMinGrad};
  std::vector<Method> methods{Method::kLocal, Method::kGlobal, Method::kRandom};
  std::vector<Direction> directions{Direction::kDemote, Direction::kPromote};
  MetricVariant metric = MetricVariant::kNrs;
  // Search settings shared by local attacks and trigger training. direction,
  // n_tokens, position and seed are set per run.
  AttackSpec attack;
  GlobalOptions global;
  std::size_t threads = 1;

  // Throws ConfigError naming the offending eval.* field.
  void validate(std::size_t depth) const;
};

// The plan's query ids (explicit list, or a seeded sample without
// replacement returned in corpus order).
std::vector<std::string> plan_queries(const Corpus& corpus, const ExperimentPlan& plan);

// Same slots as the local attack for `position`, filled with tokens drawn
// uniformly from the regular vocabulary. n_tokens = 0 leaves the document
// unchanged.
AttackResult random_baseline(const RankerModelF& model, const Corpus& corpus,
                             const PoolContext& ctx, const std::string& doc_id,
                             std::size_t n_tokens, PositionStrategy position, Mode mode,
                             Direction direction, std::uint64_t seed);

struct TriggerSet {
  std::optional<TriggerResult> demote;
  std::optional<TriggerResult> promote;

  const TriggerResult* get(Direction d) const;
};

// One trigger per plan direction, trained on `query_ids`: top-ranked
// documents for demotion, bottom-ranked for promotion.
TriggerSet train_triggers(const RankerModelF& model, const Corpus& corpus,
                          const std::vector<std::string>& query_ids, const ExperimentPlan& plan);

struct ExperimentResult {
  std::vector<RankShiftRecord> records;      // canonical order
  std::vector<AttackResult> local_attacks;   // distinct local attacks, by query then doc
  TriggerSet triggers;
  Table summary;
};

// Per sampled query and repetition: demote docs_per_group documents drawn
// from ranks 1..depth/2 and promote as many from depth/2+1..depth, with
// every plan method at plan.n_tokens and plan.position (global triggers
// are always prepended). Triggers are trained
// on the plan queries unless `triggers` is given. Summary: one row per
// method x direction with mean and standard deviation over repetitions.
ExperimentResult run_effectiveness(const RankerModelF& model, const Corpus& corpus,
                                   const ExperimentPlan& plan,
                                   const TriggerSet* triggers = nullptr);

// Local and random at every length_grid entry, plan.position, plan
// directions. Summary: one row per i x direction.
ExperimentResult run_length_sweep(const RankerModelF& model, const Corpus& corpus,
                                  const ExperimentPlan& plan);

// Local and random at every position_grid entry, plan.n_tokens, demotion.
// Summary: one row per position.
ExperimentResult run_position_sweep(const RankerModelF& model, const Corpus& corpus,
                                    const ExperimentPlan& plan);

// Prepends fixed `tokens` to the documents the plan samples for
// `direction` and records the rank shifts under `method`.
std::vector<RankShiftRecord> evaluate_prepended(const RankerModelF& model, const Corpus& corpus,
                                                const ExperimentPlan& plan,
                                                const TokenSequence& tokens, Method method,
                                                Direction direction);

// Mean of per-repetition means over the records accepted by `keep`, with
// the standard deviation across repetitions. count = number of records.
MeanStd summarize(const std::vector<RankShiftRecord>& records,
                  const std::function<bool(const RankShiftRecord&)>& keep);

}  // namespace advrank

#endif  // ADVRANK_EVAL_EXPERIMENTS_HPP
