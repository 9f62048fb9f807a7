/*
 * Copyright 2026 The KGEx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KGEX_EVAL_H_
#define KGEX_EVAL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "kgex/graph.h"
#include "kgex/model.h"
#include "kgex/pool.h"

namespace kgex {

struct SideRank {
  std::size_t rank = 1;
  // Pool entities other than the original, before and after filtering.
  std::size_t candidates = 0;
  std::size_t filtered_candidates = 0;
};

struct RankResult {
  Triple triple;
  SideRank subject;
  SideRank object;
};

struct Metrics {
  double mr = 0.0;
  double mrr = 0.0;
  double hits1 = 0.0;
  double hits10 = 0.0;
  std::size_t ranks = 0;
  // Test triples skipped for falling outside the model vocabulary.
  std::size_t skipped = 0;
};

// Ranks t against single-side corruptions drawn from `pool`. Corruptions that
// are members of `filter` (when given) are dropped; ties count against t.
RankResult rank_triple(const EmbeddingModel& model, const Triple& t,
                       const EntityPool& pool, const TrueTripleSet* filter);

// MR, MRR and Hits@{1,10} over a pooled rank list.
Metrics metrics_from_ranks(std::span<const std::size_t> ranks);

// Both-side filtered metrics over `test` (2 ranks per triple). Out-of-vocabulary
// triples are skipped and counted. `per_triple`, when given, receives the rank
// results of the evaluated triples in input order.
Metrics evaluate(const EmbeddingModel& model, std::span<const Triple> test,
                 const EntityPool& pool, const TrueTripleSet* filter,
                 std::size_t threads = 1,
                 std::vector<RankResult>* per_triple = nullptr);

}  // namespace kgex

#endif  // KGEX_EVAL_H_
