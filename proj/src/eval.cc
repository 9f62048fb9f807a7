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

#include "kgex/eval.h"

#include "kgex/error.h"
#include "kgex/parallel.h"

namespace kgex {

namespace {

template <typename Replace>
SideRank rank_side(const EmbeddingModel& model, const Triple& t,
                   EntityId original, const EntityPool& pool,
                   const TrueTripleSet* filter, double positive,
                   Replace&& replace) {
  SideRank side;
  for (EntityId e : pool.members()) {
    if (e == original) continue;
    ++side.candidates;
    const Triple candidate = replace(t, e);
    if (filter && filter->contains(candidate)) continue;
    ++side.filtered_candidates;
    if (score(model, candidate) >= positive) ++side.rank;
  }
  return side;
}

}  // namespace

RankResult rank_triple(const EmbeddingModel& model, const Triple& t,
                       const EntityPool& pool, const TrueTripleSet* filter) {
  if (pool.empty()) throw RangeError("candidate pool is empty");
  if (!model.in_bounds(t)) throw RangeError("triple outside model vocabulary");
  const double positive = score(model, t);
  RankResult out;
  out.triple = t;
  out.subject = rank_side(model, t, t.s, pool, filter, positive,
                          [](Triple x, EntityId e) {
                            x.s = e;
                            return x;
                          });
  out.object = rank_side(model, t, t.o, pool, filter, positive,
                         [](Triple x, EntityId e) {
                           x.o = e;
                           return x;
                         });
  return out;
}

Metrics metrics_from_ranks(std::span<const std::size_t> ranks) {
  Metrics m;
  m.ranks = ranks.size();
  if (ranks.empty()) return m;
  for (std::size_t r : ranks) {
    m.mr += static_cast<double>(r);
    m.mrr += 1.0 / static_cast<double>(r);
    if (r <= 1) m.hits1 += 1.0;
    if (r <= 10) m.hits10 += 1.0;
  }
  const double n = static_cast<double>(ranks.size());
  m.mr /= n;
  m.mrr /= n;
  m.hits1 /= n;
  m.hits10 /= n;
  return m;
}

Metrics evaluate(const EmbeddingModel& model, std::span<const Triple> test,
                 const EntityPool& pool, const TrueTripleSet* filter,
                 std::size_t threads, std::vector<RankResult>* per_triple) {
  if (test.empty()) throw Error("empty test set");
  std::vector<Triple> kept;
  std::size_t skipped = 0;
  for (const Triple& t : test) {
    if (model.in_bounds(t)) {
      kept.push_back(t);
    } else {
      ++skipped;
    }
  }
  std::vector<RankResult> results(kept.size());
  parallel_for(kept.size(), threads, [&](std::size_t i) {
    results[i] = rank_triple(model, kept[i], pool, filter);
  });

  std::vector<std::size_t> ranks;
  ranks.reserve(2 * results.size());
  for (const RankResult& r : results) {
    ranks.push_back(r.subject.rank);
    ranks.push_back(r.object.rank);
  }
  Metrics m = metrics_from_ranks(ranks);
  m.skipped = skipped;
  if (per_triple) *per_triple = std::move(results);
  return m;
}

}  // namespace kgex
