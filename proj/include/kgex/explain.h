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

#ifndef KGEX_EXPLAIN_H_
#define KGEX_EXPLAIN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kgex/eval.h"
#include "kgex/graph.h"
#include "kgex/model.h"
#include "kgex/rng.h"
#include "kgex/sampling.h"
#include "kgex/training.h"

namespace kgex {

struct ExplainConfig {
  std::size_t mc_runs = 100;
  std::size_t partitions = 10;
  TrainConfig student;
  double kd_lambda = 3.0;
  SubgraphSpec sampling;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

// Throws RangeError unless mc_runs >= 1 and partitions >= 2.
void validate(const ExplainConfig& config);

struct RunRecord {
  std::size_t run = 0;
  // Sorted positions (into the source graph) of the triples in H_mc.
  std::vector<std::size_t> subset;
  // Mean of the subject-side and object-side ranks of the target.
  double rank = 1.0;
  RankResult ranks;
};

struct Contribution {
  std::size_t position = 0;
  Triple triple;
  double avg_rank = 0.0;
  // Sum of run ranks; avg_rank == rank_sum / runs_containing.
  double rank_sum = 0.0;
  std::size_t runs_containing = 0;
};

struct ExplanationReport {
  Triple target;
  // Ascending avg_rank, then descending runs_containing, then position.
  std::vector<Contribution> ranked;
  // Positions of subgraph triples no run trained on, ascending.
  std::vector<std::size_t> never_sampled;
  Subgraph subgraph;
  ExplainConfig config;
  std::vector<RunRecord> runs;
};

// A uniform random permutation of `h` cut into `parts` contiguous chunks whose
// sizes differ by at most one. Each chunk is returned sorted.
std::vector<std::vector<std::size_t>> partition_subgraph(
    std::span<const std::size_t> h, std::size_t parts, Rng& rng);

// Per-triple mean target rank over the runs that contained it. `h` lists the
// subgraph positions; triples in `h` that no run contains go to the tail.
ExplanationReport aggregate_contributions(std::span<const RunRecord> records,
                                          std::span<const std::size_t> h,
                                          const KnowledgeGraph& g);

// Samples H once, trains one KD student per run on a subset of H, ranks the
// target against corruptions from that subset's entities, and aggregates.
// `filter` defaults to the triples of `g`.
ExplanationReport mc_explain(const EmbeddingModel& teacher,
                             const KnowledgeGraph& g, const Triple& target,
                             const ExplainConfig& config,
                             const TrueTripleSet* filter = nullptr);

}  // namespace kgex

#endif  // KGEX_EXPLAIN_H_
