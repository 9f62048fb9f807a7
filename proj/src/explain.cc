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

#include "kgex/explain.h"

#include <algorithm>
#include <numeric>

#include "kgex/distill.h"
#include "kgex/error.h"
#include "kgex/parallel.h"

namespace kgex {

void validate(const ExplainConfig& config) {
  if (config.mc_runs == 0) throw RangeError("mc_runs must be >= 1");
  if (config.partitions < 2) throw RangeError("partitions must be >= 2");
  if (!(config.kd_lambda >= 0.0)) throw RangeError("KD coefficient must be >= 0");
}

std::vector<std::vector<std::size_t>> partition_subgraph(
    std::span<const std::size_t> h, std::size_t parts, Rng& rng) {
  if (parts == 0) throw RangeError("partition count must be >= 1");
  if (h.size() < parts) {
    throw RangeError("subgraph has " + std::to_string(h.size()) +
                     " triples, fewer than " + std::to_string(parts) +
                     " partitions");
  }
  std::vector<std::size_t> perm(h.begin(), h.end());
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::size_t base = perm.size() / parts;
  const std::size_t extra = perm.size() % parts;
  std::vector<std::vector<std::size_t>> out(parts);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    out[i].assign(perm.begin() + cursor, perm.begin() + cursor + len);
    std::sort(out[i].begin(), out[i].end());
    cursor += len;
  }
  return out;
}

ExplanationReport aggregate_contributions(std::span<const RunRecord> records,
                                          std::span<const std::size_t> h,
                                          const KnowledgeGraph& g) {
  if (records.empty()) throw Error("no Monte Carlo runs to aggregate");
  std::vector<std::size_t> sorted_h(h.begin(), h.end());
  std::sort(sorted_h.begin(), sorted_h.end());
  std::vector<double> sums(sorted_h.size(), 0.0);
  std::vector<std::size_t> counts(sorted_h.size(), 0);

  for (const RunRecord& r : records) {
    for (std::size_t pos : r.subset) {
      auto it = std::lower_bound(sorted_h.begin(), sorted_h.end(), pos);
      if (it == sorted_h.end() || *it != pos) {
        throw MismatchError("run subset contains a triple outside the subgraph");
      }
      const std::size_t i = static_cast<std::size_t>(it - sorted_h.begin());
      sums[i] += r.rank;
      ++counts[i];
    }
  }

  ExplanationReport report;
  for (std::size_t i = 0; i < sorted_h.size(); ++i) {
    if (counts[i] == 0) {
      report.never_sampled.push_back(sorted_h[i]);
      continue;
    }
    Contribution c;
    c.position = sorted_h[i];
    c.triple = g[sorted_h[i]];
    c.rank_sum = sums[i];
    c.runs_containing = counts[i];
    c.avg_rank = sums[i] / static_cast<double>(counts[i]);
    report.ranked.push_back(c);
  }
  std::sort(report.ranked.begin(), report.ranked.end(),
            [](const Contribution& a, const Contribution& b) {
              if (a.avg_rank != b.avg_rank) return a.avg_rank < b.avg_rank;
              if (a.runs_containing != b.runs_containing) {
                return a.runs_containing > b.runs_containing;
              }
              return a.position < b.position;
            });
  report.runs.assign(records.begin(), records.end());
  std::sort(report.runs.begin(), report.runs.end(),
            [](const RunRecord& a, const RunRecord& b) { return a.run < b.run; });
  return report;
}

ExplanationReport mc_explain(const EmbeddingModel& teacher,
                             const KnowledgeGraph& g, const Triple& target,
                             const ExplainConfig& config,
                             const TrueTripleSet* filter) {
  validate(config);
  validate(config.student);
  if (!teacher.in_bounds(target)) {
    throw RangeError("target outside the teacher vocabulary");
  }
  TrueTripleSet own_filter;
  if (!filter) {
    const std::reference_wrapper<const KnowledgeGraph> graphs[] = {g};
    own_filter = build_filter(graphs);
    filter = &own_filter;
  }

  const Subgraph h = sample_subgraph(g, target, config.sampling);
  if (h.size() < config.partitions) {
    throw RangeError("sampled subgraph has " + std::to_string(h.size()) +
                     " triples, fewer than " +
                     std::to_string(config.partitions) + " partitions");
  }

  std::vector<RunRecord> records(config.mc_runs);
  parallel_for(config.mc_runs, config.threads, [&](std::size_t r) {
    const std::uint64_t run_seed = derive_seed(derive_seed(config.seed, 7), r);
    Rng part_rng(derive_seed(run_seed, 0));
    auto parts = partition_subgraph(h.positions, config.partitions, part_rng);

    RunRecord& rec = records[r];
    rec.run = r;
    rec.subset = std::move(parts[r % config.partitions]);
    const KnowledgeGraph sub = g.subset(rec.subset);

    std::vector<EntityId> entities = sub.entity_set();
    TrainConfig student = config.student;
    student.seed = derive_seed(run_seed, 1);
    student.on_epoch = nullptr;
    std::vector<EntityId> train_pool = entities;
    if (train_pool.size() < 2) {
      // A lone self-loop leaves one entity; the target's endpoints keep the
      // corruption pool usable.
      train_pool.push_back(target.s);
      train_pool.push_back(target.o);
    }
    student.corruption_pool = EntityPool(std::move(train_pool));
    const TrainResult trained =
        train_student(teacher, sub, student, config.kd_lambda);

    rec.ranks = rank_triple(trained.model, target,
                            EntityPool(std::move(entities)), filter);
    rec.rank = 0.5 * static_cast<double>(rec.ranks.subject.rank +
                                         rec.ranks.object.rank);
  });

  ExplanationReport report = aggregate_contributions(records, h.positions, g);
  report.target = target;
  report.subgraph = h;
  report.config = config;
  report.config.student.on_epoch = nullptr;
  return report;
}

}  // namespace kgex
