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

#include <algorithm>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "kgex/error.h"
#include "kgex/explain.h"
#include "test_util.h"

namespace kgex {
namespace {

using ::kgex::testing::toy_block_kg;

RunRecord record(std::size_t run, std::vector<std::size_t> subset, double rank) {
  RunRecord r;
  r.run = run;
  r.subset = std::move(subset);
  r.rank = rank;
  return r;
}

TEST(PartitionTest, BalanceRule) {
  std::vector<std::size_t> h(10);
  std::iota(h.begin(), h.end(), 0);
  Rng rng(1);
  for (const auto& p : partition_subgraph(h, 10, rng)) EXPECT_EQ(p.size(), 1u);
  h.push_back(10);
  const auto parts = partition_subgraph(h, 10, rng);
  std::size_t pairs = 0;
  for (const auto& p : parts) pairs += p.size() == 2;
  EXPECT_EQ(pairs, 1u);
}

TEST(PartitionTest, DisjointCover) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + trial;
    std::vector<std::size_t> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = 3 * i + 1;
    const std::size_t parts = 2 + trial % 4;
    const auto out = partition_subgraph(h, parts, rng);
    ASSERT_EQ(out.size(), parts);
    std::vector<std::size_t> joined;
    for (const auto& p : out) {
      EXPECT_TRUE(std::is_sorted(p.begin(), p.end()));
      joined.insert(joined.end(), p.begin(), p.end());
    }
    std::sort(joined.begin(), joined.end());
    EXPECT_EQ(joined, h);
  }
}

TEST(PartitionTest, TooFewTriplesThrows) {
  Rng rng(3);
  const std::vector<std::size_t> h = {1, 2};
  EXPECT_THROW(partition_subgraph(h, 3, rng), RangeError);
}

TEST(AggregateTest, SyntheticLog) {
  const KnowledgeGraph g = testing::demo_graph();
  const std::vector<std::size_t> h = {0, 1, 2};
  const std::vector<RunRecord> log = {record(0, {0, 1}, 2.0),
                                      record(1, {0}, 4.0), record(2, {1}, 6.0)};
  const ExplanationReport r = aggregate_contributions(log, h, g);
  ASSERT_EQ(r.ranked.size(), 2u);
  EXPECT_EQ(r.ranked[0].position, 0u);
  EXPECT_EQ(r.ranked[0].avg_rank, 3.0);
  EXPECT_EQ(r.ranked[1].position, 1u);
  EXPECT_EQ(r.ranked[1].avg_rank, 4.0);
  EXPECT_EQ(r.never_sampled, (std::vector<std::size_t>{2}));
}

TEST(AggregateTest, SingleRun) {
  const KnowledgeGraph g = testing::demo_graph();
  const std::vector<std::size_t> h = {0, 1, 2, 3, 4};
  const ExplanationReport r =
      aggregate_contributions(std::vector{record(0, {1, 3}, 7.5)}, h, g);
  for (const Contribution& c : r.ranked) EXPECT_EQ(c.avg_rank, 7.5);
  EXPECT_EQ(r.never_sampled.size(), 3u);
}

TEST(AggregateTest, TieBreaks) {
  const KnowledgeGraph g = testing::demo_graph();
  const std::vector<std::size_t> h = {0, 1, 2, 3};
  // 3 and 1 average 2 each; 3 appears in more runs. 0 and 2 tie completely.
  const std::vector<RunRecord> log = {
      record(0, {1}, 2.0), record(1, {3}, 2.0), record(2, {3}, 2.0),
      record(3, {0, 2}, 5.0)};
  const ExplanationReport r = aggregate_contributions(log, h, g);
  std::vector<std::size_t> order;
  for (const Contribution& c : r.ranked) order.push_back(c.position);
  EXPECT_EQ(order, (std::vector<std::size_t>{3, 1, 0, 2}));
}

TEST(AggregateTest, OrderOfRecordsDoesNotMatter) {
  const KnowledgeGraph g = toy_block_kg().train;
  Rng rng(4);
  std::vector<std::size_t> h(40);
  std::iota(h.begin(), h.end(), 0);
  std::vector<RunRecord> log;
  for (std::size_t r = 0; r < 30; ++r) {
    auto parts = partition_subgraph(h, 4, rng);
    log.push_back(record(r, parts[r % 4], 1.0 + uniform_index(rng, 20) / 2.0));
  }
  const ExplanationReport a = aggregate_contributions(log, h, g);
  std::shuffle(log.begin(), log.end(), rng);
  const ExplanationReport b = aggregate_contributions(log, h, g);
  ASSERT_EQ(a.ranked.size(), b.ranked.size());
  for (std::size_t i = 0; i < a.ranked.size(); ++i) {
    EXPECT_EQ(a.ranked[i].position, b.ranked[i].position);
    EXPECT_EQ(a.ranked[i].avg_rank, b.ranked[i].avg_rank);
  }
}

TEST(AggregateTest, RejectsForeignPositions) {
  const KnowledgeGraph g = testing::demo_graph();
  const std::vector<std::size_t> h = {0, 1};
  EXPECT_THROW(aggregate_contributions(std::vector{record(0, {4}, 1.0)}, h, g),
               MismatchError);
}

ExplainConfig small_explain(std::size_t runs, std::size_t parts) {
  ExplainConfig c;
  c.mc_runs = runs;
  c.partitions = parts;
  c.student.k = 8;
  c.student.epochs = 5;
  c.student.eta = 3;
  c.student.lr = 0.01;
  c.sampling.n = 2;
  c.seed = 31;
  return c;
}

TEST(MonteCarloTest, SingleRunLeavesOtherSubsetInTail) {
  const auto kg = toy_block_kg();
  const EmbeddingModel teacher = init_model(ModelKind::kTransEL2, 8, 100, 4, 1);
  const ExplanationReport r =
      mc_explain(teacher, kg.train, kg.train[0], small_explain(1, 2));
  EXPECT_EQ(r.runs.size(), 1u);
  EXPECT_EQ(r.ranked.size(), r.runs[0].subset.size());
  EXPECT_EQ(r.ranked.size() + r.never_sampled.size(), r.subgraph.size());
  EXPECT_GE(r.never_sampled.size(), r.subgraph.size() / 2);
}

TEST(MonteCarloTest, RunsAreRoundRobinAndDeterministic) {
  const auto kg = toy_block_kg();
  const EmbeddingModel teacher = init_model(ModelKind::kTransEL2, 8, 100, 4, 1);
  ExplainConfig c = small_explain(6, 3);
  const ExplanationReport a = mc_explain(teacher, kg.train, kg.train[5], c);
  c.threads = 3;
  const ExplanationReport b = mc_explain(teacher, kg.train, kg.train[5], c);
  ASSERT_EQ(a.runs.size(), 6u);
  for (std::size_t r = 0; r < 6; ++r) {
    EXPECT_EQ(a.runs[r].subset, b.runs[r].subset);
    EXPECT_EQ(a.runs[r].rank, b.runs[r].rank);
    EXPECT_EQ(a.runs[r].rank, 0.5 * static_cast<double>(
                                        a.runs[r].ranks.subject.rank +
                                        a.runs[r].ranks.object.rank));
  }
  std::size_t total = 0;
  for (const Contribution& c2 : a.ranked) total += c2.runs_containing;
  std::size_t expected = 0;
  for (const RunRecord& r : a.runs) expected += r.subset.size();
  EXPECT_EQ(total, expected);
}

TEST(MonteCarloTest, InvalidConfigThrows) {
  const auto kg = toy_block_kg();
  const EmbeddingModel teacher = init_model(ModelKind::kTransEL2, 8, 100, 4, 1);
  EXPECT_THROW(mc_explain(teacher, kg.train, kg.train[0], small_explain(0, 2)),
               RangeError);
  EXPECT_THROW(mc_explain(teacher, kg.train, kg.train[0], small_explain(1, 1)),
               RangeError);
  EXPECT_THROW(mc_explain(teacher, kg.train, kg.train[0], small_explain(1, 100000)),
               RangeError);
}

}  // namespace
}  // namespace kgex
