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

#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "kgex/cli.h"
#include "kgex/manifest.h"
#include "kgex/model_io.h"
#include "test_util.h"

namespace kgex {
namespace {

using ::kgex::testing::slurp;
using ::kgex::testing::TempDir;

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "kgex");
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto kg = testing::toy_block_kg();
    train_ = dir_.file("train.tsv").string();
    test_ = dir_.file("test.tsv").string();
    testing::write_graph(train_, kg.train);
    testing::write_graph(test_, kg.test);
  }

  std::string model_path() {
    const std::string m = dir_.file("m.kgex").string();
    if (!std::filesystem::exists(m)) {
      const CliRun r = run({"train", "--graph", train_, "--out", m, "--k", "8",
                            "--epochs", "20", "--lr", "0.02", "--eta", "5",
                            "--batch-size", "100", "--seed", "1"});
      EXPECT_EQ(r.status, kExitOk) << r.err;
    }
    return m;
  }

  TempDir dir_;
  std::string train_, test_;
};

TEST_F(CliTest, TrainWritesModelLogAndManifest) {
  const std::string m = model_path();
  EXPECT_TRUE(std::filesystem::exists(m + ".log"));
  EXPECT_TRUE(std::filesystem::exists(m + ".entities.tsv"));
  const RunManifest man = read_manifest(m + ".manifest.json");
  EXPECT_EQ(man.command, "train");
  EXPECT_EQ(man.seed, 1u);
  EXPECT_EQ(man.outputs.at(m), file_digest(m));
  EXPECT_EQ(man.inputs.at(train_), file_digest(train_));
  EXPECT_EQ(man.config.at("k"), "8");
  const std::string log = slurp(m + ".log");
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 20);
}

TEST_F(CliTest, OmittedSeedIsRecorded) {
  const std::string m = dir_.file("s.kgex").string();
  ASSERT_EQ(run({"train", "--graph", train_, "--out", m, "--k", "4", "--epochs",
                 "1"})
                .status,
            kExitOk);
  const RunManifest man = read_manifest(m + ".manifest.json");
  const auto it = std::find(man.replay_argv.begin(), man.replay_argv.end(),
                            std::string("--seed"));
  ASSERT_NE(it, man.replay_argv.end());
  EXPECT_EQ(std::stoull(*std::next(it)), man.seed);
}

TEST_F(CliTest, EvaluatePrintsMetricsJson) {
  const CliRun r = run({"evaluate", "--model", model_path(), "--test", test_,
                        "--filter", train_, "--filter", test_, "--verbose"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GT(j.at("mrr").get<double>(), 0.0);
  EXPECT_GE(j.at("mr").get<double>(), 1.0);
  EXPECT_EQ(j.at("skipped").get<int>(), 0);
  EXPECT_NE(r.err.find("subject_rank"), std::string::npos);
}

TEST_F(CliTest, SampleDistillAndEvaluateOnSubgraphPool) {
  const std::string m = model_path();
  const std::string h = dir_.file("h.tsv").string();
  ASSERT_EQ(run({"sample-subgraph", "--graph", train_, "--target", "e0 r0 e20",
                 "--method", "rw", "--n", "10", "--seed", "3", "--out", h})
                .status,
            kExitOk);
  EXPECT_EQ(slurp(h).rfind("# method=rw n=10 seed=3", 0), 0u);
  const std::string s = dir_.file("student.kgex").string();
  const CliRun d = run({"distill-train", "--teacher", m, "--subgraph", h,
                        "--out", s, "--k", "8", "--epochs", "5", "--seed", "2"});
  ASSERT_EQ(d.status, kExitOk) << d.err;
  EXPECT_EQ(load_model(s).kind(), ModelKind::kTransEL2);
  const CliRun e = run({"evaluate", "--model", s, "--test", h, "--pool",
                        "subgraph:" + h});
  EXPECT_EQ(e.status, kExitOk) << e.err;
}

TEST_F(CliTest, ExplainReplayReproducesReport) {
  const std::string m = model_path();
  const std::string rep = dir_.file("rep.tsv").string();
  const CliRun r = run({"explain", "--teacher", m, "--graph", train_, "--target",
                        "e0 r0 e20", "--n", "2", "--mc-runs", "6",
                        "--partitions", "3", "--k", "8", "--epochs", "5",
                        "--out", rep});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const RunManifest man = read_manifest(rep + ".manifest.json");
  const std::string digest = file_digest(rep);
  EXPECT_EQ(man.outputs.at(rep), digest);
  std::filesystem::remove(rep);
  ASSERT_EQ(run(man.replay_argv).status, kExitOk);
  EXPECT_EQ(file_digest(rep), digest);
}

TEST_F(CliTest, ConfigFileBelowFlags) {
  const std::string cfg =
      dir_.write("c.conf", "# comment\nk = 6\nepochs = 2\nseed = 5\n").string();
  const std::string m = dir_.file("c.kgex").string();
  ASSERT_EQ(run({"train", "--graph", train_, "--out", m, "--config", cfg,
                 "--k", "3"})
                .status,
            kExitOk);
  const EmbeddingModel model = load_model(m);
  EXPECT_EQ(model.k(), 3u);
  EXPECT_EQ(read_manifest(m + ".manifest.json").seed, 5u);
  const std::string log = slurp(m + ".log");
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 2);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}).status, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).status, kExitUsage);
  EXPECT_EQ(run({"train", "--graph", train_, "--out", "x", "--bogus"}).status,
            kExitUsage);
  EXPECT_EQ(run({"train", "--help"}).status, kExitOk);
  EXPECT_EQ(run({"evaluate", "--model", dir_.file("none").string(), "--test",
                 test_})
                .status,
            kExitFailure);
  const std::string bad = dir_.write("bad.tsv", "a\tb\n").string();
  const CliRun r = run({"train", "--graph", bad, "--out",
                        dir_.file("b.kgex").string(), "--epochs", "1"});
  EXPECT_EQ(r.status, kExitFailure);
  EXPECT_NE(r.err.find("bad.tsv:1:"), std::string::npos) << r.err;
}

TEST_F(CliTest, Selftest) {
  const CliRun r = run({"selftest", "--seed", "1"});
  EXPECT_EQ(r.status, kExitOk) << r.out;
  EXPECT_NE(r.out.find(" 0 failed"), std::string::npos);
}

}  // namespace
}  // namespace kgex
