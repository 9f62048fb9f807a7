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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "kgex/distill.h"
#include "kgex/error.h"
#include "kgex/training.h"
#include "test_util.h"

namespace kgex {
namespace {

using ::kgex::testing::numeric_gradient;
using ::kgex::testing::random_vector;
using ::kgex::testing::relative_error;

// Direct normalised-difference computation, independent of the library.
double reference_angle(const std::vector<double>& a, const std::vector<double>& b,
                       const std::vector<double>& c) {
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double u = a[i] - b[i], v = b[i] - c[i];
    dot += u * v;
    nu += u * u;
    nv += v * v;
  }
  return dot / std::sqrt(nu * nv);
}

TEST(HuberTest, Branches) {
  EXPECT_EQ(huber(0.7, 0.7), 0.0);
  EXPECT_DOUBLE_EQ(huber(0.5, 0.0), 0.125);
  EXPECT_DOUBLE_EQ(huber(3.0, 0.0), 2.5);
  EXPECT_DOUBLE_EQ(huber(0.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(huber(-2.0, 0.0), 1.5);
}

TEST(HuberTest, DerivativeMatchesFiniteDifferences) {
  for (double b : {-2.5, -0.4, 0.0, 0.3, 1.7}) {
    std::vector<double> x = {b};
    auto f = [&] { return huber(0.2, x[0]); };
    EXPECT_NEAR(huber_derivative(0.2, b), numeric_gradient(f, x)[0], 1e-6);
  }
}

TEST(AnglePotentialTest, HandCases) {
  const std::vector<double> a = {0, 0}, b = {1, 0}, c = {2, 0};
  EXPECT_DOUBLE_EQ(angle_potential(a, b, c), 1.0);
  const std::vector<double> d = {1, 0}, e = {0, 0}, f = {0, 1};
  EXPECT_DOUBLE_EQ(angle_potential(d, e, f), 0.0);
}

TEST(AnglePotentialTest, MatchesReference) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_vector(rng, 7), b = random_vector(rng, 7),
               c = random_vector(rng, 7);
    EXPECT_NEAR(angle_potential(a, b, c), reference_angle(a, b, c), 1e-12);
  }
}

TEST(AnglePotentialTest, DegenerateThrows) {
  const std::vector<double> a = {1, 2}, c = {0, 5};
  EXPECT_THROW(angle_potential(a, a, c), DegenerateGeometryError);
  EXPECT_THROW(angle_potential(c, a, a), DegenerateGeometryError);
  EXPECT_FALSE(angle_potential_gradients(a, a, c).has_value());
}

TEST(AnglePotentialTest, GradientMatchesFiniteDifferences) {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    auto a = random_vector(rng, 6), b = random_vector(rng, 6),
         c = random_vector(rng, 6);
    const auto g = angle_potential_gradients(a, b, c);
    ASSERT_TRUE(g.has_value());
    auto f = [&] { return angle_potential(a, b, c); };
    EXPECT_LE(relative_error(g->d_i, numeric_gradient(f, a)), 1e-5);
    EXPECT_LE(relative_error(g->d_j, numeric_gradient(f, b)), 1e-5);
    EXPECT_LE(relative_error(g->d_k, numeric_gradient(f, c)), 1e-5);
  }
}

TEST(RkdLossTest, IdenticalRowsGiveZero) {
  const EmbeddingModel m = init_model(ModelKind::kDistMult, 8, 3, 2, 1);
  const RkdResult r = rkd_kge_loss(rows_of(m, {0, 1, 2}), rows_of(m, {0, 1, 2}));
  EXPECT_EQ(r.loss, 0.0);
  EXPECT_EQ(r.degenerate_terms, 0u);
  for (double x : r.d_s) EXPECT_EQ(x, 0.0);
}

TEST(RkdLossTest, ScaleAndTranslationInvariant) {
  Rng rng(10);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_vector(rng, 5), p = random_vector(rng, 5),
               o = random_vector(rng, 5), shift = random_vector(rng, 5);
    auto move = [&](const std::vector<double>& v) {
      std::vector<double> out(v.size());
      for (std::size_t d = 0; d < v.size(); ++d) out[d] = 2.0 * v[d] + shift[d];
      return out;
    };
    const auto s2 = move(s), p2 = move(p), o2 = move(o);
    const RkdResult r = rkd_kge_loss(TripleRows{s, p, o}, TripleRows{s2, p2, o2});
    EXPECT_LE(r.loss, 1e-20);
  }
}

TEST(RkdLossTest, GradientMatchesFiniteDifferences) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto ts = random_vector(rng, 6), tp = random_vector(rng, 6),
               to = random_vector(rng, 6);
    auto s = random_vector(rng, 6, -2, 2), p = random_vector(rng, 6, -2, 2),
         o = random_vector(rng, 6, -2, 2);
    const TripleRows teacher{ts, tp, to};
    auto f = [&] { return rkd_kge_loss(teacher, TripleRows{s, p, o}).loss; };
    const RkdResult r = rkd_kge_loss(teacher, TripleRows{s, p, o});
    EXPECT_LE(relative_error(r.d_s, numeric_gradient(f, s)), 1e-5);
    EXPECT_LE(relative_error(r.d_p, numeric_gradient(f, p)), 1e-5);
    EXPECT_LE(relative_error(r.d_o, numeric_gradient(f, o)), 1e-5);
  }
}

TEST(RkdLossTest, DegenerateTermsAreCountedAndSkipped) {
  const std::vector<double> a = {1, 0}, b = {0, 1}, c = {1, 1};
  // Student s == p collapses terms (s,p,o) and (o,s,p).
  const RkdResult r = rkd_kge_loss(TripleRows{a, b, c}, TripleRows{a, a, c});
  EXPECT_EQ(r.degenerate_terms, 2u);
  EXPECT_TRUE(std::isfinite(r.loss));
  const RkdResult t = rkd_kge_loss(TripleRows{a, a, c}, TripleRows{a, b, c});
  EXPECT_EQ(t.degenerate_terms, 2u);
}

TrainConfig student_config() {
  TrainConfig c;
  c.k = 8;
  c.epochs = 20;
  c.batch_size = 32;
  c.lr = 0.01;
  c.eta = 5;
  c.seed = 19;
  return c;
}

TEST(TrainStudentTest, ZeroLambdaEqualsPlainTraining) {
  const auto kg = testing::toy_block_kg();
  const EmbeddingModel teacher = init_model(ModelKind::kTransEL2, 8, 100, 4, 2);
  std::vector<std::size_t> pos(80);
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = 3 * i;
  const KnowledgeGraph sub = kg.train.subset(pos);
  const TrainResult a = train_student(teacher, sub, student_config(), 0.0);
  const TrainResult b = train(sub, student_config());
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.epoch_losses, b.epoch_losses);
}

TEST(TrainStudentTest, LargeLambdaPullsAnglesTowardsTeacher) {
  const auto kg = testing::toy_block_kg();
  TrainConfig tc = student_config();
  tc.epochs = 40;
  const EmbeddingModel teacher = train(kg.train, tc).model;
  std::vector<std::size_t> pos(60);
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = 7 * i;
  const KnowledgeGraph sub = kg.train.subset(pos);

  auto gap = [&](const EmbeddingModel& student) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const Triple& t : sub.triples()) {
      const auto a = cyclic_potentials(rows_of(teacher, t));
      const auto b = cyclic_potentials(rows_of(student, t));
      for (int i = 0; i < 3; ++i) {
        if (a[i] && b[i]) {
          sum += std::abs(*a[i] - *b[i]);
          ++n;
        }
      }
    }
    return sum / static_cast<double>(n);
  };
  for (std::uint64_t seed : {1, 2, 3}) {
    TrainConfig c = student_config();
    c.seed = seed;
    const double plain = gap(train_student(teacher, sub, c, 0.0).model);
    const double kd = gap(train_student(teacher, sub, c, 1e6).model);
    EXPECT_LT(kd, plain) << "seed " << seed;
  }
}

TEST(TrainStudentTest, EmptySubgraphThrows) {
  const auto kg = testing::toy_block_kg();
  const EmbeddingModel teacher = init_model(ModelKind::kTransEL2, 8, 100, 4, 2);
  const KnowledgeGraph empty = kg.train.subset(std::vector<std::size_t>{});
  EXPECT_THROW(train_student(teacher, empty, student_config(), 3.0), Error);
}

}  // namespace
}  // namespace kgex
