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

#ifndef KGEX_TESTS_TEST_UTIL_H_
#define KGEX_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kgex/eval.h"
#include "kgex/graph.h"
#include "kgex/model.h"
#include "kgex/pool.h"
#include "kgex/rng.h"

namespace kgex::testing {

inline constexpr double kFdStep = 1e-6;

// Central differences of f around x, one coordinate at a time.
inline std::vector<double> numeric_gradient(const std::function<double()>& f,
                                            std::span<double> x,
                                            double h = kFdStep) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = f();
    x[i] = saved - h;
    const double down = f();
    x[i] = saved;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// ||a - b|| / max(||a||, ||b||); absolute when both vanish.
inline double relative_error(std::span<const double> a,
                             std::span<const double> b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double denom = std::max(std::sqrt(na), std::sqrt(nb));
  return denom < 1e-12 ? std::sqrt(diff) : std::sqrt(diff) / denom;
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

inline std::shared_ptr<Vocabulary> labels(std::initializer_list<const char*> l) {
  auto v = std::make_shared<Vocabulary>();
  for (const char* s : l) v->intern(s);
  return v;
}

// {(A,r1,B), (B,r1,C), (A,r2,C), (D,r1,A), (C,r2,D)}.
inline KnowledgeGraph demo_graph() {
  auto ents = labels({"A", "B", "C", "D"});
  auto rels = labels({"r1", "r2"});
  return KnowledgeGraph(ents, rels,
                        {{0, 0, 1}, {1, 0, 2}, {0, 1, 2}, {3, 0, 0}, {2, 1, 3}});
}

// Random graph over `ne` entities and `nr` relations with up to `nt` triples.
inline KnowledgeGraph random_graph(Rng& rng, std::size_t ne, std::size_t nr,
                                   std::size_t nt) {
  auto ents = std::make_shared<Vocabulary>();
  auto rels = std::make_shared<Vocabulary>();
  for (std::size_t i = 0; i < ne; ++i) ents->intern("e" + std::to_string(i));
  for (std::size_t i = 0; i < nr; ++i) rels->intern("r" + std::to_string(i));
  std::vector<Triple> t;
  for (std::size_t i = 0; i < nt; ++i) {
    t.push_back({static_cast<EntityId>(uniform_index(rng, ne)),
                 static_cast<RelationId>(uniform_index(rng, nr)),
                 static_cast<EntityId>(uniform_index(rng, ne))});
  }
  return KnowledgeGraph(ents, rels, std::move(t));
}

struct ToyKg {
  KnowledgeGraph train;
  KnowledgeGraph test;
};

// Five blocks of 20 entities. Relation r links entity j of block r to entities
// j-3..j+3 (mod 20) of block r+1: 560 triples, 60 held out.
inline ToyKg toy_block_kg(std::uint64_t split_seed = 17) {
  constexpr int kBlock = 20;
  auto ents = std::make_shared<Vocabulary>();
  auto rels = std::make_shared<Vocabulary>();
  for (int i = 0; i < 5 * kBlock; ++i) ents->intern("e" + std::to_string(i));
  for (int r = 0; r < 4; ++r) rels->intern("r" + std::to_string(r));
  std::vector<Triple> all;
  for (int r = 0; r < 4; ++r) {
    for (int j = 0; j < kBlock; ++j) {
      for (int d = -3; d <= 3; ++d) {
        const int tail = (r + 1) * kBlock + ((j + d + kBlock) % kBlock);
        all.push_back({static_cast<EntityId>(r * kBlock + j),
                       static_cast<RelationId>(r),
                       static_cast<EntityId>(tail)});
      }
    }
  }
  Rng rng(split_seed);
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<Triple> test(all.begin(), all.begin() + 60);
  std::vector<Triple> train(all.begin() + 60, all.end());
  return {KnowledgeGraph(ents, rels, std::move(train)),
          KnowledgeGraph(ents, rels, std::move(test))};
}

// Scores every pool candidate, sorts descending, and counts the prefix that
// ties or beats the positive.
inline std::size_t brute_force_rank(const EmbeddingModel& m, const Triple& t,
                                    const EntityPool& pool,
                                    const TrueTripleSet* filter, bool subject) {
  const double pos = score(m, t);
  std::vector<double> scores;
  for (EntityId e : pool.members()) {
    Triple c = t;
    (subject ? c.s : c.o) = e;
    if (c == t) continue;
    if (filter != nullptr && filter->contains(c)) continue;
    scores.push_back(score(m, c));
  }
  std::sort(scores.begin(), scores.end(), std::greater<>());
  std::size_t better = 0;
  while (better < scores.size() && scores[better] >= pos) ++better;
  return better + 1;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("kgex_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }
  std::filesystem::path write(const std::string& name,
                              const std::string& content) const {
    const auto p = file(name);
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_graph(const std::filesystem::path& p, const KnowledgeGraph& g) {
  std::ofstream out(p, std::ios::binary);
  for (const Triple& t : g.triples()) out << g.format(t) << '\n';
}

}  // namespace kgex::testing

#endif  // KGEX_TESTS_TEST_UTIL_H_
