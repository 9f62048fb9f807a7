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

#include "kgex/selftest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "kgex/distill.h"
#include "kgex/eval.h"
#include "kgex/explain.h"
#include "kgex/focuse.h"
#include "kgex/graph.h"
#include "kgex/loss.h"
#include "kgex/model.h"
#include "kgex/rng.h"
#include "kgex/sampling.h"

namespace kgex {

namespace {

constexpr double kStep = 1e-6;
constexpr double kGradTolerance = 1e-4;

double relative_error(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double denom = std::max(std::sqrt(na), std::sqrt(nb));
  return denom == 0.0 ? std::sqrt(diff) : std::sqrt(diff) / denom;
}

std::vector<double> numeric_gradient(const std::function<double()>& f,
                                     std::span<double> x) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + kStep;
    const double up = f();
    x[i] = saved - kStep;
    const double down = f();
    x[i] = saved;
    g[i] = (up - down) / (2.0 * kStep);
  }
  return g;
}

// Five entities on a path plus one predicate-sharing triple elsewhere.
KnowledgeGraph small_graph() {
  auto ents = std::make_shared<Vocabulary>();
  auto rels = std::make_shared<Vocabulary>();
  for (const char* e : {"a", "b", "c", "d", "e", "f"}) ents->intern(e);
  for (const char* r : {"r0", "r1"}) rels->intern(r);
  std::vector<Triple> t = {{0, 0, 1}, {1, 1, 2}, {2, 0, 3},
                           {3, 1, 4}, {4, 0, 5}, {5, 1, 0}};
  return KnowledgeGraph(ents, rels, std::move(t));
}

class Checker {
 public:
  explicit Checker(std::ostream& log) : log_(log) {}

  void check(const std::string& name, bool ok, const std::string& detail = {}) {
    log_ << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) log_ << "  (" << detail << ")";
    log_ << '\n';
    ++(ok ? summary_.passed : summary_.failed);
  }

  void run(const std::string& name, const std::function<void(Checker&)>& body) {
    try {
      body(*this);
    } catch (const std::exception& e) {
      check(name, false, std::string("threw: ") + e.what());
    }
  }

  SelftestSummary summary() const { return summary_; }

 private:
  std::ostream& log_;
  SelftestSummary summary_;
};

void check_score_gradients(Checker& c, std::uint64_t seed) {
  for (ModelKind kind : {ModelKind::kTransEL1, ModelKind::kTransEL2,
                         ModelKind::kDistMult, ModelKind::kComplEx}) {
    EmbeddingModel m = init_model(kind, 6, 3, 1, derive_seed(seed, 11));
    const Triple t{0, 0, 1};
    const RowGradients analytic = score_gradients(m, t);
    auto f = [&] { return score(m, t); };
    const double err = std::max(
        {relative_error(analytic.s, numeric_gradient(f, m.entity(0))),
         relative_error(analytic.p, numeric_gradient(f, m.relation(0))),
         relative_error(analytic.o, numeric_gradient(f, m.entity(1)))});
    c.check("score gradient " + std::string(to_string(kind)),
            err <= kGradTolerance, "rel err " + std::to_string(err));
  }
}

void check_losses(Checker& c) {
  std::vector<double> negs = {0.3, -1.2, 2.5};
  double pos = 0.7;
  const LossResult r = multiclass_nll_loss(pos, negs);
  std::vector<double> analytic = {r.d_positive};
  analytic.insert(analytic.end(), r.d_negatives.begin(), r.d_negatives.end());
  std::vector<double> x = {pos, negs[0], negs[1], negs[2]};
  auto f = [&] {
    return multiclass_nll_loss(x[0], std::span<const double>(x).subspan(1)).loss;
  };
  c.check("multiclass-nll gradient",
          relative_error(analytic, numeric_gradient(f, x)) <= kGradTolerance);

  const LossResult huge = multiclass_nll_loss(1000.0, std::vector<double>{-1000.0});
  c.check("multiclass-nll stable at large scores",
          std::isfinite(huge.loss) && huge.loss >= 0.0);

  const LossResult a = focuse_loss(pos, 0.3, negs, 1.0);
  const LossResult b = softplus_nll_loss(pos, negs);
  c.check("focuse beta=1 equals softplus nll",
          std::abs(a.loss - b.loss) <= 1e-12 &&
              std::abs(a.d_positive - b.d_positive) <= 1e-12);

  bool alphas_ok = true;
  for (double w : {0.0, 0.25, 1.0}) {
    for (double beta : {0.0, 0.5, 1.0}) {
      const double ap = modulating_factor(w, beta, true);
      const double an = modulating_factor(w, beta, false);
      alphas_ok = alphas_ok && ap >= 0.0 && ap <= 1.0 && an >= 0.0 && an <= 1.0;
    }
  }
  c.check("focuse modulating factors lie in [0,1]", alphas_ok);
  c.check("focuse beta schedule",
          beta_schedule(0, 10) == 1.0 && beta_schedule(5, 10) == 0.5 &&
              beta_schedule(20, 10) == 0.0 && beta_schedule(0, 0) == 0.0);
}

void check_distillation(Checker& c, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 12));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> gi(5), gj(5), gk(5);
  for (auto* v : {&gi, &gj, &gk}) {
    for (double& x : *v) x = u(rng);
  }
  const auto ag = angle_potential_gradients(gi, gj, gk);
  auto f = [&] { return angle_potential(gi, gj, gk); };
  const double err = ag ? std::max({relative_error(ag->d_i, numeric_gradient(f, gi)),
                                    relative_error(ag->d_j, numeric_gradient(f, gj)),
                                    relative_error(ag->d_k, numeric_gradient(f, gk))})
                        : 1.0;
  c.check("angle potential gradient", err <= kGradTolerance,
          "rel err " + std::to_string(err));
  c.check("angle potential bounded", ag && std::abs(ag->value) <= 1.0 + 1e-12);
  c.check("angle potential degenerate -> nullopt",
          !angle_potential_gradients(gi, gi, gk).has_value());

  const EmbeddingModel m = init_model(ModelKind::kComplEx, 4, 3, 1, seed);
  const TripleRows rows = rows_of(m, {0, 0, 1});
  const RkdResult same = rkd_kge_loss(rows, rows);
  c.check("rkd loss zero for identical geometry", same.loss == 0.0);
  c.check("huber branches", huber(0.0, 1.0) == 0.5 && huber(0.0, 3.0) == 2.5);
}

void check_ranking(Checker& c) {
  // All-zero DistMult scores tie everywhere, so the pessimistic rank is last.
  const EmbeddingModel m(ModelKind::kDistMult, 3, 6, 2);
  const EntityPool pool = EntityPool::all(6);
  const RankResult r = rank_triple(m, {0, 0, 1}, pool, nullptr);
  c.check("ties rank pessimistically",
          r.subject.rank == 6 && r.object.rank == 6);
  const std::vector<std::size_t> ranks = {1, 2, 4, 20};
  const Metrics mt = metrics_from_ranks(ranks);
  c.check("metrics from ranks",
          std::abs(mt.mr - 6.75) < 1e-12 && std::abs(mt.hits1 - 0.25) < 1e-12 &&
              std::abs(mt.hits10 - 0.75) < 1e-12 &&
              std::abs(mt.mrr - (1.0 + 0.5 + 0.25 + 0.05) / 4.0) < 1e-12);
}

void check_sampling(Checker& c, std::uint64_t seed) {
  const KnowledgeGraph g = small_graph();
  const Triple target{1, 1, 2};
  const std::vector<std::size_t> hood =
      neighborhood_positions(g, target.s, target.o);
  for (SamplingMethod method :
       {SamplingMethod::kPredicateNeighborhood, SamplingMethod::kRandomWalk}) {
    const Subgraph h = sample_subgraph(g, target, {method, 3, seed});
    const bool contains = std::includes(h.positions.begin(), h.positions.end(),
                                        hood.begin(), hood.end());
    const bool sorted_unique =
        std::is_sorted(h.positions.begin(), h.positions.end()) &&
        std::adjacent_find(h.positions.begin(), h.positions.end()) ==
            h.positions.end();
    const Subgraph again = sample_subgraph(g, target, {method, 3, seed});
    c.check("sampler " + std::string(to_string(method)) +
                " contains the target neighbourhood",
            contains && sorted_unique);
    c.check("sampler " + std::string(to_string(method)) + " is deterministic",
            again.positions == h.positions);
  }

  std::vector<std::size_t> h(23);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = i * 2;
  Rng rng(derive_seed(seed, 13));
  const auto parts = partition_subgraph(h, 5, rng);
  std::vector<std::size_t> joined;
  std::size_t lo = h.size(), hi = 0;
  for (const auto& p : parts) {
    joined.insert(joined.end(), p.begin(), p.end());
    lo = std::min(lo, p.size());
    hi = std::max(hi, p.size());
  }
  std::sort(joined.begin(), joined.end());
  c.check("partition is a balanced cover", joined == h && hi - lo <= 1);
}

}  // namespace

SelftestSummary run_selftest(std::uint64_t seed, std::ostream& log) {
  Checker c(log);
  c.run("score gradients", [&](Checker& k) { check_score_gradients(k, seed); });
  c.run("losses", [&](Checker& k) { check_losses(k); });
  c.run("distillation", [&](Checker& k) { check_distillation(k, seed); });
  c.run("ranking", [&](Checker& k) { check_ranking(k); });
  c.run("sampling", [&](Checker& k) { check_sampling(k, seed); });
  return c.summary();
}

}  // namespace kgex
