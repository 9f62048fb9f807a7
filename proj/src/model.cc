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

#include "kgex/model.h"

#include <cmath>
#include <random>
#include <string>

#include "kgex/error.h"

namespace kgex {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kTransEL1: return "transe-l1";
    case ModelKind::kTransEL2: return "transe-l2";
    case ModelKind::kDistMult: return "distmult";
    case ModelKind::kComplEx: return "complex";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "transe" || name == "transe-l2") return ModelKind::kTransEL2;
  if (name == "transe-l1") return ModelKind::kTransEL1;
  if (name == "distmult") return ModelKind::kDistMult;
  if (name == "complex") return ModelKind::kComplEx;
  throw Error("unknown model kind '" + std::string(name) + "'");
}

std::size_t row_width(ModelKind kind, std::size_t k) {
  return kind == ModelKind::kComplEx ? 2 * k : k;
}

EmbeddingModel::EmbeddingModel(ModelKind kind, std::size_t k,
                               std::size_t num_entities,
                               std::size_t num_relations)
    : kind_(kind),
      k_(k),
      width_(row_width(kind, k)),
      num_entities_(num_entities),
      num_relations_(num_relations),
      entities_(num_entities * width_, 0.0),
      relations_(num_relations * width_, 0.0) {
  if (k == 0) throw RangeError("embedding size k must be >= 1");
}

EmbeddingModel init_model(ModelKind kind, std::size_t k,
                          std::size_t num_entities, std::size_t num_relations,
                          std::uint64_t seed) {
  if (num_entities == 0 || num_relations == 0) {
    throw RangeError("cannot initialise a model over an empty vocabulary");
  }
  EmbeddingModel model(kind, k, num_entities, num_relations);
  const double bound = 6.0 / std::sqrt(static_cast<double>(k));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& x : model.entity_table()) x = dist(rng);
  for (double& x : model.relation_table()) x = dist(rng);
  return model;
}

double score_rows(ModelKind kind, std::span<const double> s,
                  std::span<const double> p, std::span<const double> o) {
  const std::size_t d = s.size();
  switch (kind) {
    case ModelKind::kTransEL1: {
      double norm = 0.0;
      for (std::size_t i = 0; i < d; ++i) norm += std::abs(s[i] + p[i] - o[i]);
      return -norm;
    }
    case ModelKind::kTransEL2: {
      double sq = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double diff = s[i] + p[i] - o[i];
        sq += diff * diff;
      }
      return -std::sqrt(sq);
    }
    case ModelKind::kDistMult: {
      double sum = 0.0;
      for (std::size_t i = 0; i < d; ++i) sum += s[i] * p[i] * o[i];
      return sum;
    }
    case ModelKind::kComplEx: {
      // Re(<s, p, conj(o)>) with rows laid out as [re | im].
      const std::size_t k = d / 2;
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double sr = s[i], si = s[k + i];
        const double pr = p[i], pi = p[k + i];
        const double orr = o[i], oi = o[k + i];
        sum += sr * pr * orr + si * pr * oi + sr * pi * oi - si * pi * orr;
      }
      return sum;
    }
  }
  return 0.0;
}

double score(const EmbeddingModel& model, const Triple& t) {
  return score_rows(model.kind(), model.entity(t.s), model.relation(t.p),
                    model.entity(t.o));
}

void accumulate_score_gradients(ModelKind kind, std::span<const double> s,
                                std::span<const double> p,
                                std::span<const double> o, double scale,
                                std::span<double> gs, std::span<double> gp,
                                std::span<double> go) {
  const std::size_t d = s.size();
  switch (kind) {
    case ModelKind::kTransEL1: {
      for (std::size_t i = 0; i < d; ++i) {
        const double diff = s[i] + p[i] - o[i];
        const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
        gs[i] -= scale * sign;
        gp[i] -= scale * sign;
        go[i] += scale * sign;
      }
      return;
    }
    case ModelKind::kTransEL2: {
      double sq = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double diff = s[i] + p[i] - o[i];
        sq += diff * diff;
      }
      // Zero gradient at exact translation.
      if (sq == 0.0) return;
      const double inv = scale / std::sqrt(sq);
      for (std::size_t i = 0; i < d; ++i) {
        const double g = (s[i] + p[i] - o[i]) * inv;
        gs[i] -= g;
        gp[i] -= g;
        go[i] += g;
      }
      return;
    }
    case ModelKind::kDistMult: {
      for (std::size_t i = 0; i < d; ++i) {
        gs[i] += scale * p[i] * o[i];
        gp[i] += scale * s[i] * o[i];
        go[i] += scale * s[i] * p[i];
      }
      return;
    }
    case ModelKind::kComplEx: {
      const std::size_t k = d / 2;
      for (std::size_t i = 0; i < k; ++i) {
        const double sr = s[i], si = s[k + i];
        const double pr = p[i], pi = p[k + i];
        const double orr = o[i], oi = o[k + i];
        gs[i] += scale * (pr * orr + pi * oi);
        gs[k + i] += scale * (pr * oi - pi * orr);
        gp[i] += scale * (sr * orr + si * oi);
        gp[k + i] += scale * (sr * oi - si * orr);
        go[i] += scale * (sr * pr - si * pi);
        go[k + i] += scale * (si * pr + sr * pi);
      }
      return;
    }
  }
}

RowGradients score_gradients(const EmbeddingModel& model, const Triple& t) {
  const std::size_t d = model.width();
  RowGradients g{std::vector<double>(d), std::vector<double>(d),
                 std::vector<double>(d)};
  accumulate_score_gradients(model.kind(), model.entity(t.s),
                             model.relation(t.p), model.entity(t.o), 1.0, g.s,
                             g.p, g.o);
  return g;
}

}  // namespace kgex
