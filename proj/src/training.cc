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

#include "kgex/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kgex/distill.h"
#include "kgex/error.h"

namespace kgex {

void validate(const TrainConfig& config) {
  if (config.k == 0) throw RangeError("k must be >= 1");
  if (config.eta == 0) throw RangeError("eta must be >= 1");
  if (!(config.lr > 0.0)) throw RangeError("learning rate must be > 0");
  if (config.epochs == 0) throw RangeError("epochs must be >= 1");
  if (config.batch_size == 0) throw RangeError("batch size must be >= 1");
  if (!(config.gamma >= 0.0)) throw RangeError("gamma must be >= 0");
  if (config.focuse.enabled && config.focuse.decay < 0.0) {
    throw RangeError("FocusE decay must be >= 0");
  }
}

CorruptionBatch generate_corruptions(const Triple& t, std::size_t eta,
                                     const EntityPool& pool, Rng& rng) {
  if (pool.size() < 2) {
    throw RangeError("corruption pool needs at least 2 entities");
  }
  CorruptionBatch batch{t, {}};
  batch.negatives.reserve(eta);
  for (std::size_t j = 0; j < eta; ++j) {
    Triple neg = t;
    if (coin_flip(rng)) {
      neg.s = pool.draw_excluding(rng, t.s);
    } else {
      neg.o = pool.draw_excluding(rng, t.o);
    }
    batch.negatives.push_back(neg);
  }
  return batch;
}

GradientBuffer::GradientBuffer(std::size_t num_entities,
                               std::size_t num_relations, std::size_t width)
    : width_(width),
      entities_(num_entities * width, 0.0),
      relations_(num_relations * width, 0.0),
      flag_e_(num_entities, 0),
      flag_r_(num_relations, 0) {}

std::span<double> GradientBuffer::entity(EntityId e) {
  if (!flag_e_[e]) {
    flag_e_[e] = 1;
    touched_e_.push_back(e);
  }
  return {entities_.data() + static_cast<std::size_t>(e) * width_, width_};
}

std::span<double> GradientBuffer::relation(RelationId r) {
  if (!flag_r_[r]) {
    flag_r_[r] = 1;
    touched_r_.push_back(r);
  }
  return {relations_.data() + static_cast<std::size_t>(r) * width_, width_};
}

void GradientBuffer::clear() {
  for (std::size_t e : touched_e_) {
    std::fill_n(entities_.begin() + e * width_, width_, 0.0);
    flag_e_[e] = 0;
  }
  for (std::size_t r : touched_r_) {
    std::fill_n(relations_.begin() + r * width_, width_, 0.0);
    flag_r_[r] = 0;
  }
  touched_e_.clear();
  touched_r_.clear();
}

double l2_regularizer(const EmbeddingModel& model, double gamma,
                      GradientBuffer& grad) {
  if (gamma == 0.0) return 0.0;
  double loss = 0.0;
  auto apply = [&](std::span<const double> row, std::span<double> g) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      loss += row[i] * row[i];
      g[i] += 2.0 * gamma * row[i];
    }
  };
  // Every row below is already touched, so the lists do not grow.
  for (std::size_t e : grad.touched_entities()) {
    apply(model.entity(static_cast<EntityId>(e)),
          grad.entity(static_cast<EntityId>(e)));
  }
  for (std::size_t r : grad.touched_relations()) {
    apply(model.relation(static_cast<RelationId>(r)),
          grad.relation(static_cast<RelationId>(r)));
  }
  return gamma * loss;
}

namespace {

inline void adam_update(AdamState& s, std::size_t i, double& param, double g,
                        double lr, double c1, double c2) {
  s.m[i] = kAdamBeta1 * s.m[i] + (1.0 - kAdamBeta1) * g;
  s.v[i] = kAdamBeta2 * s.v[i] + (1.0 - kAdamBeta2) * g * g;
  const double m_hat = s.m[i] / c1;
  const double v_hat = s.v[i] / c2;
  param -= lr * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
}

}  // namespace

void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads, double lr) {
  if (params.size() != grads.size() || state.m.size() != params.size()) {
    throw MismatchError("adam: parameter, gradient and state sizes differ");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(kAdamBeta1, t);
  const double c2 = 1.0 - std::pow(kAdamBeta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    adam_update(state, i, params[i], grads[i], lr, c1, c2);
  }
}

void sparse_adam_step(AdamState& state, std::span<double> params,
                      std::span<const double> grads, std::size_t width,
                      std::span<const std::size_t> rows, double lr) {
  if (params.size() != grads.size() || state.m.size() != params.size()) {
    throw MismatchError("adam: parameter, gradient and state sizes differ");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(kAdamBeta1, t);
  const double c2 = 1.0 - std::pow(kAdamBeta2, t);
  for (std::size_t row : rows) {
    for (std::size_t i = row * width; i < (row + 1) * width; ++i) {
      adam_update(state, i, params[i], grads[i], lr, c1, c2);
    }
  }
}

ObjectiveValue batch_objective(const EmbeddingModel& model,
                               std::span<const BatchItem> items,
                               const ObjectiveOptions& options,
                               GradientBuffer& grad) {
  ObjectiveValue value;
  if (items.empty()) return value;
  const double inv = 1.0 / static_cast<double>(items.size());
  const ModelKind kind = model.kind();
  std::vector<double> neg_scores;

  double total = 0.0;
  for (const BatchItem& item : items) {
    const Triple& pos = item.corruptions.positive;
    const auto& negs = item.corruptions.negatives;
    const double pos_score = score(model, pos);
    neg_scores.resize(negs.size());
    for (std::size_t j = 0; j < negs.size(); ++j) {
      neg_scores[j] = score(model, negs[j]);
    }

    LossResult l;
    if (options.focuse) {
      l = focuse_loss(pos_score, item.weight, neg_scores, options.beta);
    } else if (options.loss == LossKind::kSoftplusNll) {
      l = softplus_nll_loss(pos_score, neg_scores);
    } else {
      l = multiclass_nll_loss(pos_score, neg_scores);
    }
    total += l.loss;

    accumulate_score_gradients(kind, model.entity(pos.s), model.relation(pos.p),
                               model.entity(pos.o), l.d_positive * inv,
                               grad.entity(pos.s), grad.relation(pos.p),
                               grad.entity(pos.o));
    for (std::size_t j = 0; j < negs.size(); ++j) {
      const Triple& n = negs[j];
      accumulate_score_gradients(kind, model.entity(n.s), model.relation(n.p),
                                 model.entity(n.o), l.d_negatives[j] * inv,
                                 grad.entity(n.s), grad.relation(n.p),
                                 grad.entity(n.o));
    }

    if (options.distillation.active()) {
      const double lambda = options.distillation.lambda;
      RkdResult rkd = rkd_kge_loss(rows_of(*options.distillation.teacher, pos),
                                   rows_of(model, pos));
      total += lambda * rkd.loss;
      value.degenerate_kd_terms += rkd.degenerate_terms;
      const double scale = lambda * inv;
      auto add = [scale](std::span<const double> from, std::span<double> to) {
        for (std::size_t x = 0; x < from.size(); ++x) to[x] += scale * from[x];
      };
      add(rkd.d_s, grad.entity(pos.s));
      add(rkd.d_p, grad.relation(pos.p));
      add(rkd.d_o, grad.entity(pos.o));
    }
  }
  value.loss = total * inv + l2_regularizer(model, options.gamma, grad);
  return value;
}

namespace {

bool rows_finite(std::span<const double> table, std::size_t width,
                 std::span<const std::size_t> rows) {
  for (std::size_t row : rows) {
    for (std::size_t i = row * width; i < (row + 1) * width; ++i) {
      if (!std::isfinite(table[i])) return false;
    }
  }
  return true;
}

}  // namespace

TrainResult train(const KnowledgeGraph& g, const TrainConfig& config,
                  const Distillation& distillation) {
  validate(config);
  if (g.empty()) throw Error("cannot train on an empty graph");
  if (config.focuse.enabled && !g.has_weights()) {
    throw Error("FocusE requires a numeric weight column in the training graph");
  }
  if (distillation.teacher &&
      (distillation.teacher->num_entities() < g.num_entities() ||
       distillation.teacher->num_relations() < g.num_relations())) {
    throw MismatchError("teacher vocabulary is smaller than the graph's");
  }
  const EntityPool pool =
      config.corruption_pool ? *config.corruption_pool : EntityPool(g.entity_set());
  if (pool.size() < 2) {
    throw RangeError("corruption pool needs at least 2 entities");
  }

  TrainResult result;
  result.model = init_model(config.kind, config.k, g.num_entities(),
                            g.num_relations(), derive_seed(config.seed, 0));
  EmbeddingModel& model = result.model;
  const std::size_t width = model.width();
  Rng rng(derive_seed(config.seed, 1));

  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  GradientBuffer grad(model.num_entities(), model.num_relations(), width);
  AdamState entity_state(model.entity_table().size());
  AdamState relation_state(model.relation_table().size());
  std::vector<BatchItem> items;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    ObjectiveOptions options;
    options.loss = config.loss;
    options.focuse = config.focuse.enabled;
    options.beta = epoch_beta(config.focuse, epoch);
    options.gamma = config.gamma;
    options.distillation = distillation;

    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      items.clear();
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t pos = order[i];
        items.push_back({generate_corruptions(g[pos], config.eta, pool, rng),
                         g.has_weights() ? g.weight(pos) : 1.0});
      }

      grad.clear();
      const ObjectiveValue value = batch_objective(model, items, options, grad);
      if (!std::isfinite(value.loss)) {
        throw TrainingError(epoch, batches, "non-finite loss");
      }
      result.degenerate_kd_terms += value.degenerate_kd_terms;

      sparse_adam_step(entity_state, model.entity_table(), grad.entity_table(),
                       width, grad.touched_entities(), config.lr);
      sparse_adam_step(relation_state, model.relation_table(),
                       grad.relation_table(), width, grad.touched_relations(),
                       config.lr);
      if (!rows_finite(model.entity_table(), width, grad.touched_entities()) ||
          !rows_finite(model.relation_table(), width,
                       grad.touched_relations())) {
        throw TrainingError(epoch, batches, "non-finite embedding after update");
      }
      ++result.adam_steps;
      loss_sum += value.loss;
      ++batches;
    }
    const double mean = loss_sum / static_cast<double>(batches);
    result.epoch_losses.push_back(mean);
    if (config.on_epoch) config.on_epoch(epoch, mean);
  }
  return result;
}

}  // namespace kgex
