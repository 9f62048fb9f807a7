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

#ifndef KGEX_TRAINING_H_
#define KGEX_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kgex/focuse.h"
#include "kgex/graph.h"
#include "kgex/loss.h"
#include "kgex/model.h"
#include "kgex/pool.h"
#include "kgex/rng.h"

namespace kgex {

enum class LossKind {
  kMulticlassNll,  // NLL over raw scores
  kSoftplusNll,    // NLL over softplus(f); FocusE with beta = 1 reduces to it
};

struct TrainConfig {
  ModelKind kind = ModelKind::kTransEL2;
  std::size_t k = 50;
  // Negatives per positive, in total over both sides.
  std::size_t eta = 2;
  double lr = 0.1;
  std::size_t epochs = 200;
  std::size_t batch_size = 512;
  // L2 weight on the rows touched by each batch.
  double gamma = 1e-4;
  LossKind loss = LossKind::kMulticlassNll;
  std::uint64_t seed = 0;
  // Defaults to the entities occurring in the training graph.
  std::optional<EntityPool> corruption_pool;
  FocusEConfig focuse;
  // Called once per epoch with the mean batch loss.
  std::function<void(std::size_t epoch, double mean_loss)> on_epoch;
};

// Throws RangeError on eta == 0, lr <= 0, epochs == 0, batch_size == 0, or
// gamma < 0.
void validate(const TrainConfig& config);

struct CorruptionBatch {
  Triple positive;
  std::vector<Triple> negatives;
};

// eta negatives, each replacing the subject or the object (fair coin) with a
// different entity drawn uniformly from `pool`. Accidental true triples are
// kept.
CorruptionBatch generate_corruptions(const Triple& t, std::size_t eta,
                                     const EntityPool& pool, Rng& rng);

// Dense per-table gradient storage that remembers which rows were written.
class GradientBuffer {
 public:
  GradientBuffer(std::size_t num_entities, std::size_t num_relations,
                 std::size_t width);

  std::span<double> entity(EntityId e);
  std::span<double> relation(RelationId r);
  std::span<const double> entity_table() const { return entities_; }
  std::span<const double> relation_table() const { return relations_; }
  // Rows in first-touch order.
  std::span<const std::size_t> touched_entities() const { return touched_e_; }
  std::span<const std::size_t> touched_relations() const { return touched_r_; }
  void clear();

 private:
  std::size_t width_;
  std::vector<double> entities_;
  std::vector<double> relations_;
  std::vector<char> flag_e_;
  std::vector<char> flag_r_;
  std::vector<std::size_t> touched_e_;
  std::vector<std::size_t> touched_r_;
};

// gamma * sum ||row||^2 over the touched rows of `grad`; adds 2 gamma row.
double l2_regularizer(const EmbeddingModel& model, double gamma,
                      GradientBuffer& grad);

struct AdamState {
  explicit AdamState(std::size_t size = 0) : m(size, 0.0), v(size, 0.0) {}
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

// Bias-corrected Adam over every parameter.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads, double lr);
// Same update restricted to `rows` (row-major, `width` values per row). The
// step counter still advances once.
void sparse_adam_step(AdamState& state, std::span<double> params,
                      std::span<const double> grads, std::size_t width,
                      std::span<const std::size_t> rows, double lr);

// Frozen teacher plus KD coefficient. Inactive when teacher is null or
// lambda == 0.
struct Distillation {
  const EmbeddingModel* teacher = nullptr;
  double lambda = 0.0;
  bool active() const { return teacher != nullptr && lambda != 0.0; }
};

struct ObjectiveOptions {
  LossKind loss = LossKind::kMulticlassNll;
  bool focuse = false;
  double beta = 1.0;
  double gamma = 0.0;
  Distillation distillation;
};

struct BatchItem {
  CorruptionBatch corruptions;
  // FocusE weight of the positive.
  double weight = 1.0;
};

struct ObjectiveValue {
  double loss = 0.0;
  std::size_t degenerate_kd_terms = 0;
};

// Mean over items of (KGE loss + lambda * RKD-KGE loss), plus the L2 term over
// touched rows. Gradients are accumulated into `grad`.
ObjectiveValue batch_objective(const EmbeddingModel& model,
                               std::span<const BatchItem> items,
                               const ObjectiveOptions& options,
                               GradientBuffer& grad);

struct TrainResult {
  EmbeddingModel model;
  std::vector<double> epoch_losses;
  std::size_t adam_steps = 0;
  std::size_t degenerate_kd_terms = 0;
};

// Epochs x batches of corrupt -> score -> loss + reg -> sparse Adam.
// Throws TrainingError on a non-finite batch loss.
TrainResult train(const KnowledgeGraph& g, const TrainConfig& config,
                  const Distillation& distillation = {});

}  // namespace kgex

#endif  // KGEX_TRAINING_H_
