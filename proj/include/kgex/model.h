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

#ifndef KGEX_MODEL_H_
#define KGEX_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kgex/graph.h"

namespace kgex {

// Values are the on-disk tags of the model file.
enum class ModelKind : std::uint64_t {
  kTransEL1 = 0,
  kTransEL2 = 1,
  kDistMult = 2,
  kComplEx = 3,
};

std::string_view to_string(ModelKind kind);
// Accepts transe (= transe-l2), transe-l1, transe-l2, distmult, complex.
ModelKind parse_model_kind(std::string_view name);

// Real values per row: k, or 2k for ComplEx (k real parts, then k imaginary).
std::size_t row_width(ModelKind kind, std::size_t k);

// Entity and relation embedding tables, row-major.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(ModelKind kind, std::size_t k, std::size_t num_entities,
                 std::size_t num_relations);

  ModelKind kind() const { return kind_; }
  std::size_t k() const { return k_; }
  std::size_t width() const { return width_; }
  std::size_t num_entities() const { return num_entities_; }
  std::size_t num_relations() const { return num_relations_; }

  std::span<const double> entity(EntityId e) const {
    return {entities_.data() + static_cast<std::size_t>(e) * width_, width_};
  }
  std::span<double> entity(EntityId e) {
    return {entities_.data() + static_cast<std::size_t>(e) * width_, width_};
  }
  std::span<const double> relation(RelationId r) const {
    return {relations_.data() + static_cast<std::size_t>(r) * width_, width_};
  }
  std::span<double> relation(RelationId r) {
    return {relations_.data() + static_cast<std::size_t>(r) * width_, width_};
  }

  std::span<const double> entity_table() const { return entities_; }
  std::span<double> entity_table() { return entities_; }
  std::span<const double> relation_table() const { return relations_; }
  std::span<double> relation_table() { return relations_; }

  bool in_bounds(const Triple& t) const {
    return t.s < num_entities_ && t.o < num_entities_ && t.p < num_relations_;
  }

  // Exact comparison of shapes and table contents.
  friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;

 private:
  ModelKind kind_ = ModelKind::kTransEL2;
  std::size_t k_ = 0;
  std::size_t width_ = 0;
  std::size_t num_entities_ = 0;
  std::size_t num_relations_ = 0;
  std::vector<double> entities_;
  std::vector<double> relations_;
};

// Entries i.i.d. uniform in [-6/sqrt(k), 6/sqrt(k)], entity table first.
EmbeddingModel init_model(ModelKind kind, std::size_t k,
                          std::size_t num_entities, std::size_t num_relations,
                          std::uint64_t seed);

double score_rows(ModelKind kind, std::span<const double> s,
                  std::span<const double> p, std::span<const double> o);
double score(const EmbeddingModel& model, const Triple& t);

// Adds scale * df/d(row) into gs, gp, go. The output spans may alias each
// other (s == o triples); the inputs must not alias the outputs.
void accumulate_score_gradients(ModelKind kind, std::span<const double> s,
                                std::span<const double> p,
                                std::span<const double> o, double scale,
                                std::span<double> gs, std::span<double> gp,
                                std::span<double> go);

struct RowGradients {
  std::vector<double> s, p, o;
};
// df/de_s, df/dr_p, df/de_o as separate vectors.
RowGradients score_gradients(const EmbeddingModel& model, const Triple& t);

}  // namespace kgex

#endif  // KGEX_MODEL_H_
