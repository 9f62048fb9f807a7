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

#ifndef KGEX_DISTILL_H_
#define KGEX_DISTILL_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kgex/graph.h"
#include "kgex/model.h"
#include "kgex/training.h"

namespace kgex {

// 0.5 (a - b)^2 when |a - b| <= 1, |a - b| - 0.5 otherwise.
double huber(double a, double b);
// d huber(a, b) / db.
double huber_derivative(double a, double b);

// <d_ij, d_jk> with d_ij = (g_i - g_j) / ||g_i - g_j||.
// Throws DegenerateGeometryError when g_i == g_j or g_j == g_k.
double angle_potential(std::span<const double> gi, std::span<const double> gj,
                       std::span<const double> gk);

struct AngleGradients {
  double value = 0.0;
  std::vector<double> d_i, d_j, d_k;
};
// Potential and its gradient; nullopt on degenerate geometry.
std::optional<AngleGradients> angle_potential_gradients(
    std::span<const double> gi, std::span<const double> gj,
    std::span<const double> gk);

struct TripleRows {
  std::span<const double> s, p, o;
};

inline TripleRows rows_of(const EmbeddingModel& m, const Triple& t) {
  return {m.entity(t.s), m.relation(t.p), m.entity(t.o)};
}

// The three cyclic potentials (s,p,o), (p,o,s), (o,s,p); nullopt entries are
// degenerate.
std::array<std::optional<double>, 3> cyclic_potentials(const TripleRows& rows);

struct RkdResult {
  double loss = 0.0;
  std::vector<double> d_s, d_p, d_o;
  // Terms dropped because either side was degenerate.
  std::size_t degenerate_terms = 0;
};

// Sum of Huber losses between teacher and student cyclic potentials, with
// gradients w.r.t. the student rows.
RkdResult rkd_kge_loss(const TripleRows& teacher, const TripleRows& student);
RkdResult rkd_kge_loss(const std::array<std::optional<double>, 3>& teacher,
                       const TripleRows& student);

// Trains a student on `subgraph` with L_KGE + lambda L_RKD-KGE. The student
// tables span the full vocabulary; negatives (and thus updates) stay inside
// the subgraph's entities unless `config.corruption_pool` says otherwise.
TrainResult train_student(const EmbeddingModel& teacher,
                          const KnowledgeGraph& subgraph,
                          const TrainConfig& config, double lambda);

}  // namespace kgex

#endif  // KGEX_DISTILL_H_
