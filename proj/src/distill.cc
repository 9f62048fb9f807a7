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

#include "kgex/distill.h"

#include <cmath>

#include "kgex/error.h"

namespace kgex {

double huber(double a, double b) {
  const double diff = std::abs(a - b);
  return diff <= 1.0 ? 0.5 * diff * diff : diff - 0.5;
}

double huber_derivative(double a, double b) {
  const double diff = a - b;
  if (std::abs(diff) <= 1.0) return -diff;
  return diff > 0.0 ? -1.0 : 1.0;
}

namespace {

// Fills `out` with (x - y) and returns its norm.
double difference(std::span<const double> x, std::span<const double> y,
                  std::vector<double>& out) {
  out.resize(x.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = x[i] - y[i];
    sq += out[i] * out[i];
  }
  return std::sqrt(sq);
}

}  // namespace

double angle_potential(std::span<const double> gi, std::span<const double> gj,
                       std::span<const double> gk) {
  std::vector<double> u, v;
  const double nu = difference(gi, gj, u);
  const double nv = difference(gj, gk, v);
  if (nu == 0.0 || nv == 0.0) {
    throw DegenerateGeometryError("angle potential of coincident points");
  }
  // Same operation order as angle_potential_gradients, so both agree bitwise.
  double phi = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) phi += (u[i] / nu) * (v[i] / nv);
  return phi;
}

std::optional<AngleGradients> angle_potential_gradients(
    std::span<const double> gi, std::span<const double> gj,
    std::span<const double> gk) {
  std::vector<double> u, v;
  const double nu = difference(gi, gj, u);
  const double nv = difference(gj, gk, v);
  if (nu == 0.0 || nv == 0.0) return std::nullopt;
  const std::size_t d = u.size();
  for (std::size_t i = 0; i < d; ++i) {
    u[i] /= nu;
    v[i] /= nv;
  }
  double phi = 0.0;
  for (std::size_t i = 0; i < d; ++i) phi += u[i] * v[i];

  AngleGradients out;
  out.value = phi;
  out.d_i.resize(d);
  out.d_j.resize(d);
  out.d_k.resize(d);
  // d phi / du = (b - phi a) / |u|,  d phi / dv = (a - phi b) / |v|.
  for (std::size_t i = 0; i < d; ++i) {
    const double du = (v[i] - phi * u[i]) / nu;
    const double dv = (u[i] - phi * v[i]) / nv;
    out.d_i[i] = du;
    out.d_j[i] = dv - du;
    out.d_k[i] = -dv;
  }
  return out;
}

std::array<std::optional<double>, 3> cyclic_potentials(const TripleRows& r) {
  auto safe = [](auto a, auto b, auto c) -> std::optional<double> {
    try {
      return angle_potential(a, b, c);
    } catch (const DegenerateGeometryError&) {
      return std::nullopt;
    }
  };
  return {safe(r.s, r.p, r.o), safe(r.p, r.o, r.s), safe(r.o, r.s, r.p)};
}

RkdResult rkd_kge_loss(const TripleRows& teacher, const TripleRows& student) {
  return rkd_kge_loss(cyclic_potentials(teacher), student);
}

RkdResult rkd_kge_loss(const std::array<std::optional<double>, 3>& teacher,
                       const TripleRows& student) {
  const std::size_t d = student.s.size();
  RkdResult out;
  out.d_s.assign(d, 0.0);
  out.d_p.assign(d, 0.0);
  out.d_o.assign(d, 0.0);

  struct Term {
    std::span<const double> i, j, k;
    std::vector<double>*gi, *gj, *gk;
  };
  const Term terms[3] = {
      {student.s, student.p, student.o, &out.d_s, &out.d_p, &out.d_o},
      {student.p, student.o, student.s, &out.d_p, &out.d_o, &out.d_s},
      {student.o, student.s, student.p, &out.d_o, &out.d_s, &out.d_p},
  };
  for (int t = 0; t < 3; ++t) {
    const Term& term = terms[t];
    std::optional<AngleGradients> phi =
        teacher[t] ? angle_potential_gradients(term.i, term.j, term.k)
                   : std::nullopt;
    if (!phi) {
      ++out.degenerate_terms;
      continue;
    }
    out.loss += huber(*teacher[t], phi->value);
    const double scale = huber_derivative(*teacher[t], phi->value);
    for (std::size_t x = 0; x < d; ++x) {
      (*term.gi)[x] += scale * phi->d_i[x];
      (*term.gj)[x] += scale * phi->d_j[x];
      (*term.gk)[x] += scale * phi->d_k[x];
    }
  }
  return out;
}

TrainResult train_student(const EmbeddingModel& teacher,
                          const KnowledgeGraph& subgraph,
                          const TrainConfig& config, double lambda) {
  if (subgraph.empty()) throw Error("cannot train a student on an empty subgraph");
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw RangeError("KD coefficient must be finite and >= 0");
  }
  if (subgraph.num_entities() > teacher.num_entities() ||
      subgraph.num_relations() > teacher.num_relations()) {
    throw MismatchError("subgraph vocabulary exceeds the teacher's");
  }
  return train(subgraph, config, Distillation{&teacher, lambda});
}

}  // namespace kgex
