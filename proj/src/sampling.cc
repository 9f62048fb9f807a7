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

#include "kgex/sampling.h"

#include <algorithm>
#include <string>

#include "kgex/error.h"

namespace kgex {

std::string_view to_string(SamplingMethod method) {
  return method == SamplingMethod::kPredicateNeighborhood ? "pn" : "rw";
}

SamplingMethod parse_sampling_method(std::string_view name) {
  if (name == "pn") return SamplingMethod::kPredicateNeighborhood;
  if (name == "rw") return SamplingMethod::kRandomWalk;
  throw Error("unknown sampling method '" + std::string(name) + "'");
}

std::vector<EntityId> Subgraph::entities(const KnowledgeGraph& g) const {
  std::vector<EntityId> out;
  out.reserve(2 * positions.size());
  for (std::size_t pos : positions) {
    out.push_back(g[pos].s);
    out.push_back(g[pos].o);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

class PositionSet {
 public:
  explicit PositionSet(std::size_t universe) : member_(universe, 0) {}
  void insert(std::size_t pos) {
    if (!member_[pos]) {
      member_[pos] = 1;
      items_.push_back(pos);
    }
  }
  template <typename Range>
  void insert_all(const Range& range) {
    for (std::size_t pos : range) insert(pos);
  }
  std::vector<std::size_t> sorted() && {
    std::sort(items_.begin(), items_.end());
    return std::move(items_);
  }

 private:
  std::vector<char> member_;
  std::vector<std::size_t> items_;
};

void check_target(const KnowledgeGraph& g, const Triple& target) {
  if (target.s >= g.num_entities() || target.o >= g.num_entities() ||
      target.p >= g.num_relations()) {
    throw RangeError("target triple outside the graph vocabulary");
  }
}

}  // namespace

Subgraph sample_pn(const KnowledgeGraph& g, const Triple& target, std::size_t n,
                   Rng& rng) {
  check_target(g, target);
  Subgraph out;
  out.target = target;
  out.spec.method = SamplingMethod::kPredicateNeighborhood;
  out.spec.n = n;

  PositionSet h(g.size());
  h.insert_all(neighborhood_positions(g, target.s, target.o));
  const auto predicate = g.with_predicate(target.p);
  if (predicate.empty()) {
    out.empty_predicate = n > 0;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const Triple& drawn = g[predicate[uniform_index(rng, predicate.size())]];
      h.insert_all(neighborhood_positions(g, drawn.s, drawn.o));
      ++out.steps_taken;
    }
  }
  out.positions = std::move(h).sorted();
  return out;
}

Subgraph sample_rw(const KnowledgeGraph& g, const Triple& target, std::size_t n,
                   Rng& rng) {
  check_target(g, target);
  Subgraph out;
  out.target = target;
  out.spec.method = SamplingMethod::kRandomWalk;
  out.spec.n = n;

  PositionSet h(g.size());
  h.insert_all(neighborhood_positions(g, target.s, target.o));
  Triple origin = target;
  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = neighborhood_positions(g, origin.s, origin.o);
    if (nb.empty()) break;
    const std::size_t pos = nb[uniform_index(rng, nb.size())];
    h.insert(pos);
    out.walk.push_back(pos);
    origin = g[pos];
    ++out.steps_taken;
  }
  out.positions = std::move(h).sorted();
  return out;
}

Subgraph sample_subgraph(const KnowledgeGraph& g, const Triple& target,
                         const SubgraphSpec& spec) {
  Rng rng(spec.seed);
  Subgraph out = spec.method == SamplingMethod::kPredicateNeighborhood
                     ? sample_pn(g, target, spec.n, rng)
                     : sample_rw(g, target, spec.n, rng);
  out.spec.seed = spec.seed;
  return out;
}

}  // namespace kgex
