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

#ifndef KGEX_SAMPLING_H_
#define KGEX_SAMPLING_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "kgex/graph.h"
#include "kgex/rng.h"

namespace kgex {

enum class SamplingMethod {
  kPredicateNeighborhood,
  kRandomWalk,
};

std::string_view to_string(SamplingMethod method);
// "pn" or "rw".
SamplingMethod parse_sampling_method(std::string_view name);

struct SubgraphSpec {
  SamplingMethod method = SamplingMethod::kPredicateNeighborhood;
  // Predicate neighbours (PN) or walk steps (RW).
  std::size_t n = 5;
  std::uint64_t seed = 0;
};

struct Subgraph {
  // Sorted positions into the source graph.
  std::vector<std::size_t> positions;
  SubgraphSpec spec;
  Triple target;
  // PN: predicate triples drawn. RW: steps walked before the walk stopped.
  std::size_t steps_taken = 0;
  // RW only: positions visited by the walk, in step order.
  std::vector<std::size_t> walk;
  // PN only: the target predicate has no triples, so only N_G(s*, o*) is kept.
  bool empty_predicate = false;

  std::size_t size() const { return positions.size(); }
  std::vector<EntityId> entities(const KnowledgeGraph& g) const;
  KnowledgeGraph graph(const KnowledgeGraph& g) const {
    return g.subset(positions);
  }
};

// N_G(s*, o*) plus the neighbourhoods of n triples drawn with replacement from
// P_G(p*).
Subgraph sample_pn(const KnowledgeGraph& g, const Triple& target, std::size_t n,
                   Rng& rng);

// N_G(s*, o*) plus the triples visited by an n-step walk whose next triple is
// drawn uniformly from the current triple's 1-hop neighbourhood.
Subgraph sample_rw(const KnowledgeGraph& g, const Triple& target, std::size_t n,
                   Rng& rng);

// Dispatches on spec.method with an Rng seeded from spec.seed.
Subgraph sample_subgraph(const KnowledgeGraph& g, const Triple& target,
                         const SubgraphSpec& spec);

}  // namespace kgex

#endif  // KGEX_SAMPLING_H_
