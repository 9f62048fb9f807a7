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

#ifndef KGEX_POOL_H_
#define KGEX_POOL_H_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kgex/graph.h"
#include "kgex/rng.h"

namespace kgex {

// Sorted set of candidate entities used for corruption and ranking.
class EntityPool {
 public:
  EntityPool() = default;
  explicit EntityPool(std::vector<EntityId> ids);
  static EntityPool all(std::size_t num_entities);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::span<const EntityId> members() const { return ids_; }
  bool contains(EntityId e) const {
    return std::binary_search(ids_.begin(), ids_.end(), e);
  }

  // Uniform draw from the pool minus `excluded`. Requires a non-empty result
  // set.
  EntityId draw_excluding(Rng& rng, EntityId excluded) const;

 private:
  std::vector<EntityId> ids_;
};

}  // namespace kgex

#endif  // KGEX_POOL_H_
