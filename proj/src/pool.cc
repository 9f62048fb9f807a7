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

#include "kgex/pool.h"

#include <numeric>

#include "kgex/error.h"

namespace kgex {

EntityPool::EntityPool(std::vector<EntityId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

EntityPool EntityPool::all(std::size_t num_entities) {
  std::vector<EntityId> ids(num_entities);
  std::iota(ids.begin(), ids.end(), EntityId{0});
  return EntityPool(std::move(ids));
}

EntityId EntityPool::draw_excluding(Rng& rng, EntityId excluded) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), excluded);
  const bool member = it != ids_.end() && *it == excluded;
  const std::size_t available = ids_.size() - (member ? 1 : 0);
  if (available == 0) throw RangeError("corruption pool has no candidates");
  std::size_t r = uniform_index(rng, available);
  if (member && r >= static_cast<std::size_t>(it - ids_.begin())) ++r;
  return ids_[r];
}

}  // namespace kgex
