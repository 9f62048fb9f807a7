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

#ifndef KGEX_GRAPH_H_
#define KGEX_GRAPH_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kgex {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
  EntityId s = 0;
  RelationId p = 0;
  EntityId o = 0;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = (static_cast<std::uint64_t>(t.s) << 32) ^ t.o;
    h ^= static_cast<std::uint64_t>(t.p) * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 29;
    return static_cast<std::size_t>(h * 0xbf58476d1ce4e5b9ULL);
  }
};

// Bijective label <-> dense id map. Ids are assigned in insertion order.
class Vocabulary {
 public:
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::string& label(std::uint32_t id) const { return labels_.at(id); }
  std::optional<std::uint32_t> find(std::string_view label) const;
  // Returns the id of `label`, adding it when absent.
  std::uint32_t intern(std::string_view label);
  std::span<const std::string> labels() const { return labels_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

enum class WeightPolicy {
  kStrict,  // out-of-range weight is an error
  kClamp,   // clamp into [0, 1]
  kMinMax,  // rescale the whole column to [0, 1]
};

struct LoadOptions {
  bool has_weights = false;
  WeightPolicy weight_policy = WeightPolicy::kStrict;
  // Accept leading lines starting with '#' (subgraph and report files).
  bool allow_comment_header = false;
};

struct LoadStats {
  std::size_t lines = 0;
  std::size_t triples = 0;
  std::size_t duplicates = 0;
  // Lines skipped because a label is missing from a fixed vocabulary.
  std::size_t unseen = 0;
};

class KnowledgeGraph {
 public:
  KnowledgeGraph();
  // Deduplicates `triples` keeping the first occurrence (and its weight).
  KnowledgeGraph(std::shared_ptr<const Vocabulary> entities,
                 std::shared_ptr<const Vocabulary> relations,
                 std::vector<Triple> triples,
                 std::optional<std::vector<double>> weights = std::nullopt);

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  std::span<const Triple> triples() const { return triples_; }
  const Triple& operator[](std::size_t pos) const { return triples_[pos]; }

  const Vocabulary& entities() const { return *entities_; }
  const Vocabulary& relations() const { return *relations_; }
  const std::shared_ptr<const Vocabulary>& entity_vocabulary() const {
    return entities_;
  }
  const std::shared_ptr<const Vocabulary>& relation_vocabulary() const {
    return relations_;
  }
  std::size_t num_entities() const { return entities_->size(); }
  std::size_t num_relations() const { return relations_->size(); }
  bool shares_vocabulary_with(const KnowledgeGraph& other) const;

  // Sorted positions of the triples with s == e or o == e.
  std::span<const std::size_t> incident(EntityId e) const;
  // Sorted positions of the triples with predicate p.
  std::span<const std::size_t> with_predicate(RelationId p) const;

  bool has_weights() const { return !weights_.empty(); }
  double weight(std::size_t pos) const { return weights_.at(pos); }
  std::span<const double> weights() const { return weights_; }

  std::size_t duplicates_removed() const { return duplicates_; }
  std::optional<std::size_t> position_of(const Triple& t) const;
  bool contains(const Triple& t) const { return position_.contains(t); }

  // Sorted ids of the entities that occur in at least one triple.
  std::vector<EntityId> entity_set() const;

  // Graph over the triples at `positions`, sharing this graph's vocabularies.
  KnowledgeGraph subset(std::span<const std::size_t> positions) const;

  std::string format(const Triple& t) const;
  // Parses "s p o" (tab or whitespace separated) against this vocabulary.
  Triple parse_triple(std::string_view text) const;

 private:
  std::shared_ptr<const Vocabulary> entities_;
  std::shared_ptr<const Vocabulary> relations_;
  std::vector<Triple> triples_;
  std::vector<double> weights_;
  std::size_t duplicates_ = 0;
  std::unordered_map<Triple, std::size_t, TripleHash> position_;
  // CSR-style adjacency: offsets have num_entities + 1 entries.
  std::vector<std::size_t> entity_offsets_;
  std::vector<std::size_t> entity_positions_;
  std::vector<std::size_t> predicate_offsets_;
  std::vector<std::size_t> predicate_positions_;
};

// Reads `s<TAB>p<TAB>o[<TAB>w]` lines, building vocabularies in first-appearance
// order.
KnowledgeGraph load_graph(const std::filesystem::path& path,
                          const LoadOptions& options = {},
                          LoadStats* stats = nullptr);

// Reads a split against fixed vocabularies (typically the training graph's).
// Triples with unknown labels are skipped and counted in `stats->unseen`.
KnowledgeGraph load_split(const std::filesystem::path& path,
                          const KnowledgeGraph& reference,
                          const LoadOptions& options = {},
                          LoadStats* stats = nullptr);
KnowledgeGraph load_split(const std::filesystem::path& path,
                          std::shared_ptr<const Vocabulary> entities,
                          std::shared_ptr<const Vocabulary> relations,
                          const LoadOptions& options = {},
                          LoadStats* stats = nullptr);

// Sorted, unique positions of N_G(s) u N_G(o).
std::vector<std::size_t> neighborhood_positions(const KnowledgeGraph& g,
                                                EntityId s, EntityId o);
// N_G(s) u N_G(o), in graph order.
std::vector<Triple> one_hop_neighborhood(const KnowledgeGraph& g, EntityId s,
                                         EntityId o);
// { t in G | t.p == p }, in graph order.
std::vector<Triple> predicate_triples(const KnowledgeGraph& g, RelationId p);

// Membership set of known true triples, used for filtered ranking.
class TrueTripleSet {
 public:
  void insert(const Triple& t) { set_.insert(t); }
  bool contains(const Triple& t) const { return set_.contains(t); }
  std::size_t size() const { return set_.size(); }
  bool empty() const { return set_.empty(); }

 private:
  std::unordered_set<Triple, TripleHash> set_;
};

// Union of all graphs. Every graph must carry the same vocabularies.
TrueTripleSet build_filter(
    std::span<const std::reference_wrapper<const KnowledgeGraph>> graphs);
TrueTripleSet build_filter(const KnowledgeGraph& train,
                           const KnowledgeGraph& valid,
                           const KnowledgeGraph& test);

// `label<TAB>id` per line.
void write_vocabulary(const std::filesystem::path& path,
                      const Vocabulary& vocab);
Vocabulary read_vocabulary(const std::filesystem::path& path);

}  // namespace kgex

#endif  // KGEX_GRAPH_H_
