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

#include "kgex/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "kgex/error.h"

namespace kgex {

std::optional<std::uint32_t> Vocabulary::find(std::string_view label) const {
  auto it = ids_.find(std::string(label));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t Vocabulary::intern(std::string_view label) {
  auto [it, inserted] = ids_.try_emplace(
      std::string(label), static_cast<std::uint32_t>(labels_.size()));
  if (inserted) labels_.emplace_back(label);
  return it->second;
}

namespace {

// Builds CSR offsets/positions from a key per position.
template <typename KeyFn>
void build_index(std::size_t num_keys, std::size_t num_items, KeyFn&& keys,
                 std::vector<std::size_t>& offsets,
                 std::vector<std::size_t>& positions) {
  offsets.assign(num_keys + 1, 0);
  for (std::size_t i = 0; i < num_items; ++i) {
    keys(i, [&](std::size_t key) { ++offsets[key + 1]; });
  }
  for (std::size_t k = 0; k < num_keys; ++k) offsets[k + 1] += offsets[k];
  positions.assign(offsets.back(), 0);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  // Positions are visited in increasing order, so every bucket ends up sorted.
  for (std::size_t i = 0; i < num_items; ++i) {
    keys(i, [&](std::size_t key) { positions[cursor[key]++] = i; });
  }
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

double parse_weight(std::string_view text, const std::string& path,
                    std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw ParseError(path, line, "invalid numeric weight '" +
                                     std::string(text) + "'");
  }
  return value;
}

struct RawFile {
  std::vector<Triple> triples;
  std::vector<double> weights;
};

// Shared reader. `resolve` maps the three label fields to ids, or returns
// nullopt to skip the line as unseen.
template <typename Resolve>
RawFile read_triples(const std::filesystem::path& path,
                     const LoadOptions& options, LoadStats& stats,
                     Resolve&& resolve) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::string name = path.string();
  const std::size_t columns = options.has_weights ? 4 : 3;

  RawFile raw;
  std::string line;
  std::size_t line_no = 0;
  bool in_header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (options.allow_comment_header && in_header && !line.empty() &&
        line.front() == '#') {
      continue;
    }
    in_header = false;
    if (line.empty()) throw ParseError(name, line_no, "blank line");
    auto fields = split_tabs(line);
    if (fields.size() != columns) {
      throw ParseError(name, line_no,
                       "expected " + std::to_string(columns) + " columns, got " +
                           std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < 3; ++c) {
      if (fields[c].empty()) throw ParseError(name, line_no, "empty label");
    }
    ++stats.lines;
    double w = 1.0;
    if (options.has_weights) {
      w = parse_weight(fields[3], name, line_no);
      if (w < 0.0 || w > 1.0) {
        if (options.weight_policy == WeightPolicy::kStrict) {
          throw RangeError(name + ":" + std::to_string(line_no) + ": weight " +
                           std::string(fields[3]) + " outside [0, 1]");
        }
        if (options.weight_policy == WeightPolicy::kClamp) {
          w = std::clamp(w, 0.0, 1.0);
        }
      }
    }
    std::optional<Triple> t = resolve(fields[0], fields[1], fields[2]);
    if (!t) {
      ++stats.unseen;
      continue;
    }
    raw.triples.push_back(*t);
    raw.weights.push_back(w);
  }

  if (options.has_weights && options.weight_policy == WeightPolicy::kMinMax &&
      !raw.weights.empty()) {
    auto [lo, hi] = std::minmax_element(raw.weights.begin(), raw.weights.end());
    const double min = *lo, range = *hi - *lo;
    for (double& w : raw.weights) w = range > 0.0 ? (w - min) / range : 1.0;
  }
  return raw;
}

KnowledgeGraph finish(std::shared_ptr<const Vocabulary> entities,
                      std::shared_ptr<const Vocabulary> relations, RawFile raw,
                      const LoadOptions& options, LoadStats* stats,
                      LoadStats& local) {
  std::optional<std::vector<double>> weights;
  if (options.has_weights) weights = std::move(raw.weights);
  KnowledgeGraph g(std::move(entities), std::move(relations),
                   std::move(raw.triples), std::move(weights));
  local.triples = g.size();
  local.duplicates = g.duplicates_removed();
  if (stats) *stats = local;
  return g;
}

}  // namespace

KnowledgeGraph::KnowledgeGraph()
    : KnowledgeGraph(std::make_shared<Vocabulary>(),
                     std::make_shared<Vocabulary>(), {}) {}

KnowledgeGraph::KnowledgeGraph(std::shared_ptr<const Vocabulary> entities,
                               std::shared_ptr<const Vocabulary> relations,
                               std::vector<Triple> triples,
                               std::optional<std::vector<double>> weights)
    : entities_(std::move(entities)), relations_(std::move(relations)) {
  if (weights && weights->size() != triples.size()) {
    throw MismatchError("weight count does not match triple count");
  }
  triples_.reserve(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Triple& t = triples[i];
    if (t.s >= entities_->size() || t.o >= entities_->size() ||
        t.p >= relations_->size()) {
      throw RangeError("triple id outside vocabulary");
    }
    if (!position_.try_emplace(t, triples_.size()).second) {
      ++duplicates_;
      continue;
    }
    triples_.push_back(t);
    if (weights) weights_.push_back((*weights)[i]);
  }

  build_index(
      entities_->size(), triples_.size(),
      [this](std::size_t i, auto&& emit) {
        emit(triples_[i].s);
        if (triples_[i].o != triples_[i].s) emit(triples_[i].o);
      },
      entity_offsets_, entity_positions_);
  build_index(
      relations_->size(), triples_.size(),
      [this](std::size_t i, auto&& emit) { emit(triples_[i].p); },
      predicate_offsets_, predicate_positions_);
}

bool KnowledgeGraph::shares_vocabulary_with(const KnowledgeGraph& other) const {
  auto same = [](const auto& a, const auto& b) { return a == b || *a == *b; };
  return same(entities_, other.entities_) && same(relations_, other.relations_);
}

std::span<const std::size_t> KnowledgeGraph::incident(EntityId e) const {
  if (e >= entities_->size()) throw RangeError("entity id out of range");
  return std::span<const std::size_t>(entity_positions_)
      .subspan(entity_offsets_[e], entity_offsets_[e + 1] - entity_offsets_[e]);
}

std::span<const std::size_t> KnowledgeGraph::with_predicate(RelationId p) const {
  if (p >= relations_->size()) throw RangeError("relation id out of range");
  return std::span<const std::size_t>(predicate_positions_)
      .subspan(predicate_offsets_[p],
               predicate_offsets_[p + 1] - predicate_offsets_[p]);
}

std::optional<std::size_t> KnowledgeGraph::position_of(const Triple& t) const {
  auto it = position_.find(t);
  if (it == position_.end()) return std::nullopt;
  return it->second;
}

std::vector<EntityId> KnowledgeGraph::entity_set() const {
  std::vector<EntityId> out;
  for (EntityId e = 0; e < entities_->size(); ++e) {
    if (entity_offsets_[e + 1] > entity_offsets_[e]) out.push_back(e);
  }
  return out;
}

KnowledgeGraph KnowledgeGraph::subset(
    std::span<const std::size_t> positions) const {
  std::vector<Triple> triples;
  std::vector<double> weights;
  triples.reserve(positions.size());
  for (std::size_t pos : positions) {
    triples.push_back(triples_.at(pos));
    if (has_weights()) weights.push_back(weights_[pos]);
  }
  std::optional<std::vector<double>> w;
  if (has_weights()) w = std::move(weights);
  return KnowledgeGraph(entities_, relations_, std::move(triples), std::move(w));
}

std::string KnowledgeGraph::format(const Triple& t) const {
  return entities_->label(t.s) + '\t' + relations_->label(t.p) + '\t' +
         entities_->label(t.o);
}

Triple KnowledgeGraph::parse_triple(std::string_view text) const {
  std::vector<std::string> parts;
  if (text.find('\t') != std::string_view::npos) {
    for (auto f : split_tabs(text)) parts.emplace_back(f);
  } else {
    std::istringstream ss{std::string(text)};
    for (std::string tok; ss >> tok;) parts.push_back(tok);
  }
  if (parts.size() != 3) {
    throw Error("target must have three fields, got '" + std::string(text) + "'");
  }
  auto s = entities_->find(parts[0]);
  auto p = relations_->find(parts[1]);
  auto o = entities_->find(parts[2]);
  if (!s) throw Error("unknown entity '" + parts[0] + "'");
  if (!p) throw Error("unknown relation '" + parts[1] + "'");
  if (!o) throw Error("unknown entity '" + parts[2] + "'");
  return {*s, *p, *o};
}

KnowledgeGraph load_graph(const std::filesystem::path& path,
                          const LoadOptions& options, LoadStats* stats) {
  auto entities = std::make_shared<Vocabulary>();
  auto relations = std::make_shared<Vocabulary>();
  LoadStats local;
  RawFile raw = read_triples(
      path, options, local,
      [&](std::string_view s, std::string_view p,
          std::string_view o) -> std::optional<Triple> {
        return Triple{entities->intern(s), relations->intern(p),
                      entities->intern(o)};
      });
  return finish(std::move(entities), std::move(relations), std::move(raw),
                options, stats, local);
}

KnowledgeGraph load_split(const std::filesystem::path& path,
                          const KnowledgeGraph& reference,
                          const LoadOptions& options, LoadStats* stats) {
  return load_split(path, reference.entity_vocabulary(),
                    reference.relation_vocabulary(), options, stats);
}

KnowledgeGraph load_split(const std::filesystem::path& path,
                          std::shared_ptr<const Vocabulary> entities,
                          std::shared_ptr<const Vocabulary> relations,
                          const LoadOptions& options, LoadStats* stats) {
  LoadStats local;
  RawFile raw = read_triples(
      path, options, local,
      [&](std::string_view s, std::string_view p,
          std::string_view o) -> std::optional<Triple> {
        auto si = entities->find(s);
        auto pi = relations->find(p);
        auto oi = entities->find(o);
        if (!si || !pi || !oi) return std::nullopt;
        return Triple{*si, *pi, *oi};
      });
  return finish(std::move(entities), std::move(relations), std::move(raw),
                options, stats, local);
}

std::vector<std::size_t> neighborhood_positions(const KnowledgeGraph& g,
                                                EntityId s, EntityId o) {
  auto a = g.incident(s);
  auto b = g.incident(o);
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

std::vector<Triple> one_hop_neighborhood(const KnowledgeGraph& g, EntityId s,
                                         EntityId o) {
  std::vector<Triple> out;
  for (std::size_t pos : neighborhood_positions(g, s, o)) out.push_back(g[pos]);
  return out;
}

std::vector<Triple> predicate_triples(const KnowledgeGraph& g, RelationId p) {
  std::vector<Triple> out;
  for (std::size_t pos : g.with_predicate(p)) out.push_back(g[pos]);
  return out;
}

TrueTripleSet build_filter(
    std::span<const std::reference_wrapper<const KnowledgeGraph>> graphs) {
  TrueTripleSet set;
  for (const KnowledgeGraph& g : graphs) {
    if (!g.shares_vocabulary_with(graphs.front().get())) {
      throw MismatchError("filter graphs use different vocabularies");
    }
    for (const Triple& t : g.triples()) set.insert(t);
  }
  return set;
}

TrueTripleSet build_filter(const KnowledgeGraph& train,
                           const KnowledgeGraph& valid,
                           const KnowledgeGraph& test) {
  const std::reference_wrapper<const KnowledgeGraph> graphs[] = {train, valid,
                                                                 test};
  return build_filter(graphs);
}

void write_vocabulary(const std::filesystem::path& path,
                      const Vocabulary& vocab) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (std::uint32_t id = 0; id < vocab.size(); ++id) {
    out << vocab.label(id) << '\t' << id << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

Vocabulary read_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Vocabulary vocab;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_tabs(line);
    if (fields.size() != 2) {
      throw ParseError(path.string(), line_no, "expected label<TAB>id");
    }
    std::uint32_t id = 0;
    auto [ptr, ec] = std::from_chars(fields[1].data(),
                                     fields[1].data() + fields[1].size(), id);
    if (ec != std::errc() || id != vocab.size()) {
      throw ParseError(path.string(), line_no, "ids must be contiguous from 0");
    }
    if (vocab.intern(fields[0]) != id) {
      throw ParseError(path.string(), line_no, "duplicate label");
    }
  }
  return vocab;
}

}  // namespace kgex
