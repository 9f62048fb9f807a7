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

#include "kgex/model_io.h"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "kgex/error.h"

namespace kgex {

namespace {


void put_u64(std::vector<char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return v;
}

void put_table(std::vector<char>& out, std::span<const double> table) {
  for (double x : table) put_u64(out, std::bit_cast<std::uint64_t>(x));
}

}  // namespace

void save_model(const std::filesystem::path& path, const EmbeddingModel& model) {
  std::vector<char> bytes(kModelMagic.begin(), kModelMagic.end());
  put_u64(bytes, static_cast<std::uint64_t>(model.kind()));
  put_u64(bytes, model.k());
  put_u64(bytes, model.num_entities());
  put_u64(bytes, model.num_relations());
  put_table(bytes, model.entity_table());
  put_table(bytes, model.relation_table());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < kModelHeaderBytes ||
      std::memcmp(bytes.data(), kModelMagic.data(), kModelMagic.size()) != 0) {
    throw FormatError(name + ": not a KGEX1 model file");
  }
  const char* p = bytes.data() + kModelMagic.size();
  const std::uint64_t tag = get_u64(p);
  const std::uint64_t k = get_u64(p + 8);
  const std::uint64_t ne = get_u64(p + 16);
  const std::uint64_t nr = get_u64(p + 24);
  if (tag > static_cast<std::uint64_t>(ModelKind::kComplEx)) {
    throw FormatError(name + ": unknown model kind tag " + std::to_string(tag));
  }
  const auto kind = static_cast<ModelKind>(tag);
  if (k == 0 || k > (1u << 20) || ne > (1ull << 32) || nr > (1ull << 32)) {
    throw FormatError(name + ": implausible header");
  }
  const std::uint64_t width = row_width(kind, k);
  const std::uint64_t expected = kModelHeaderBytes + (ne + nr) * width * 8;
  if (bytes.size() != expected) {
    throw FormatError(name + ": expected " + std::to_string(expected) +
                      " bytes, found " + std::to_string(bytes.size()));
  }

  EmbeddingModel model(kind, k, ne, nr);
  const char* cursor = bytes.data() + kModelHeaderBytes;
  for (double& x : model.entity_table()) {
    x = std::bit_cast<double>(get_u64(cursor));
    cursor += 8;
  }
  for (double& x : model.relation_table()) {
    x = std::bit_cast<double>(get_u64(cursor));
    cursor += 8;
  }
  return model;
}

std::filesystem::path entity_vocabulary_path(const std::filesystem::path& model) {
  return model.string() + ".entities.tsv";
}

std::filesystem::path relation_vocabulary_path(
    const std::filesystem::path& model) {
  return model.string() + ".relations.tsv";
}

void save_model_bundle(const std::filesystem::path& path,
                       const EmbeddingModel& model, const KnowledgeGraph& g) {
  if (g.num_entities() != model.num_entities() ||
      g.num_relations() != model.num_relations()) {
    throw MismatchError("model tables do not match the graph vocabularies");
  }
  save_model(path, model);
  write_vocabulary(entity_vocabulary_path(path), g.entities());
  write_vocabulary(relation_vocabulary_path(path), g.relations());
}

ModelBundle load_model_bundle(const std::filesystem::path& path) {
  ModelBundle bundle;
  bundle.model = load_model(path);
  bundle.entities =
      std::make_shared<Vocabulary>(read_vocabulary(entity_vocabulary_path(path)));
  bundle.relations = std::make_shared<Vocabulary>(
      read_vocabulary(relation_vocabulary_path(path)));
  if (bundle.entities->size() != bundle.model.num_entities() ||
      bundle.relations->size() != bundle.model.num_relations()) {
    throw FormatError(path.string() +
                      ": vocabulary sidecars do not match the model tables");
  }
  return bundle;
}

}  // namespace kgex
