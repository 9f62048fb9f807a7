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

#ifndef KGEX_MODEL_IO_H_
#define KGEX_MODEL_IO_H_

#include <filesystem>
#include <memory>
#include <string_view>

#include "kgex/graph.h"
#include "kgex/model.h"

namespace kgex {

// "KGEX1", then kind, k, |E|, |R| as u64 little-endian, then the entity and
// relation tables as row-major little-endian f64.
inline constexpr std::string_view kModelMagic = "KGEX1";
inline constexpr std::size_t kModelHeaderBytes = 5 + 4 * 8;

void save_model(const std::filesystem::path& path, const EmbeddingModel& model);
// Throws FormatError on a bad magic, unknown kind, or size mismatch. Nothing
// is returned on failure.
EmbeddingModel load_model(const std::filesystem::path& path);

// Model plus the vocabularies its ids refer to.
struct ModelBundle {
  EmbeddingModel model;
  std::shared_ptr<const Vocabulary> entities;
  std::shared_ptr<const Vocabulary> relations;
};

std::filesystem::path entity_vocabulary_path(const std::filesystem::path& model);
std::filesystem::path relation_vocabulary_path(
    const std::filesystem::path& model);

// Writes the model and its `<model>.entities.tsv` / `<model>.relations.tsv`
// sidecars.
void save_model_bundle(const std::filesystem::path& path,
                       const EmbeddingModel& model, const KnowledgeGraph& g);
ModelBundle load_model_bundle(const std::filesystem::path& path);

}  // namespace kgex

#endif  // KGEX_MODEL_IO_H_
