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

#ifndef KGEX_REPORT_IO_H_
#define KGEX_REPORT_IO_H_

#include <filesystem>
#include <ostream>
#include <string>

#include "kgex/eval.h"
#include "kgex/explain.h"
#include "kgex/graph.h"
#include "kgex/sampling.h"

namespace kgex {

// '#'-prefixed provenance line, then one `s<TAB>p<TAB>o` line per triple.
void write_subgraph(std::ostream& out, const Subgraph& subgraph,
                    const KnowledgeGraph& g);

// Provenance comments, then
// `position  s  p  o  avg_target_rank  runs_containing` rows. Never-sampled
// triples follow with position "-" and rank "NA".
void write_report(std::ostream& out, const ExplanationReport& report,
                  const KnowledgeGraph& g);

// {"mr", "mrr", "hits1", "hits10", "skipped"} as a single JSON object.
std::string metrics_json(const Metrics& metrics);

// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace kgex

#endif  // KGEX_REPORT_IO_H_
