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

#include "kgex/report_io.h"

#include <fmt/format.h>

#include "json.hpp"

namespace kgex {

std::string format_number(double value) { return fmt::format("{}", value); }

void write_subgraph(std::ostream& out, const Subgraph& subgraph,
                    const KnowledgeGraph& g) {
  out << "# method=" << to_string(subgraph.spec.method)
      << " n=" << subgraph.spec.n << " seed=" << subgraph.spec.seed
      << " steps=" << subgraph.steps_taken << " size=" << subgraph.size()
      << " target=" << g.format(subgraph.target) << '\n';
  for (std::size_t pos : subgraph.positions) out << g.format(g[pos]) << '\n';
}

void write_report(std::ostream& out, const ExplanationReport& report,
                  const KnowledgeGraph& g) {
  const ExplainConfig& c = report.config;
  out << "# target\t" << g.format(report.target) << '\n';
  out << "# sampling method=" << to_string(report.subgraph.spec.method)
      << " n=" << report.subgraph.spec.n
      << " seed=" << report.subgraph.spec.seed
      << " size=" << report.subgraph.size() << '\n';
  out << "# mc_runs=" << c.mc_runs << " partitions=" << c.partitions
      << " kd_lambda=" << format_number(c.kd_lambda) << " seed=" << c.seed
      << '\n';
  out << "# student model=" << to_string(c.student.kind) << " k=" << c.student.k
      << " eta=" << c.student.eta << " lr=" << format_number(c.student.lr)
      << " epochs=" << c.student.epochs
      << " batch_size=" << c.student.batch_size
      << " gamma=" << format_number(c.student.gamma) << '\n';
  out << "# position\ts\tp\to\tavg_target_rank\truns_containing\n";
  std::size_t position = 1;
  for (const Contribution& e : report.ranked) {
    out << position++ << '\t' << g.format(e.triple) << '\t'
        << format_number(e.avg_rank) << '\t' << e.runs_containing << '\n';
  }
  for (std::size_t pos : report.never_sampled) {
    out << "-\t" << g.format(g[pos]) << "\tNA\t0\n";
  }
}

std::string metrics_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["mr"] = m.mr;
  j["mrr"] = m.mrr;
  j["hits1"] = m.hits1;
  j["hits10"] = m.hits10;
  j["skipped"] = m.skipped;
  return j.dump();
}

}  // namespace kgex
