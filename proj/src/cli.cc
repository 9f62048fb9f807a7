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

#include "kgex/cli.h"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "kgex/distill.h"
#include "kgex/error.h"
#include "kgex/eval.h"
#include "kgex/explain.h"
#include "kgex/graph.h"
#include "kgex/manifest.h"
#include "kgex/model_io.h"
#include "kgex/report_io.h"
#include "kgex/sampling.h"
#include "kgex/selftest.h"
#include "kgex/training.h"

namespace kgex {

namespace {

namespace fs = std::filesystem;

// Hyperparameters shared by every command that trains a model.
struct TrainFlags {
  std::string model = "transe-l2";
  std::size_t k = 50;
  std::size_t eta = 2;
  double lr = 0.1;
  std::size_t epochs = 200;
  std::size_t batch_size = 512;
  double gamma = 1e-4;
  std::string loss = "multiclass-nll";
};

void add_train_flags(CLI::App* app, TrainFlags& f) {
  app->add_option("--model", f.model,
                  "transe-l1, transe-l2 (alias transe), distmult, complex")
      ->capture_default_str();
  app->add_option("--k", f.k, "Embedding size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--eta", f.eta, "Negatives per positive")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--lr", f.lr, "Adam learning rate")->capture_default_str();
  app->add_option("--epochs", f.epochs)
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--batch-size", f.batch_size)
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--gamma", f.gamma, "L2 regulariser weight")
      ->capture_default_str();
  app->add_option("--loss", f.loss)
      ->capture_default_str()
      ->check(CLI::IsMember({"multiclass-nll", "softplus-nll"}));
}

TrainConfig to_config(const TrainFlags& f, std::optional<ModelKind> kind = {}) {
  TrainConfig c;
  c.kind = kind ? *kind : parse_model_kind(f.model);
  c.k = f.k;
  c.eta = f.eta;
  c.lr = f.lr;
  c.epochs = f.epochs;
  c.batch_size = f.batch_size;
  c.gamma = f.gamma;
  c.loss = f.loss == "softplus-nll" ? LossKind::kSoftplusNll
                                    : LossKind::kMulticlassNll;
  return c;
}

struct Common {
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  std::string config;
};

void add_common(CLI::App* app, Common& c, bool with_threads) {
  app->add_option("--seed", c.seed, "Master seed (drawn and recorded if omitted)");
  app->add_option("--config", c.config, "key = value configuration file");
  if (with_threads) {
    app->add_option("--threads", c.threads, "Worker threads")
        ->envname("KGEX_THREADS")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }
}

// Reads `key = value` lines; '#' starts a comment line.
std::vector<std::pair<std::string, std::string>> read_config_file(
    const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path.string(), line_no, "expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    out.emplace_back(key, value);
  }
  return out;
}

// Inserts `--key value` for every config entry whose flag is not already on
// the command line, so flags > config file > defaults.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  auto it = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return a == "--config" || a.rfind("--config=", 0) == 0;
  });
  if (it == args.end()) return args;
  std::string path;
  if (*it == "--config") {
    if (std::next(it) == args.end()) return args;
    path = *std::next(it);
  } else {
    path = it->substr(9);
  }
  auto present = [&](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config_file(path)) {
    if (key == "config" || present(key)) continue;
    if (value == "true") {
      extra.push_back("--" + key);
    } else if (value != "false") {
      extra.push_back("--" + key);
      std::istringstream ss(value);
      for (std::string tok; ss >> tok;) extra.push_back(tok);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

std::uint64_t resolve_seed(Common& c, std::vector<std::string>& replay) {
  if (!c.seed) {
    std::random_device rd;
    c.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    replay.push_back("--seed");
    replay.push_back(std::to_string(*c.seed));
  }
  return *c.seed;
}

nlohmann::ordered_json resolved_config(const CLI::App* app) {
  nlohmann::ordered_json j;
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "h") continue;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1) {
        j[name] = results.front();
      } else {
        j[name] = results;
      }
    } else {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

class ManifestWriter {
 public:
  ManifestWriter(std::string command, std::vector<std::string> replay)
      : start_(std::chrono::steady_clock::now()) {
    m_.command = std::move(command);
    m_.replay_argv = std::move(replay);
  }
  RunManifest& manifest() { return m_; }
  void input(const fs::path& p) { m_.inputs[p.string()] = file_digest(p); }
  void output(const fs::path& p) { m_.outputs[p.string()] = file_digest(p); }
  void write(const fs::path& primary_output) {
    m_.wall_clock_seconds = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start_)
                                .count();
    write_manifest(manifest_path(primary_output), m_);
  }

 private:
  RunManifest m_;
  std::chrono::steady_clock::time_point start_;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

WeightPolicy parse_weight_policy(const std::string& name) {
  if (name == "clamp") return WeightPolicy::kClamp;
  if (name == "minmax") return WeightPolicy::kMinMax;
  return WeightPolicy::kStrict;
}

void require_same_vocabulary(const KnowledgeGraph& g, const ModelBundle& b) {
  if (!(g.entities() == *b.entities) || !(g.relations() == *b.relations)) {
    throw MismatchError(
        "graph vocabulary differs from the model's vocabulary sidecars");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out,
            std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const std::exception& e) {
    err << "kgex: error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Knowledge graph embedding training and link-prediction explanations",
               "kgex"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kEngineVersion));

  // train
  struct {
    std::string graph, out, log, weight_policy = "strict";
    bool weights = false, focuse = false;
    double focuse_decay = 0.0;
    TrainFlags flags;
    Common common;
  } tr;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a KGE model");
  train_cmd->add_option("--graph", tr.graph, "Training TSV")->required();
  train_cmd->add_option("--out", tr.out, "Model output path")->required();
  train_cmd->add_option("--log", tr.log, "Epoch log (default <out>.log)");
  train_cmd->add_flag("--weights", tr.weights, "Graph has a fourth weight column");
  train_cmd->add_option("--weight-policy", tr.weight_policy)
      ->capture_default_str()
      ->check(CLI::IsMember({"strict", "clamp", "minmax"}));
  train_cmd->add_flag("--focuse", tr.focuse, "Enable the FocusE layer");
  train_cmd->add_option("--focuse-decay", tr.focuse_decay,
                        "Epochs over which beta decays from 1 to 0")
      ->capture_default_str();
  add_train_flags(train_cmd, tr.flags);
  add_common(train_cmd, tr.common, false);

  // distill-train
  struct {
    std::string teacher, subgraph, out, log;
    double kd_lambda = 3.0;
    TrainFlags flags;
    Common common;
  } dt;
  CLI::App* distill_cmd =
      app.add_subcommand("distill-train", "Train a KD student on a subgraph");
  distill_cmd->add_option("--teacher", dt.teacher)->required();
  distill_cmd->add_option("--subgraph", dt.subgraph)->required();
  distill_cmd->add_option("--kd-lambda", dt.kd_lambda)->capture_default_str();
  distill_cmd->add_option("--out", dt.out)->required();
  distill_cmd->add_option("--log", dt.log, "Epoch log (default <out>.log)");
  add_train_flags(distill_cmd, dt.flags);
  add_common(distill_cmd, dt.common, false);

  // sample-subgraph
  struct {
    std::string graph, method = "pn", target, out;
    std::size_t n = 5;
    Common common;
  } ss;
  CLI::App* sample_cmd =
      app.add_subcommand("sample-subgraph", "Sample a subgraph around a target");
  sample_cmd->add_option("--graph", ss.graph)->required();
  sample_cmd->add_option("--method", ss.method)
      ->capture_default_str()
      ->check(CLI::IsMember({"pn", "rw"}));
  sample_cmd->add_option("--n", ss.n, "Predicate neighbours or walk steps")
      ->capture_default_str();
  sample_cmd->add_option("--target", ss.target, "\"s p o\"")->required();
  sample_cmd->add_option("--out", ss.out)->required();
  add_common(sample_cmd, ss.common, false);

  // explain
  struct {
    std::string teacher, graph, target, method = "pn", out;
    std::size_t n = 5, mc_runs = 100, partitions = 10;
    double kd_lambda = 3.0;
    std::vector<std::string> filters;
    TrainFlags flags;
    Common common;
  } ex;
  CLI::App* explain_cmd =
      app.add_subcommand("explain", "Explain one predicted triple");
  explain_cmd->add_option("--teacher", ex.teacher)->required();
  explain_cmd->add_option("--graph", ex.graph, "Teacher training TSV")->required();
  explain_cmd->add_option("--target", ex.target, "\"s p o\"")->required();
  explain_cmd->add_option("--method", ex.method)
      ->capture_default_str()
      ->check(CLI::IsMember({"pn", "rw"}));
  explain_cmd->add_option("--n", ex.n)->capture_default_str();
  explain_cmd->add_option("--mc-runs", ex.mc_runs)->capture_default_str();
  explain_cmd->add_option("--partitions", ex.partitions)->capture_default_str();
  explain_cmd->add_option("--kd-lambda", ex.kd_lambda)->capture_default_str();
  explain_cmd->add_option("--filter", ex.filters,
                          "Extra known-true TSVs (the graph is always used)");
  explain_cmd->add_option("--out", ex.out)->required();
  add_train_flags(explain_cmd, ex.flags);
  add_common(explain_cmd, ex.common, true);

  // evaluate
  struct {
    std::string model, test, pool = "all", out;
    std::vector<std::string> filters;
    bool verbose = false;
    Common common;
  } ev;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Filtered MR/MRR/Hits@N");
  eval_cmd->add_option("--model", ev.model)->required();
  eval_cmd->add_option("--test", ev.test)->required();
  eval_cmd->add_option("--pool", ev.pool, "all | subgraph:<tsv>")
      ->capture_default_str();
  eval_cmd->add_option("--filter", ev.filters, "Known-true TSVs");
  eval_cmd->add_option("--out", ev.out, "Also write the metrics JSON here");
  eval_cmd->add_flag("--verbose", ev.verbose, "Per-triple ranks on stderr");
  add_common(eval_cmd, ev.common, true);

  // selftest
  Common st;
  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "Run the built-in invariant checks");
  add_common(selftest_cmd, st, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kEngineVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "kgex: " << e.what() << '\n';
    for (CLI::App* sub : app.get_subcommands()) err << sub->help();
    return kExitUsage;
  }

  std::vector<std::string> replay(args.begin() + 1, args.end());

  try {
    if (*train_cmd) {
      const std::uint64_t seed = resolve_seed(tr.common, replay);
      ManifestWriter mw("train", replay);
      LoadOptions lo;
      lo.has_weights = tr.weights || tr.focuse;
      lo.weight_policy = parse_weight_policy(tr.weight_policy);
      LoadStats stats;
      const KnowledgeGraph g = load_graph(tr.graph, lo, &stats);
      mw.input(tr.graph);
      err << "loaded " << g.size() << " triples, " << g.num_entities()
          << " entities, " << g.num_relations() << " relations ("
          << stats.duplicates << " duplicates removed)\n";

      TrainConfig cfg = to_config(tr.flags);
      cfg.seed = seed;
      cfg.focuse.enabled = tr.focuse;
      cfg.focuse.decay = tr.focuse_decay;
      const fs::path log_path = tr.log.empty() ? tr.out + ".log" : tr.log;
      std::ofstream log = open_output(log_path);
      cfg.on_epoch = [&](std::size_t epoch, double loss) {
        log << epoch << '\t' << format_number(loss) << '\n';
      };
      const TrainResult res = train(g, cfg);
      log.close();
      save_model_bundle(tr.out, res.model, g);

      mw.manifest().seed = seed;
      mw.manifest().config = resolved_config(train_cmd);
      mw.output(tr.out);
      mw.output(entity_vocabulary_path(tr.out));
      mw.output(relation_vocabulary_path(tr.out));
      mw.output(log_path);
      mw.write(tr.out);
      err << "trained " << res.adam_steps << " steps, final loss "
          << format_number(res.epoch_losses.back()) << '\n';
      return kExitOk;
    }

    if (*distill_cmd) {
      const std::uint64_t seed = resolve_seed(dt.common, replay);
      ManifestWriter mw("distill-train", replay);
      const ModelBundle teacher = load_model_bundle(dt.teacher);
      mw.input(dt.teacher);
      LoadOptions lo;
      lo.allow_comment_header = true;
      LoadStats stats;
      const KnowledgeGraph sub = load_split(dt.subgraph, teacher.entities,
                                            teacher.relations, lo, &stats);
      mw.input(dt.subgraph);
      if (stats.unseen > 0) {
        err << "warning: " << stats.unseen
            << " subgraph triples are outside the teacher vocabulary\n";
      }
      const bool model_given = distill_cmd->get_option("--model")->count() > 0;
      TrainConfig cfg = to_config(
          dt.flags, model_given ? std::nullopt
                                : std::optional<ModelKind>(teacher.model.kind()));
      cfg.seed = seed;
      const fs::path log_path = dt.log.empty() ? dt.out + ".log" : dt.log;
      std::ofstream log = open_output(log_path);
      cfg.on_epoch = [&](std::size_t epoch, double loss) {
        log << epoch << '\t' << format_number(loss) << '\n';
      };
      const TrainResult res =
          train_student(teacher.model, sub, cfg, dt.kd_lambda);
      log.close();
      save_model_bundle(dt.out, res.model, sub);
      if (res.degenerate_kd_terms > 0) {
        err << "note: " << res.degenerate_kd_terms
            << " degenerate RKD terms contributed zero\n";
      }
      mw.manifest().seed = seed;
      mw.manifest().config = resolved_config(distill_cmd);
      mw.output(dt.out);
      mw.output(log_path);
      mw.write(dt.out);
      return kExitOk;
    }

    if (*sample_cmd) {
      const std::uint64_t seed = resolve_seed(ss.common, replay);
      ManifestWriter mw("sample-subgraph", replay);
      const KnowledgeGraph g = load_graph(ss.graph);
      mw.input(ss.graph);
      const Triple target = g.parse_triple(ss.target);
      const Subgraph sub = sample_subgraph(
          g, target, SubgraphSpec{parse_sampling_method(ss.method), ss.n, seed});
      if (sub.empty_predicate) {
        err << "warning: target predicate has no triples; returning the 1-hop "
               "neighbourhood only\n";
      }
      {
        std::ofstream f = open_output(ss.out);
        write_subgraph(f, sub, g);
      }
      err << "subgraph: " << sub.size() << " triples\n";
      mw.manifest().seed = seed;
      mw.manifest().config = resolved_config(sample_cmd);
      mw.output(ss.out);
      mw.write(ss.out);
      return kExitOk;
    }

    if (*explain_cmd) {
      const std::uint64_t seed = resolve_seed(ex.common, replay);
      ManifestWriter mw("explain", replay);
      const ModelBundle teacher = load_model_bundle(ex.teacher);
      mw.input(ex.teacher);
      const KnowledgeGraph g = load_graph(ex.graph);
      mw.input(ex.graph);
      require_same_vocabulary(g, teacher);
      const Triple target = g.parse_triple(ex.target);

      TrueTripleSet filter;
      for (const Triple& t : g.triples()) filter.insert(t);
      for (const std::string& path : ex.filters) {
        const KnowledgeGraph extra = load_split(path, g);
        mw.input(path);
        for (const Triple& t : extra.triples()) filter.insert(t);
      }

      ExplainConfig cfg;
      cfg.mc_runs = ex.mc_runs;
      cfg.partitions = ex.partitions;
      const bool model_given = explain_cmd->get_option("--model")->count() > 0;
      cfg.student = to_config(
          ex.flags, model_given ? std::nullopt
                                : std::optional<ModelKind>(teacher.model.kind()));
      cfg.kd_lambda = ex.kd_lambda;
      cfg.sampling = {parse_sampling_method(ex.method), ex.n, seed};
      cfg.seed = seed;
      cfg.threads = ex.common.threads;
      const ExplanationReport report =
          mc_explain(teacher.model, g, target, cfg, &filter);
      {
        std::ofstream f = open_output(ex.out);
        write_report(f, report, g);
      }
      err << "explained with " << report.runs.size() << " runs over "
          << report.subgraph.size() << " subgraph triples\n";
      mw.manifest().seed = seed;
      mw.manifest().config = resolved_config(explain_cmd);
      mw.output(ex.out);
      mw.write(ex.out);
      return kExitOk;
    }

    if (*eval_cmd) {
      const std::uint64_t seed = resolve_seed(ev.common, replay);
      ManifestWriter mw("evaluate", replay);
      const ModelBundle bundle = load_model_bundle(ev.model);
      mw.input(ev.model);
      LoadStats stats;
      const KnowledgeGraph test =
          load_split(ev.test, bundle.entities, bundle.relations, {}, &stats);
      mw.input(ev.test);

      EntityPool pool;
      if (ev.pool == "all") {
        pool = EntityPool::all(bundle.model.num_entities());
      } else if (ev.pool.rfind("subgraph:", 0) == 0) {
        const std::string path = ev.pool.substr(9);
        LoadOptions lo;
        lo.allow_comment_header = true;
        const KnowledgeGraph sub =
            load_split(path, bundle.entities, bundle.relations, lo);
        mw.input(path);
        pool = EntityPool(sub.entity_set());
      } else {
        throw Error("--pool must be 'all' or 'subgraph:<tsv>'");
      }

      TrueTripleSet filter;
      for (const std::string& path : ev.filters) {
        const KnowledgeGraph f =
            load_split(path, bundle.entities, bundle.relations);
        mw.input(path);
        for (const Triple& t : f.triples()) filter.insert(t);
      }
      std::vector<RankResult> per_triple;
      Metrics m = evaluate(bundle.model, test.triples(), pool,
                           ev.filters.empty() ? nullptr : &filter,
                           ev.common.threads, ev.verbose ? &per_triple : nullptr);
      m.skipped += stats.unseen;
      if (ev.verbose) {
        err << "# s\tp\to\tsubject_rank\tobject_rank\tsubject_pool\t"
               "subject_pool_filtered\tobject_pool\tobject_pool_filtered\n";
        for (const RankResult& r : per_triple) {
          err << test.format(r.triple) << '\t' << r.subject.rank << '\t'
              << r.object.rank << '\t' << r.subject.candidates << '\t'
              << r.subject.filtered_candidates << '\t' << r.object.candidates
              << '\t' << r.object.filtered_candidates << '\n';
        }
      }
      const std::string json = metrics_json(m);
      out << json << '\n';
      if (!ev.out.empty()) {
        {
          std::ofstream f = open_output(ev.out);
          f << json << '\n';
        }
        mw.manifest().seed = seed;
        mw.manifest().config = resolved_config(eval_cmd);
        mw.output(ev.out);
        mw.write(ev.out);
      }
      return kExitOk;
    }

    if (*selftest_cmd) {
      std::vector<std::string> unused;
      const std::uint64_t seed = resolve_seed(st, unused);
      const SelftestSummary s = run_selftest(seed, out);
      out << "selftest: " << s.passed << " passed, " << s.failed << " failed\n";
      return s.failed == 0 ? kExitOk : kExitFailure;
    }
  } catch (const std::exception& e) {
    err << "kgex: error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace kgex
