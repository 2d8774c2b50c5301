#include "belhd/cli.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "belhd/corpus.h"
#include "belhd/disambiguation.h"
#include "belhd/errors.h"
#include "belhd/evaluation.h"
#include "belhd/homonyms.h"
#include "belhd/kb.h"
#include "belhd/manifest.h"
#include "belhd/retrieval.h"
#include "belhd/string_match.h"
#include "belhd/text.h"

namespace belhd {
namespace {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
T parse_value(const std::string &key, const std::string &value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (!in || !(in >> std::ws).eof()) {
    throw ValidationError("config key '" + key + "': invalid value '" + value +
                          "'");
  }
  return out;
}

void write_file(const fs::path &path,
                const std::function<void(std::ostream &)> &fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  fn(out);
  if (!out) throw Error("failed writing " + path.string());
}

fs::path with_suffix(const fs::path &prefix, const std::string &suffix) {
  return fs::path(prefix.string() + suffix);
}

fs::path manifest_path(const fs::path &output) {
  return with_suffix(output, ".manifest.json");
}

std::string utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Global flags.
struct GlobalOptions {
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
  bool strict = true;
};

class Run {
 public:
  explicit Run(std::string subcommand)
      : start_(std::chrono::steady_clock::now()) {
    manifest_.subcommand = std::move(subcommand);
    manifest_.started_at = utc_now();
  }

  RunManifest &manifest() { return manifest_; }

  void finish(const fs::path &path) {
    manifest_.seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
    write_manifest(manifest_, path);
  }

 private:
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

HomonymMap all_homonyms(const Kb &kb) { return find_ambiguous_names(kb); }

std::vector<char> affected_flags(const std::vector<Document> &corpus,
                                 const Kb &kb) {
  const AffectedReport report =
      estimate_affected(corpus, kb, all_homonyms(kb));
  std::vector<char> flags;
  for (const AffectedMention &m : report.mentions) flags.push_back(m.affected);
  return flags;
}

LinearEncoder fresh_encoder(const RunConfig &config, const Kb &kb) {
  std::vector<std::string> names;
  names.reserve(kb.size());
  for (const KbRecord &r : kb.records()) names.push_back(r.name);
  return LinearEncoder(Featurizer::Fit(config.features, names),
                       config.projection_dim, config.train.seed);
}

NameIndex final_index(const LinearEncoder &encoder, const Kb &kb,
                      std::uint64_t generation, unsigned threads) {
  return build_index(encode_kb(encoder, kb, threads), kb, generation);
}

// --- subcommands -----------------------------------------------------------

struct StatsOptions {
  std::string kb, out, format = "kv", detail;
};

int run_stats(const StatsOptions &o, const GlobalOptions &g,
              std::ostream &out) {
  Run run("stats");
  const Kb kb = parse_kb(fs::path(o.kb), ParseOptions{.strict = g.strict});
  run.manifest().add_input("kb", o.kb);
  const HomonymReport report = homonym_report(kb);
  write_file(o.out, [&](std::ostream &os) {
    if (o.format == "tsv") {
      write_report_tsv(report, os);
    } else {
      write_report_kv(report, os);
    }
  });
  run.manifest().add_output("report", o.out);
  if (!o.detail.empty()) {
    write_file(o.detail,
               [&](std::ostream &os) { write_homonym_detail(report, os); });
    run.manifest().add_output("detail", o.detail);
  }
  write_report_kv(report, out);
  run.finish(manifest_path(o.out));
  return 0;
}

struct DisambiguateOptions {
  std::string kb, taxonomy, out, audit;
};

int run_disambiguate(const DisambiguateOptions &o, const GlobalOptions &g,
                     std::ostream &out) {
  Run run("disambiguate");
  const Kb kb = parse_kb(fs::path(o.kb), ParseOptions{.strict = g.strict});
  run.manifest().add_input("kb", o.kb);
  std::optional<Taxonomy> taxonomy;
  if (!o.taxonomy.empty()) {
    taxonomy = parse_taxonomy(fs::path(o.taxonomy));
    run.manifest().add_input("taxonomy", o.taxonomy);
  }
  const DisambiguatedKb result =
      disambiguate(kb, taxonomy ? &*taxonomy : nullptr);
  write_kb(result.kb, fs::path(o.out));
  write_file(o.audit, [&](std::ostream &os) { write_audit(result, os); });
  run.manifest().add_output("kb", o.out);
  run.manifest().add_output("audit", o.audit);
  out << "homonyms=" << result.original_homonyms.size() << '\n'
      << "unresolved=" << result.unresolved_homonyms << '\n'
      << "residual_names=" << result.residual_homonyms.size() << '\n'
      << "success_rate=" << format_double(result.success_rate) << '\n';
  run.finish(manifest_path(o.out));
  return 0;
}

struct AffectedOptions {
  std::string kb, corpus, out;
};

int run_estimate_affected(const AffectedOptions &o, const GlobalOptions &g,
                          std::ostream &out) {
  Run run("estimate-affected");
  const Kb kb = parse_kb(fs::path(o.kb), ParseOptions{.strict = g.strict});
  const auto corpus = parse_corpus(fs::path(o.corpus));
  run.manifest().add_input("kb", o.kb);
  run.manifest().add_input("corpus", o.corpus);
  const AffectedReport report = estimate_affected(corpus, kb, all_homonyms(kb));
  write_file(o.out, [&](std::ostream &os) { write_affected(report, os); });
  run.manifest().add_output("report", o.out);
  out << "affected=" << report.affected << '\n'
      << "mentions=" << report.total << '\n'
      << "affected_fraction=" << format_double(report.fraction()) << '\n';
  run.finish(manifest_path(o.out));
  return 0;
}

struct TrainOptions {
  std::string kb, corpus, out, log, index, config;
  std::optional<std::size_t> epochs, pool_size, group_size, reencode_every;
  std::optional<double> learning_rate;
  std::optional<std::uint32_t> hash_dim, projection_dim;
};

RunConfig effective_config(const std::string &config_path,
                           const GlobalOptions &g) {
  RunConfig config;
  if (!config_path.empty()) config = parse_run_config(fs::path(config_path));
  if (g.seed) config.train.seed = *g.seed;
  config.train.threads = g.threads;
  return config;
}

int run_train(const TrainOptions &o, const GlobalOptions &g,
              std::ostream &out) {
  Run run("train");
  RunConfig config = effective_config(o.config, g);
  if (o.epochs) config.train.epochs = *o.epochs;
  if (o.pool_size) config.train.pool_size = *o.pool_size;
  if (o.group_size) config.train.group_size = *o.group_size;
  if (o.reencode_every) config.train.reencode_every_steps = *o.reencode_every;
  if (o.learning_rate) config.train.learning_rate = *o.learning_rate;
  if (o.hash_dim) config.features.hash_dim = *o.hash_dim;
  if (o.projection_dim) config.projection_dim = *o.projection_dim;

  const Kb kb = parse_kb(fs::path(o.kb), ParseOptions{.strict = g.strict});
  const auto corpus = parse_corpus(fs::path(o.corpus));
  run.manifest().add_input("kb", o.kb);
  run.manifest().add_input("corpus", o.corpus);
  if (!o.config.empty()) run.manifest().add_input("config", o.config);
  run.manifest().seed = config.train.seed;
  run.manifest().config_digest = sha256_hex(config.canonical());

  TrainResult result =
      train(fresh_encoder(config, kb), corpus, kb, config.train);
  result.encoder.save(fs::path(o.out));
  run.manifest().add_output("checkpoint", o.out);
  if (!o.log.empty()) {
    write_file(o.log,
               [&](std::ostream &os) { write_train_log(result.history, os); });
    run.manifest().add_output("train_log", o.log);
  }
  if (!o.index.empty()) {
    final_index(result.encoder, kb, result.generation + 1, g.threads)
        .save(fs::path(o.index));
    run.manifest().add_output("index", o.index);
  }
  write_train_log(result.history, out);
  run.finish(manifest_path(o.out));
  return 0;
}

struct LinkOptions {
  std::string kb, checkpoint, corpus, out, index;
};

int run_link(const LinkOptions &o, const GlobalOptions &g, std::ostream &out) {
  Run run("link");
  const Kb kb = parse_kb(fs::path(o.kb), ParseOptions{.strict = g.strict});
  const LinearEncoder encoder = LinearEncoder::Load(fs::path(o.checkpoint));
  const auto corpus = parse_corpus(fs::path(o.corpus));
  run.manifest().add_input("kb", o.kb);
  run.manifest().add_input("checkpoint", o.checkpoint);
  run.manifest().add_input("corpus", o.corpus);
  NameIndex index;
  if (!o.index.empty()) {
    index = NameIndex::Load(fs::path(o.index));
    run.manifest().add_input("index", o.index);
    if (index.size() != kb.size()) {
      throw ValidationError("index has " + std::to_string(index.size()) +
                            " rows but the KB has " +
                            std::to_string(kb.size()) + " records");
    }
    for (std::size_t row = 0; row < kb.size(); ++row) {
      const KbRecord &r = kb.records()[row];
      if (index.meta(row) != RecordMeta{r.uid, r.identifier, r.name}) {
        throw ValidationError("index row " + std::to_string(row) +
                              " does not match KB record " +
                              std::to_string(r.uid));
      }
    }
  } else {
    index = final_index(encoder, kb, 0, g.threads);
  }
  const auto predictions = link_corpus(index, encoder, corpus, g.threads);
  write_file(o.out,
             [&](std::ostream &os) { write_predictions(predictions, os); });
  run.manifest().add_output("predictions", o.out);
  out << "linked=" << predictions.size() << '\n';
  run.finish(manifest_path(o.out));
  return 0;
}

struct EvaluateOptions {
  std::string pred, corpus, kb, out, format = "kv";
};

int run_evaluate(const EvaluateOptions &o, const GlobalOptions &g,
                 std::ostream &out) {
  Run run("evaluate");
  const auto predictions = read_predictions(fs::path(o.pred));
  run.manifest().add_input("predictions", o.pred);
  std::vector<char> affected;
  if (!o.corpus.empty()) {
    const auto corpus = parse_corpus(fs::path(o.corpus));
    run.manifest().add_input("corpus", o.corpus);
    std::size_t i = 0;
    for (const Document &doc : corpus) {
      for (const Mention &m : doc.mentions) {
        if (i >= predictions.size() || predictions[i].document != doc.id ||
            predictions[i].start != m.start || predictions[i].end != m.end ||
            predictions[i].gold != m.gold) {
          throw ValidationError("predictions are not aligned with corpus at "
                                "mention " +
                                std::to_string(i));
        }
        ++i;
      }
    }
    if (i != predictions.size()) {
      throw ValidationError("predictions are not aligned with corpus");
    }
    if (!o.kb.empty()) {
      const Kb kb = parse_kb(fs::path(o.kb), ParseOptions{.strict = g.strict});
      run.manifest().add_input("kb", o.kb);
      affected = affected_flags(corpus, kb);
    }
  }
  const EvalReport report = recall_at_1(predictions, affected);
  write_file(o.out, [&](std::ostream &os) {
    if (o.format == "tsv") {
      write_eval_tsv(report, os);
    } else {
      write_eval_kv(report, os);
    }
  });
  run.manifest().add_output("report", o.out);
  write_eval_kv(report, out);
  run.finish(manifest_path(o.out));
  return 0;
}

struct PipelineOptions {
  std::string kb, taxonomy, train_corpus, test_corpus, out_prefix, config;
  bool skip_disambiguation = false;
};

int run_pipeline(const PipelineOptions &o, const GlobalOptions &g,
                 std::ostream &out) {
  Run run("pipeline");
  const RunConfig config = effective_config(o.config, g);
  const fs::path prefix(o.out_prefix);
  const Kb raw = parse_kb(fs::path(o.kb), ParseOptions{.strict = g.strict});
  run.manifest().add_input("kb", o.kb);
  std::optional<Taxonomy> taxonomy;
  if (!o.taxonomy.empty()) {
    taxonomy = parse_taxonomy(fs::path(o.taxonomy));
    run.manifest().add_input("taxonomy", o.taxonomy);
  }
  const auto train_corpus = parse_corpus(fs::path(o.train_corpus));
  const auto test_corpus = parse_corpus(fs::path(o.test_corpus));
  run.manifest().add_input("train_corpus", o.train_corpus);
  run.manifest().add_input("test_corpus", o.test_corpus);
  if (!o.config.empty()) run.manifest().add_input("config", o.config);
  run.manifest().seed = config.train.seed;
  run.manifest().config_digest = sha256_hex(config.canonical());

  Kb kb = raw;
  const fs::path kb_path = with_suffix(prefix, ".kb.tsv");
  if (!o.skip_disambiguation) {
    const DisambiguatedKb result =
        disambiguate(raw, taxonomy ? &*taxonomy : nullptr);
    const fs::path audit_path = with_suffix(prefix, ".audit.tsv");
    write_file(audit_path, [&](std::ostream &os) { write_audit(result, os); });
    run.manifest().add_output("audit", audit_path);
    out << "success_rate=" << format_double(result.success_rate) << '\n';
    kb = result.kb;
  }
  write_kb(kb, kb_path);
  run.manifest().add_output("kb", kb_path);

  TrainResult trained =
      train(fresh_encoder(config, kb), train_corpus, kb, config.train);
  const fs::path ckpt_path = with_suffix(prefix, ".ckpt");
  const fs::path log_path = with_suffix(prefix, ".train.tsv");
  trained.encoder.save(ckpt_path);
  write_file(log_path,
             [&](std::ostream &os) { write_train_log(trained.history, os); });
  run.manifest().add_output("checkpoint", ckpt_path);
  run.manifest().add_output("train_log", log_path);

  const NameIndex index =
      final_index(trained.encoder, kb, trained.generation + 1, g.threads);
  const fs::path index_path = with_suffix(prefix, ".index");
  index.save(index_path);
  run.manifest().add_output("index", index_path);

  const auto predictions =
      link_corpus(index, trained.encoder, test_corpus, g.threads);
  const fs::path pred_path = with_suffix(prefix, ".predictions.tsv");
  write_file(pred_path,
             [&](std::ostream &os) { write_predictions(predictions, os); });
  run.manifest().add_output("predictions", pred_path);

  const EvalReport report =
      recall_at_1(predictions, affected_flags(test_corpus, raw));
  const fs::path report_path = with_suffix(prefix, ".report.txt");
  const fs::path table_path = with_suffix(prefix, ".report.tsv");
  write_file(report_path, [&](std::ostream &os) { write_eval_kv(report, os); });
  write_file(table_path, [&](std::ostream &os) { write_eval_tsv(report, os); });
  run.manifest().add_output("report", report_path);
  run.manifest().add_output("report_table", table_path);
  write_eval_kv(report, out);
  run.finish(with_suffix(prefix, ".manifest.json"));
  return 0;
}

}  // namespace

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out << "context_weight = " << format_double(features.context_weight) << '\n'
      << "context_window = " << features.context_window << '\n'
      << "epochs = " << train.epochs << '\n'
      << "group_size = " << train.group_size << '\n'
      << "hash_dim = " << features.hash_dim << '\n'
      << "learning_rate = " << format_double(train.learning_rate) << '\n'
      << "max_n = " << features.max_n << '\n'
      << "min_n = " << features.min_n << '\n'
      << "pool_size = " << train.pool_size << '\n'
      << "projection_dim = " << projection_dim << '\n'
      << "reencode_every_steps = " << train.reencode_every_steps << '\n'
      << "seed = " << train.seed << '\n';
  return out.str();
}

RunConfig parse_run_config(std::istream &in, RunConfig config) {
  const std::map<std::string, std::function<void(const std::string &,
                                                 const std::string &)>>
      setters = {
          {"epochs",
           [&](auto &k, auto &v) {
             config.train.epochs = parse_value<std::size_t>(k, v);
           }},
          {"pool_size",
           [&](auto &k, auto &v) {
             config.train.pool_size = parse_value<std::size_t>(k, v);
           }},
          {"learning_rate",
           [&](auto &k, auto &v) {
             config.train.learning_rate = parse_value<double>(k, v);
           }},
          {"seed",
           [&](auto &k, auto &v) {
             config.train.seed = parse_value<std::uint64_t>(k, v);
           }},
          {"reencode_every_steps",
           [&](auto &k, auto &v) {
             config.train.reencode_every_steps =
                 parse_value<std::size_t>(k, v);
           }},
          {"group_size",
           [&](auto &k, auto &v) {
             config.train.group_size = parse_value<std::size_t>(k, v);
           }},
          {"hash_dim",
           [&](auto &k, auto &v) {
             config.features.hash_dim = parse_value<std::uint32_t>(k, v);
           }},
          {"projection_dim",
           [&](auto &k, auto &v) {
             config.projection_dim = parse_value<std::uint32_t>(k, v);
           }},
          {"min_n",
           [&](auto &k, auto &v) {
             config.features.min_n = parse_value<std::uint32_t>(k, v);
           }},
          {"max_n",
           [&](auto &k, auto &v) {
             config.features.max_n = parse_value<std::uint32_t>(k, v);
           }},
          {"context_weight",
           [&](auto &k, auto &v) {
             config.features.context_weight = parse_value<double>(k, v);
           }},
          {"context_window",
           [&](auto &k, auto &v) {
             config.features.context_window = parse_value<std::uint32_t>(k, v);
           }},
      };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = text::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected 'key = value'");
    }
    const std::string key(text::trim(view.substr(0, eq)));
    const std::string value(text::trim(view.substr(eq + 1)));
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw ParseError(line_no, "unknown config key '" + key + "'");
    }
    it->second(key, value);
  }
  config.features.validate();
  config.train.validate();
  return config;
}

RunConfig parse_run_config(const fs::path &path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open config " + path.string());
  return parse_run_config(in, std::move(base));
}

int dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err) {
  CLI::App app{"Homonym disambiguation and name-based entity linking for "
               "biomedical knowledge bases",
               "belhd"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--threads", g.threads,
                 "Worker threads (0 = hardware concurrency)");
  auto *seed_opt = app.add_option("--seed", seed, "Random seed");
  app.add_flag("--strict,!--lenient", g.strict,
               "Fail on entities without exactly one preferred name "
               "(default) or only report them");

  std::function<int()> action;

  StatsOptions stats;
  auto *cmd = app.add_subcommand("stats", "Count homonyms by category");
  cmd->add_option("--kb", stats.kb, "KB file")->required();
  cmd->add_option("--out", stats.out, "Report file")->required();
  cmd->add_option("--format", stats.format, "kv or tsv")
      ->check(CLI::IsMember({"kv", "tsv"}));
  cmd->add_option("--detail", stats.detail, "Per-name homonym table");
  cmd->callback([&] { action = [&] { return run_stats(stats, g, out); }; });

  DisambiguateOptions dis;
  cmd = app.add_subcommand("disambiguate", "Rewrite homonymous KB names");
  cmd->add_option("--kb", dis.kb, "KB file")->required();
  cmd->add_option("--taxonomy", dis.taxonomy,
                  "Species id<TAB>name file for cross-species homonyms");
  cmd->add_option("--out", dis.out, "Rewritten KB")->required();
  cmd->add_option("--audit", dis.audit, "Rewrite audit table")->required();
  cmd->callback(
      [&] { action = [&] { return run_disambiguate(dis, g, out); }; });

  AffectedOptions aff;
  cmd = app.add_subcommand("estimate-affected",
                           "Estimate mentions affected by homonyms");
  cmd->add_option("--kb", aff.kb, "KB file")->required();
  cmd->add_option("--corpus", aff.corpus, "Corpus file")->required();
  cmd->add_option("--out", aff.out, "Per-mention table")->required();
  cmd->callback(
      [&] { action = [&] { return run_estimate_affected(aff, g, out); }; });

  TrainOptions tr;
  cmd = app.add_subcommand("train", "Train the encoder");
  cmd->add_option("--kb", tr.kb, "KB file (usually disambiguated)")
      ->required();
  cmd->add_option("--corpus", tr.corpus, "Training corpus")->required();
  cmd->add_option("--out", tr.out, "Encoder checkpoint")->required();
  cmd->add_option("--log", tr.log, "Loss trajectory table");
  cmd->add_option("--index", tr.index, "Write the final name index here");
  cmd->add_option("--config", tr.config, "key = value config file");
  cmd->add_option("--epochs", tr.epochs);
  cmd->add_option("--pool-size", tr.pool_size);
  cmd->add_option("--group-size", tr.group_size);
  cmd->add_option("--reencode-every", tr.reencode_every,
                  "Re-encode every N steps (0 = per epoch)");
  cmd->add_option("--lr", tr.learning_rate);
  cmd->add_option("--hash-dim", tr.hash_dim);
  cmd->add_option("--projection-dim", tr.projection_dim);
  cmd->callback([&] { action = [&] { return run_train(tr, g, out); }; });

  LinkOptions ln;
  cmd = app.add_subcommand("link", "Link corpus mentions");
  cmd->add_option("--kb", ln.kb, "KB file")->required();
  cmd->add_option("--checkpoint", ln.checkpoint, "Encoder checkpoint")
      ->required();
  cmd->add_option("--corpus", ln.corpus, "Corpus file")->required();
  cmd->add_option("--out", ln.out, "Predictions table")->required();
  cmd->add_option("--index", ln.index, "Precomputed name index");
  cmd->callback([&] { action = [&] { return run_link(ln, g, out); }; });

  EvaluateOptions ev;
  cmd = app.add_subcommand("evaluate", "Strict recall@1 of predictions");
  cmd->add_option("--pred", ev.pred, "Predictions table")->required();
  cmd->add_option("--corpus", ev.corpus, "Corpus to check alignment against");
  cmd->add_option("--kb", ev.kb,
                  "Raw KB for the affected/unaffected breakdown (needs "
                  "--corpus)");
  cmd->add_option("--out", ev.out, "Report file")->required();
  cmd->add_option("--format", ev.format, "kv or tsv")
      ->check(CLI::IsMember({"kv", "tsv"}));
  cmd->callback([&] { action = [&] { return run_evaluate(ev, g, out); }; });

  PipelineOptions pl;
  cmd = app.add_subcommand(
      "pipeline", "disambiguate -> train -> link -> evaluate");
  cmd->add_option("--kb", pl.kb, "Raw KB file")->required();
  cmd->add_option("--taxonomy", pl.taxonomy, "Species taxonomy file");
  cmd->add_option("--train", pl.train_corpus, "Training corpus")->required();
  cmd->add_option("--test", pl.test_corpus, "Test corpus")->required();
  cmd->add_option("--out-prefix", pl.out_prefix,
                  "Prefix for every output file")
      ->required();
  cmd->add_option("--config", pl.config, "key = value config file");
  cmd->add_flag("--skip-disambiguation", pl.skip_disambiguation,
                "Train and link on the raw KB");
  cmd->callback([&] { action = [&] { return run_pipeline(pl, g, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    return action ? action() : 2;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int dispatch(int argc, const char *const *argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace belhd
