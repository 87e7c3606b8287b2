// cof: command-line front end for the CoF learning-to-rank toolkit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cof/cof.hpp"

namespace {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level() {
  const char* env = std::getenv("COF_LOG");
  if (!env) return Level::Warn;
  const std::string v = env;
  if (v == "error" || v == "quiet") return Level::Error;
  if (v == "info") return Level::Info;
  if (v == "debug") return Level::Debug;
  return Level::Warn;
}

void log(Level lvl, const std::string& msg) {
  static const Level current = log_level();
  static constexpr const char* kNames[] = {"error", "warn", "info", "debug"};
  if (lvl <= current) std::cerr << "[" << kNames[static_cast<int>(lvl)] << "] " << msg << '\n';
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cof::Error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw cof::Error("cannot write " + path);
  return out;
}

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> preset;
  std::optional<std::string> algorithm;
  std::optional<std::string> metric;
  std::optional<int> k;
  std::optional<int> rounds;
  std::optional<double> learning_rate;
  std::optional<int> leaves;
  std::optional<int> hidden;
  std::optional<double> fraction;
};

// Config file first, command-line flags on top.
cof::RunConfig resolve(const GlobalFlags& g) {
  cof::RunConfig rc = g.config.empty() ? cof::RunConfig{} : cof::load_run_config(g.config);
  if (g.seed) {
    rc.seed = *g.seed;
    rc.train.seed = *g.seed;
  }
  if (g.preset) {
    rc.features.preset = cof::parse_preset(*g.preset);
    rc.preset_given = true;
  }
  if (g.algorithm) rc.algorithm = cof::parse_ranker(*g.algorithm);
  if (g.metric) {
    rc.train.metric = cof::MetricSpec::parse(*g.metric);
  }
  if (g.k) {
    if (rc.train.metric.kind == cof::MetricKind::MAP) throw cof::ValidationError("--k does not apply to MAP");
    if (*g.k < 1 || *g.k > cof::kMaxCutoff) throw cof::ValidationError("--k must lie in 1..10");
    rc.train.metric.k = *g.k;
  }
  if (g.rounds) rc.train.rounds = *g.rounds;
  if (g.learning_rate) rc.train.learning_rate = *g.learning_rate;
  if (g.leaves) rc.train.leaves = *g.leaves;
  if (g.hidden) rc.train.hidden = *g.hidden;
  if (g.fraction) rc.split_fraction = *g.fraction;
  return rc;
}

cof::Corpus load_corpus(const std::string& path, const cof::RunConfig& rc) {
  auto in = open_in(path);
  return cof::ingest(in, rc.pipeline);
}

cof::Dataset load_dataset(const std::string& path) {
  auto in = open_in(path);
  return cof::read(in);
}

void write_dataset(const cof::Dataset& ds, const std::string& path) {
  auto out = open_out(path);
  cof::write(ds, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CoF news ranking toolkit: features, LETOR datasets, rankers and metrics"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config, "TOML-style run configuration file");
  app.add_option("--seed", g.seed, "Random seed (synthesis, split, training)");
  app.add_option("--preset", g.preset, "Feature preset: paper-faithful | leakage-safe");
  app.add_option("--algorithm", g.algorithm, "AdaRank | ListNet | MART | LambdaRank | LambdaMART");
  app.add_option("--metric", g.metric, "Optimized metric: MAP | NDCG@k | ERR@k");
  app.add_option("--k", g.k, "Cutoff for the optimized metric");

  std::string current;
  auto* ingest = app.add_subcommand("ingest", "Ingest a JSON Lines corpus and report its statistics");
  std::string corpus_path, stored_out, stats_out;
  ingest->add_option("corpus", corpus_path, "Corpus file (JSON Lines)")->required();
  ingest->add_option("--out", stored_out, "Write the validated corpus (JSON Lines)");
  ingest->add_option("--stats", stats_out, "Write corpus statistics (JSON)");

  auto* stats = app.add_subcommand("stats", "Print corpus statistics as JSON, or the most frequent terms");
  std::size_t top = 0;
  stats->add_option("corpus", corpus_path, "Corpus file (JSON Lines)")->required();
  stats->add_option("--top", top, "Print the N most frequent terms instead");

  auto* extract = app.add_subcommand("extract", "Compute CoF features and write a LETOR dataset");
  std::string queries_path, judgments_path, dataset_out;
  bool normalize = false;
  extract->add_option("--corpus", corpus_path)->required();
  extract->add_option("--queries", queries_path, "Queries (JSON Lines: query_id, text)")->required();
  extract->add_option("--judgments", judgments_path, "Judgments (JSON Lines: query_id, doc_id, is_rel)")->required();
  extract->add_option("--out", dataset_out)->required();
  extract->add_flag("--normalize", normalize, "Per-query min-max normalization");

  auto* split = app.add_subcommand("split", "Split a dataset by query into train and test files");
  std::string dataset_path, train_out, test_out;
  split->add_option("dataset", dataset_path)->required();
  split->add_option("--fraction", g.fraction, "Training fraction of queries (default 0.7)");
  split->add_option("--train-out", train_out)->required();
  split->add_option("--test-out", test_out)->required();

  auto* trn = app.add_subcommand("train", "Train a ranking model");
  std::string train_path, model_out;
  trn->add_option("--train", train_path, "Training dataset (LETOR)")->required();
  trn->add_option("--out", model_out, "Model file")->required();
  trn->add_option("--rounds", g.rounds, "Boosting rounds / trees / epochs");
  trn->add_option("--learning-rate", g.learning_rate);
  trn->add_option("--leaves", g.leaves, "Leaves per tree");
  trn->add_option("--hidden", g.hidden, "Hidden units for ListNet/LambdaRank (0 = linear)");

  auto* eval = app.add_subcommand("evaluate", "Evaluate a model on a dataset");
  std::string model_path, split_name = "test", csv_out;
  eval->add_option("--model", model_path)->required();
  eval->add_option("--data", dataset_path)->required();
  eval->add_option("--split", split_name, "Split tag for the report");
  eval->add_option("--csv", csv_out, "Also write the report as CSV");

  auto* rnk = app.add_subcommand("rank", "Print each query's ranking under a model");
  rnk->add_option("--model", model_path)->required();
  rnk->add_option("--data", dataset_path)->required();

  auto* syn = app.add_subcommand("synth", "Generate a synthetic corpus with queries and judgments");
  std::string out_dir = ".";
  syn->add_option("--out-dir", out_dir);

  auto* rep = app.add_subcommand("reproduce", "Run the full experiment on synthetic data and print the tables");
  rep->add_option("--csv", csv_out, "Also write all cutoffs as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    current = app.get_subcommands().front()->get_name();
    const auto rc = resolve(g);

    if (current == "ingest") {
      const auto corpus = load_corpus(corpus_path, rc);
      const auto s = cof::compute_stats(corpus);
      if (!stored_out.empty()) {
        auto out = open_out(stored_out);
        for (const auto& d : corpus.documents()) out << cof::document_to_json(d).dump() << '\n';
      }
      if (!stats_out.empty()) open_out(stats_out) << cof::stats_to_json(s).dump(2) << '\n';
      std::cout << "documents " << s.num_docs << "\nvocabulary " << s.vocabulary_size() << "\ntokens "
                << s.total_tokens << "\navgdl " << s.avgdl << '\n';
    } else if (current == "stats") {
      const auto s = cof::compute_stats(load_corpus(corpus_path, rc));
      if (top > 0) {
        for (const auto& t : cof::top_terms(s, top)) std::cout << t << '\t' << s.coll_freq(t) << '\n';
      } else {
        std::cout << cof::stats_to_json(s).dump(2) << '\n';
      }
    } else if (current == "extract") {
      const auto corpus = load_corpus(corpus_path, rc);
      const auto s = cof::compute_stats(corpus);
      auto qin = open_in(queries_path);
      auto jin = open_in(judgments_path);
      const auto queries = cof::read_queries(qin, rc.pipeline);
      const auto judgments = cof::read_judgments(jin);
      auto ds = cof::build_dataset(corpus, s, queries, judgments, rc.features, rc.pipeline);
      if (normalize || rc.normalize) ds = cof::normalize_per_query(ds);
      write_dataset(ds, dataset_out);
      log(Level::Info, "wrote " + std::to_string(ds.size()) + " instances over " + std::to_string(ds.num_queries()) +
                           " queries to " + dataset_out);
    } else if (current == "split") {
      const auto parts = cof::split_dataset(load_dataset(dataset_path), rc.split_fraction, rc.seed);
      write_dataset(parts.train, train_out);
      write_dataset(parts.test, test_out);
      std::cout << "train_queries " << parts.train.num_queries() << "\ntest_queries " << parts.test.num_queries() << '\n';
    } else if (current == "train") {
      if (!rc.algorithm) throw cof::ValidationError("train needs --algorithm (or train.algorithm in the config)");
      const auto ds = load_dataset(train_path);
      cof::TrainLog tlog;
      const auto model = cof::train(*rc.algorithm, ds, rc.train, &tlog);
      auto out = open_out(model_out);
      cof::save(model, out);
      log(Level::Info, std::string(cof::ranker_name(model.kind)) + ": " + std::to_string(model.meta.rounds_done) +
                           " rounds, final objective " +
                           (tlog.stage_loss.empty() ? std::string("n/a") : std::to_string(tlog.stage_loss.back())));
    } else if (current == "evaluate") {
      auto min = open_in(model_path);
      const auto model = cof::load(min);
      const auto report = cof::evaluate(model, load_dataset(dataset_path), split_name);
      if (report.skipped_queries > 0)
        log(Level::Warn, std::to_string(report.skipped_queries) + " queries without relevant documents left out of MAP");
      cof::write_table(report, std::cout);
      if (!csv_out.empty()) {
        auto out = open_out(csv_out);
        cof::write_csv(report, out);
      }
    } else if (current == "rank") {
      auto min = open_in(model_path);
      const auto model = cof::load(min);
      for (const auto& list : cof::rank_all(model, load_dataset(dataset_path))) {
        int pos = 1;
        for (const auto& e : list.entries)
          std::cout << list.query_id << '\t' << pos++ << '\t' << e.doc_id << '\t' << cof::detail::exact(e.score) << '\n';
      }
    } else if (current == "synth") {
      cof::SynthConfig sc;
      sc.seed = rc.seed;
      const auto data = cof::synthesize(sc);
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      auto d = open_out((dir / "corpus.jsonl").string());
      cof::write_documents_jsonl(data, d);
      auto q = open_out((dir / "queries.jsonl").string());
      cof::write_queries_jsonl(data, q);
      auto j = open_out((dir / "judgments.jsonl").string());
      cof::write_judgments_jsonl(data, j);
      std::cout << "documents " << data.documents.size() << "\nqueries " << data.queries.size() << "\njudgments "
                << data.judgments.size() << '\n';
    } else if (current == "reproduce") {
      cof::ReproduceOptions opt;
      opt.seed = rc.seed;
      opt.preset = rc.preset_given ? rc.features.preset : cof::FeaturePreset::PaperFaithful;
      opt.train_fraction = rc.split_fraction;
      opt.train = rc.train;
      opt.pipeline = rc.pipeline;
      opt.bm25 = rc.features.bm25;
      opt.smoothing = rc.features.smoothing;
      const auto result = cof::reproduce(opt);
      cof::write_tables(result, std::cout);
      if (!csv_out.empty()) {
        auto out = open_out(csv_out);
        cof::write_tables_csv(result, out);
      }
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (auto& c : msg)
      if (c == '\n') c = ' ';
    std::cerr << "error: " << current << ": " << msg << '\n';
    return 1;
  }
  return 0;
}
