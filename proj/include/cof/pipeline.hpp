#pragma once

#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cof/corpus.hpp"
#include "cof/features.hpp"
#include "cof/letor_io.hpp"
#include "cof/metrics.hpp"
#include "cof/rankers/rankers.hpp"
#include "cof/synth.hpp"

namespace cof {

namespace detail {
inline std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

/// Records the settings a dataset was built with.
inline void stamp_header(Dataset& ds, const PipelineConfig& pc, const FeatureConfig& fc, std::uint64_t hash) {
  ds.set_header("features", "12");
  ds.set_header("preset", std::string(preset_name(fc.preset)));
  ds.set_header("feature_mask", fc.mask().masked_list());
  ds.set_header("bm25", "k1=" + detail::num(fc.bm25.k1) + " b=" + detail::num(fc.bm25.b));
  ds.set_header("smoothing", std::string(smoothing_name(fc.smoothing.method)) + " mu=" + detail::num(fc.smoothing.mu) +
                                 " lambda=" + detail::num(fc.smoothing.lambda) + " delta=" + detail::num(fc.smoothing.delta));
  ds.set_header("pipeline", "min_len=" + std::to_string(pc.min_len) + " max_len=" + std::to_string(pc.max_len) +
                                " stemmer=" + (pc.stemmer == StemmerKind::Porter ? "porter" : "none") +
                                " digits=" + (pc.digit_policy == DigitPolicy::Drop ? "drop" : "keep") +
                                " stopwords=" + std::to_string(pc.stopwords.size()));
  ds.set_header("corpus_hash", detail::hex64(hash));
  ds.set_header("normalization", "none");
}

/// One instance per judgment. Unknown query or document ids are errors.
inline Dataset build_dataset(const Corpus& corpus, const CorpusStats& stats, const std::vector<Query>& queries,
                             const std::vector<Judgment>& judgments, const FeatureConfig& fc, const PipelineConfig& pc) {
  fc.bm25.validate();
  fc.smoothing.validate();
  std::map<int, const Query*> by_id;
  for (const auto& q : queries) by_id[q.query_id] = &q;
  Dataset ds;
  stamp_header(ds, pc, fc, corpus_hash(corpus));
  for (const auto& j : judgments) {
    auto it = by_id.find(j.query_id);
    if (it == by_id.end()) throw ValidationError("judgment references unknown query " + std::to_string(j.query_id));
    ds.add(extract(*it->second, corpus.at(j.doc_id), j, stats, fc));
  }
  return ds;
}

struct CorpusBundle {
  Corpus corpus;
  CorpusStats stats;
  std::vector<Query> queries;
  std::vector<Judgment> judgments;
};

/// Runs generated data through the same JSON Lines readers as files on disk.
inline CorpusBundle load_synthetic(const SynthData& data, const PipelineConfig& pc) {
  std::stringstream docs, queries, judg;
  write_documents_jsonl(data, docs);
  write_queries_jsonl(data, queries);
  write_judgments_jsonl(data, judg);
  CorpusBundle b;
  b.corpus = ingest(docs, pc);
  b.stats = compute_stats(b.corpus);
  b.queries = read_queries(queries, pc);
  b.judgments = read_judgments(judg);
  return b;
}

struct ReproduceOptions {
  std::uint64_t seed = 7;
  FeaturePreset preset = FeaturePreset::PaperFaithful;
  double train_fraction = 0.7;
  TrainConfig train;
  PipelineConfig pipeline;
  Bm25Params bm25;
  SmoothingConfig smoothing;
  SynthConfig synth;
};

struct AlgorithmResult {
  RankerKind kind;
  MetricReport train;
  MetricReport test;
  std::string model_text;
};

struct ReproduceResult {
  FeaturePreset preset;
  std::uint64_t seed = 0;
  std::vector<AlgorithmResult> results;

  [[nodiscard]] const AlgorithmResult& at(RankerKind k) const {
    for (const auto& r : results)
      if (r.kind == k) return r;
    throw Error("no result for " + std::string(ranker_name(k)));
  }
};

namespace detail {
template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw Error(std::string("stage ") + name + ": " + e.what());
  }
}
}  // namespace detail

/// synth -> extract -> split -> train all five -> evaluate both sides.
inline ReproduceResult reproduce(const ReproduceOptions& opt) {
  SynthConfig sc = opt.synth;
  sc.seed = opt.seed;
  auto bundle = detail::stage("synth", [&] { return load_synthetic(synthesize(sc), opt.pipeline); });
  FeatureConfig fc{opt.bm25, opt.smoothing, opt.preset};
  auto ds = detail::stage("extract", [&] {
    return build_dataset(bundle.corpus, bundle.stats, bundle.queries, bundle.judgments, fc, opt.pipeline);
  });
  auto split = detail::stage("split", [&] { return split_dataset(ds, opt.train_fraction, opt.seed); });
  ReproduceResult out{opt.preset, opt.seed, {}};
  TrainConfig tc = opt.train;
  tc.seed = opt.seed;
  for (auto k : kAllRankers) {
    auto model = detail::stage("train", [&] { return train(k, split.train, tc); });
    auto res = detail::stage("evaluate", [&] {
      return AlgorithmResult{k, evaluate(model, split.train, "train"), evaluate(model, split.test, "test"), to_string(model)};
    });
    out.results.push_back(std::move(res));
  }
  return out;
}

inline constexpr std::string_view kReproduceFooter =
    "Note: synthetic data. Test-side values reported for the original news corpus (e.g. ERR@10 near 0.6931,\n"
    "LambdaRank MAP 0.5144) depend on that unpublished collection and are not reproduced here.\n";

/// Four tables (MAP, NDCG@10, ERR@10, P@10) of training/testing values.
inline void write_tables(const ReproduceResult& r, std::ostream& out) {
  using Getter = double (*)(const MetricReport&);
  const std::array<std::pair<const char*, Getter>, 4> metrics = {{
      {"MAP", [](const MetricReport& m) { return m.map; }},
      {"NDCG@10", [](const MetricReport& m) { return m.ndcg[9]; }},
      {"ERR@10", [](const MetricReport& m) { return m.err[9]; }},
      {"P@10", [](const MetricReport& m) { return m.p[9]; }},
  }};
  out << "preset: " << preset_name(r.preset) << "   seed: " << r.seed << "\n\n";
  int n = 1;
  for (const auto& [title, get] : metrics) {
    out << "Table " << n++ << ". " << title << "\n";
    out << "Algorithm     Training data  Testing data\n";
    for (const auto& a : r.results) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%-13s %13.4f %13.4f\n", std::string(ranker_name(a.kind)).c_str(), get(a.train),
                    get(a.test));
      out << buf;
    }
    out << '\n';
  }
  out << kReproduceFooter;
}

/// CSV rows `algorithm,metric,k,split,value` over every cutoff.
inline void write_tables_csv(const ReproduceResult& r, std::ostream& out) {
  out << "algorithm,metric,k,split,value\n";
  for (const auto& a : r.results) {
    for (const auto* rep : {&a.train, &a.test}) {
      std::stringstream ss;
      write_csv(*rep, ss, false);
      std::string line;
      while (std::getline(ss, line)) out << ranker_name(a.kind) << ',' << line << '\n';
    }
  }
}

}  // namespace cof
