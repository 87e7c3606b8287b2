#include <sstream>

#include <gtest/gtest.h>

#include "cof/cof.hpp"

namespace {

std::string jsonl(const cof::SynthData& d) {
  std::ostringstream out;
  cof::write_documents_jsonl(d, out);
  cof::write_queries_jsonl(d, out);
  cof::write_judgments_jsonl(d, out);
  return out.str();
}

cof::RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return cof::parse_run_config(in);
}

}  // namespace

TEST(Synth, CollectionShape) {
  const auto data = cof::synthesize({});
  EXPECT_EQ(data.documents.size(), 2600u);
  EXPECT_EQ(data.queries.size(), 10u);
  EXPECT_EQ(data.vocabulary.size(), 500u);
  ASSERT_EQ(data.judgments.size(), 150u);
  int relevant = 0;
  for (const auto& j : data.judgments) relevant += j.label();
  EXPECT_EQ(relevant, 100);

  const auto bundle = cof::load_synthetic(data, {});
  std::map<int, const cof::Query*> queries;
  for (const auto& q : bundle.queries) queries[q.query_id] = &q;
  std::set<cof::Category> categories;
  for (const auto& d : bundle.corpus.documents()) categories.insert(d.category);
  EXPECT_EQ(categories.size(), 4u);
  for (const auto& j : bundle.judgments) {
    const auto& d = bundle.corpus.at(j.doc_id);
    if (j.label() == 1) {
      EXPECT_EQ(cof::query_scope(*queries.at(j.query_id), d), 3) << j.doc_id;
    }
  }
}

TEST(Synth, SameSeedSameCorpus) {
  EXPECT_EQ(jsonl(cof::synthesize({})), jsonl(cof::synthesize({})));
  cof::SynthConfig other;
  other.seed = 8;
  EXPECT_NE(jsonl(cof::synthesize({})), jsonl(cof::synthesize(other)));
}

TEST(Pipeline, DatasetHeaderRecordsProvenance) {
  const auto bundle = cof::load_synthetic(cof::synthesize({}), {});
  cof::FeatureConfig fc;
  fc.preset = cof::FeaturePreset::LeakageSafe;
  const auto ds = cof::build_dataset(bundle.corpus, bundle.stats, bundle.queries, bundle.judgments, fc, {});
  EXPECT_EQ(ds.size(), 150u);
  EXPECT_EQ(ds.num_queries(), 10u);
  EXPECT_EQ(ds.header("preset"), "leakage-safe");
  EXPECT_EQ(ds.header("feature_mask"), "1,2");
  EXPECT_TRUE(ds.header("corpus_hash").has_value());
  EXPECT_EQ(ds.mask(), cof::preset_mask(cof::FeaturePreset::LeakageSafe));
  for (const auto& [q, g] : ds.groups())
    for (const auto& in : g) {
      EXPECT_EQ(in.features[1], in.label == 1 ? 1.0 : 2.0);
      EXPECT_EQ(in.features[0], q);
    }
}

TEST(Pipeline, UnknownJudgedDocumentFails) {
  auto bundle = cof::load_synthetic(cof::synthesize({}), {});
  bundle.judgments.push_back({0, "missing", 1});
  EXPECT_THROW(cof::build_dataset(bundle.corpus, bundle.stats, bundle.queries, bundle.judgments, {}, {}),
               cof::ValidationError);
}

TEST(Pipeline, ReproduceTablesAreDeterministic) {
  cof::ReproduceOptions opt;
  opt.train.rounds = 5;
  const auto a = cof::reproduce(opt);
  const auto b = cof::reproduce(opt);
  std::ostringstream ta, tb, ca;
  cof::write_tables(a, ta);
  cof::write_tables(b, tb);
  EXPECT_EQ(ta.str(), tb.str());
  EXPECT_NE(ta.str().find("Table 4. P@10"), std::string::npos);
  EXPECT_NE(ta.str().find("not reproduced"), std::string::npos);
  cof::write_tables_csv(a, ca);
  std::istringstream in(ca.str());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 1 + 5 * 2 * 31);
}

TEST(RunConfig, ParsesSectionsAndOverrides) {
  const auto rc = parse(
      "# run settings\n"
      "seed = 11\n"
      "[pipeline]\nmin_len = 3\nstemmer = \"none\"\n"
      "[bm25]\nk1 = 2.0   # saturation\nb = 0.5\n"
      "[smoothing]\nmethod = jelinek-mercer\nlambda = 0.4\n"
      "[features]\npreset = paper-faithful\nnormalize = true\n"
      "[train]\nalgorithm = LambdaMART\nrounds = 40\nmetric = \"ERR@5\"\nleaves = 6\n"
      "[split]\nfraction = 0.6\n"
      "[paths]\ncorpus = \"data/#1.jsonl\"\n");
  EXPECT_EQ(rc.seed, 11u);
  EXPECT_EQ(rc.train.seed, 11u);
  EXPECT_EQ(rc.pipeline.min_len, 3);
  EXPECT_EQ(rc.pipeline.stemmer, cof::StemmerKind::None);
  EXPECT_EQ(rc.features.bm25.k1, 2.0);
  EXPECT_EQ(rc.features.bm25.b, 0.5);
  EXPECT_EQ(rc.features.smoothing.method, cof::SmoothingMethod::JelinekMercer);
  EXPECT_EQ(rc.features.smoothing.lambda, 0.4);
  EXPECT_EQ(rc.features.preset, cof::FeaturePreset::PaperFaithful);
  EXPECT_TRUE(rc.normalize);
  EXPECT_EQ(rc.algorithm, cof::RankerKind::LambdaMART);
  EXPECT_EQ(rc.train.rounds, 40);
  EXPECT_EQ(rc.train.metric.name(), "ERR@5");
  EXPECT_EQ(rc.train.leaves, 6);
  EXPECT_EQ(rc.split_fraction, 0.6);
  EXPECT_EQ(rc.paths.at("corpus"), "data/#1.jsonl");
}

TEST(RunConfig, ErrorsCarryTheLine) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse(text);
    } catch (const cof::ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("[bm25]\nk1 = 1\nb = lots\n"), 3u);
  EXPECT_EQ(line_of("\n[train\n"), 2u);
  EXPECT_EQ(line_of("[train]\nalgorithm = SVM\n"), 2u);
  EXPECT_EQ(line_of("[nope]\nx = 1\n"), 2u);
  EXPECT_EQ(line_of("just words\n"), 1u);
  EXPECT_THROW(parse("[bm25]\nb = 1.5\n"), cof::ValidationError);
  EXPECT_THROW(parse("[pipeline]\nmin_len = 9\nmax_len = 3\n"), cof::ValidationError);
}
