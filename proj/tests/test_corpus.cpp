#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cof/cof.hpp"
#include "oracles.hpp"

namespace {

cof::PipelineConfig no_stopwords() {
  cof::PipelineConfig cfg;
  cfg.stopwords.clear();
  return cfg;
}

std::string record(const std::string& id, const std::string& subject, const std::string& lead,
                   const std::string& body, const std::string& category = "political") {
  return nlohmann::json{{"doc_id", id}, {"subject", subject}, {"lead", lead}, {"body", body}, {"category", category}}
      .dump();
}

cof::Corpus random_corpus(std::uint64_t seed, int docs) {
  static const char* kWords[] = {"alpha", "beta", "gamma", "delta", "omega", "river", "stone", "cloud", "paper", "lamp"};
  cof::Rng rng(seed);
  auto text = [&](int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += std::string(kWords[cof::uniform_index(rng, 10)]) + " ";
    return s;
  };
  cof::Corpus c;
  for (int i = 0; i < docs; ++i)
    c.add(cof::make_document("d" + std::to_string(i), text(static_cast<int>(cof::uniform_index(rng, 4))),
                             text(static_cast<int>(cof::uniform_index(rng, 8))),
                             text(static_cast<int>(cof::uniform_index(rng, 20))), cof::Category::Sports,
                             no_stopwords()));
  return c;
}

}  // namespace

TEST(Corpus, HandCountedDocument) {
  const auto d = cof::make_document("x", "Cats run", "", "cats", cof::Category::Political, no_stopwords());
  EXPECT_EQ(d.length_tokens, 3u);
  cof::Corpus c;
  c.add(d);
  const auto s = cof::compute_stats(c);
  EXPECT_EQ(s.coll_freq("cat"), 2u);
  EXPECT_EQ(s.doc_freq("cat"), 1u);
  EXPECT_EQ(s.total_tokens, 3u);
}

TEST(Corpus, IngestEmptyStreamAndStatsError) {
  std::istringstream in("");
  const auto c = cof::ingest(in, {});
  EXPECT_EQ(c.size(), 0u);
  EXPECT_THROW(cof::compute_stats(c), cof::EmptyCorpusError);
}

TEST(Corpus, IngestParsesCategoriesAndRejectsBadInput) {
  std::istringstream ok(record("a", "s", "l", "b", "Sports") + "\n\n" + record("b", "s", "l", "b", "3") + "\n");
  const auto c = cof::ingest(ok, {});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.at("a").category, cof::Category::Sports);
  EXPECT_EQ(c.at("b").category, cof::Category::Artistic);

  std::istringstream bad(record("a", "s", "l", "b") + "\n{not json\n");
  try {
    cof::ingest(bad, {});
    FAIL() << "expected ParseError";
  } catch (const cof::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }

  std::istringstream missing("{\"doc_id\":\"a\",\"subject\":\"s\",\"lead\":\"l\",\"category\":\"sports\"}\n");
  EXPECT_THROW(cof::ingest(missing, {}), cof::ParseError);

  std::istringstream unknown(record("a", "s", "l", "b", "weather") + "\n");
  EXPECT_THROW(cof::ingest(unknown, {}), cof::ValidationError);

  std::istringstream dup(record("a", "s", "l", "b") + "\n" + record("a", "s", "l", "b") + "\n");
  EXPECT_THROW(cof::ingest(dup, {}), cof::ValidationError);
}

TEST(Corpus, AvgdlAndConstructedCounts) {
  cof::Corpus c;
  const auto cfg = no_stopwords();
  const char* bodies[] = {"aa bb", "aa bb cc dd", "aa bb cc dd ee ff", "aa bb cc dd ee ff gg hh"};
  for (int i = 0; i < 4; ++i) c.add(cof::make_document("d" + std::to_string(i), "", "", bodies[i], {}, cfg));
  const auto s = cof::compute_stats(c);
  EXPECT_DOUBLE_EQ(s.avgdl, 5.0);
  EXPECT_EQ(s.doc_freq("cc"), 3u);
  EXPECT_EQ(s.coll_freq("cc"), 3u);
}

TEST(Corpus, StatsMatchRecount) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto c = random_corpus(seed, 1 + static_cast<int>(seed * 7 % 50));
    const auto s = cof::compute_stats(c);
    const auto r = oracle::recount(c);
    EXPECT_EQ(s.num_docs, r.n);
    EXPECT_EQ(s.total_tokens, r.tokens);
    EXPECT_DOUBLE_EQ(s.avgdl, r.avgdl);
    ASSERT_EQ(s.cf.size(), r.cf.size());
    std::size_t cf_sum = 0;
    for (const auto& [t, cf] : r.cf) {
      EXPECT_EQ(s.coll_freq(t), cf);
      EXPECT_EQ(s.doc_freq(t), r.df.at(t));
      EXPECT_GE(s.doc_freq(t), 1u);
      EXPECT_LE(s.doc_freq(t), s.num_docs);
      EXPECT_LE(s.doc_freq(t), s.coll_freq(t));
      cf_sum += s.coll_freq(t);
    }
    EXPECT_EQ(cf_sum, s.total_tokens);
    for (const auto& d : c.documents()) {
      std::size_t sum = 0;
      for (const auto& [t, n] : d.term_counts) sum += static_cast<std::size_t>(n);
      EXPECT_EQ(sum, d.length_tokens);
    }
  }
}

TEST(Corpus, ReingestIsBitIdentical) {
  std::ifstream a(COF_TEST_DATA "/fixture_corpus.jsonl"), b(COF_TEST_DATA "/fixture_corpus.jsonl");
  const auto c1 = cof::ingest(a, {});
  const auto c2 = cof::ingest(b, {});
  EXPECT_EQ(c1, c2);
  EXPECT_EQ(cof::compute_stats(c1), cof::compute_stats(c2));
  EXPECT_EQ(cof::corpus_hash(c1), cof::corpus_hash(c2));
  EXPECT_EQ(cof::stats_to_json(cof::compute_stats(c1)).dump(), cof::stats_to_json(cof::compute_stats(c2)).dump());
}

TEST(Corpus, TopTerms) {
  cof::Corpus c;
  const auto cfg = no_stopwords();
  std::string iran;
  for (int i = 0; i < 50; ++i) iran += "iran ";
  c.add(cof::make_document("a", "", "", iran + "oil oil", {}, cfg));
  c.add(cof::make_document("b", "", "", "tehran oil", {}, cfg));
  const auto s = cof::compute_stats(c);
  EXPECT_TRUE(cof::top_terms(s, 0).empty());
  EXPECT_EQ(cof::top_terms(s, 1), std::vector<std::string>{"iran"});
  EXPECT_EQ(cof::top_terms(s, 99).size(), 3u);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto st = cof::compute_stats(random_corpus(seed, 30));
    std::vector<std::pair<std::string, std::size_t>> all(st.cf.begin(), st.cf.end());
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
      return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    const auto top = cof::top_terms(st, 10);
    ASSERT_EQ(top.size(), std::min<std::size_t>(10, all.size()));
    for (std::size_t i = 0; i < top.size(); ++i) EXPECT_EQ(top[i], all[i].first);
  }
}

TEST(Corpus, SplitIsADeterministicPartition) {
  std::vector<cof::Judgment> js;
  for (int q = 0; q < 10; ++q)
    for (int d = 0; d < 15; ++d) js.push_back({q, "d" + std::to_string(d), d < 10 ? 1 : 2});
  const auto s1 = cof::split_by_query(js, 0.7, 7);
  const auto s2 = cof::split_by_query(js, 0.7, 7);
  EXPECT_EQ(s1.train, s2.train);
  EXPECT_EQ(s1.test, s2.test);
  std::set<int> tq, sq;
  for (const auto& j : s1.train) tq.insert(j.query_id);
  for (const auto& j : s1.test) sq.insert(j.query_id);
  EXPECT_EQ(tq.size(), 7u);
  EXPECT_EQ(sq.size(), 3u);
  for (int q : tq) EXPECT_FALSE(sq.contains(q));
  EXPECT_EQ(s1.train.size() + s1.test.size(), js.size());

  std::set<int> two{4, 9};
  for (double f : {0.01, 0.5, 0.99}) EXPECT_EQ(cof::split_query_ids(two, f, 1).size(), 1u);
  EXPECT_THROW(cof::split_query_ids({3}, 0.7, 1), cof::SplitError);
  EXPECT_THROW(cof::split_query_ids(two, 1.0, 1), cof::SplitError);
  EXPECT_THROW(cof::split_query_ids(two, 0.0, 1), cof::SplitError);
}

TEST(Corpus, QueriesAndJudgmentsFromJsonl) {
  std::istringstream q("{\"query_id\":3,\"text\":\"Running cats\"}\n");
  const auto qs = cof::read_queries(q, {});
  ASSERT_EQ(qs.size(), 1u);
  EXPECT_EQ(qs[0].terms, (std::vector<std::string>{"run", "cat"}));
  EXPECT_EQ(qs[0].length_terms, 2u);

  std::istringstream j("{\"query_id\":3,\"doc_id\":\"a\",\"is_rel\":1}\n{\"query_id\":3,\"doc_id\":\"b\",\"is_rel\":2}\n");
  const auto js = cof::read_judgments(j);
  ASSERT_EQ(js.size(), 2u);
  EXPECT_EQ(js[0].label(), 1);
  EXPECT_EQ(js[1].label(), 0);

  std::istringstream badrel("{\"query_id\":3,\"doc_id\":\"a\",\"is_rel\":0}\n");
  EXPECT_THROW(cof::read_judgments(badrel), cof::Error);
}
