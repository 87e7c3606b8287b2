#include <cmath>

#include <gtest/gtest.h>

#include "cof/cof.hpp"
#include "oracles.hpp"

namespace {

cof::PipelineConfig raw_cfg() {
  cof::PipelineConfig cfg;
  cfg.stopwords.clear();
  cfg.stemmer = cof::StemmerKind::None;
  return cfg;
}

std::string repeat(const std::string& w, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += w + " ";
  return s;
}

// N docs; `term` appears once in the first `df` of them, every doc padded to `len` tokens.
cof::Corpus df_corpus(int n, const std::vector<std::pair<std::string, int>>& terms, int pad = 3) {
  cof::Corpus c;
  for (int i = 0; i < n; ++i) {
    std::string body = repeat("pad", pad);
    for (const auto& [t, df] : terms)
      if (i < df) body += t + " ";
    c.add(cof::make_document("d" + std::to_string(1000 + i), "", "", body, {}, raw_cfg()));
  }
  return c;
}

cof::Query query(const std::string& text, int id = 0) { return cof::make_query(id, text, raw_cfg()); }

struct Fixture {
  cof::Corpus corpus;
  cof::CorpusStats stats;
  cof::Query q;
};

// Random small corpora over a 6-word vocabulary.
Fixture random_fixture(std::uint64_t seed) {
  static const char* kVocab[] = {"ant", "bee", "cow", "doe", "eel", "fox"};
  cof::Rng rng(seed);
  Fixture f;
  const int docs = 2 + static_cast<int>(cof::uniform_index(rng, 6));
  for (int i = 0; i < docs; ++i) {
    std::string parts[3];
    for (auto& p : parts)
      for (int k = static_cast<int>(cof::uniform_index(rng, 6)); k > 0; --k) p += std::string(kVocab[cof::uniform_index(rng, 6)]) + " ";
    if (i == 0 && parts[2].empty()) parts[2] = "ant";
    f.corpus.add(cof::make_document("d" + std::to_string(i), parts[0], parts[1], parts[2], {}, raw_cfg()));
  }
  f.stats = cof::compute_stats(f.corpus);
  std::string qt;
  for (int k = 1 + static_cast<int>(cof::uniform_index(rng, 3)); k > 0; --k) qt += std::string(kVocab[cof::uniform_index(rng, 6)]) + " ";
  qt += seed % 4 == 0 ? "yak" : "";  // out-of-vocabulary term
  f.q = query(qt);
  return f;
}

}  // namespace

TEST(Features, FrozenSubstitutions) {
  const auto one = df_corpus(4, {{"apple", 1}, {"kiwi", 1}});
  const auto s = cof::compute_stats(one);
  const auto& d0 = one.documents()[0];
  EXPECT_NEAR(cof::tf(query("apple"), d0), 0.6931, 1e-4);
  EXPECT_DOUBLE_EQ(cof::tf(query("zzz"), d0), 0.0);

  const auto d = cof::make_document("x", "", "", "apple apple apple kiwi", {}, raw_cfg());
  EXPECT_NEAR(cof::tf(query("apple kiwi"), d), 2.0794, 1e-4);

  const auto c100 = df_corpus(100, {{"ten", 10}, {"half", 50}, {"four", 4}, {"all", 100}});
  const auto s100 = cof::compute_stats(c100);
  EXPECT_NEAR(cof::idf(query("ten"), s100), 2.3026, 1e-4);
  EXPECT_NEAR(cof::idf(query("half four"), s100), 3.9120, 1e-4);
  EXPECT_DOUBLE_EQ(cof::idf(query("all"), s100), 0.0);
  EXPECT_DOUBLE_EQ(cof::idf(query("missing"), s100), 0.0);
  EXPECT_NEAR(cof::tf_idf(query("half"), c100.documents()[0], s100), 0.4805, 1e-4);
  EXPECT_DOUBLE_EQ(cof::tf_idf(query("half"), c100.documents()[99], s100), 0.0);
  (void)s;
}

TEST(Features, IcfExamples) {
  cof::CorpusStats s;
  s.num_docs = 1;
  s.total_tokens = 10000;
  s.cf = {{"rare", 100}, {"every", 10000}};
  s.df = {{"rare", 1}, {"every", 1}};
  s.avgdl = 10000;
  EXPECT_NEAR(cof::icf(query("rare"), s), 4.6052, 1e-4);
  EXPECT_DOUBLE_EQ(cof::icf(query("every"), s), 0.0);
  auto more = s;
  more.cf["rare"] = 200;
  EXPECT_LT(cof::icf(query("rare"), more), cof::icf(query("rare"), s));
}

TEST(Features, Bm25WeightEqualsIdfAtAverageLength) {
  for (double k1 : {0.0, 0.5, 1.2, 2.0, 10.0})
    for (double b : {0.0, 0.3, 0.75, 1.0}) {
      const cof::Bm25Params p{k1, b};
      EXPECT_NEAR(cof::bm25_tf_weight(1.0, 7.5, 7.5, p), 1.0, 1e-12);
    }
  // A corpus whose docs all share one length, so |d| = avgdl for each.
  const auto c = df_corpus(20, {{"apple", 5}, {"pear", 1}}, 4);
  cof::Corpus same;
  for (const auto& d : c.documents()) {
    std::string body = repeat("pad", 4);
    body += d.count("apple") ? "apple " : "filler ";
    body += d.count("pear") ? "pear " : "filler ";
    same.add(cof::make_document(d.doc_id, "", "", body, {}, raw_cfg()));
  }
  const auto s = cof::compute_stats(same);
  const auto& d0 = same.documents()[0];
  ASSERT_DOUBLE_EQ(static_cast<double>(d0.length_tokens), s.avgdl);
  for (double k1 : {0.3, 1.2, 3.0})
    for (double b : {0.0, 0.75, 1.0}) {
      const auto q = query("apple pear");
      EXPECT_NEAR(cof::bm25(q, d0, s, {k1, b}), cof::idf(q, s), 1e-12);
    }
}

TEST(Features, Bm25LengthBehaviour) {
  const auto cfg = raw_cfg();
  cof::Corpus c;
  c.add(cof::make_document("short", "", "", "term pad", {}, cfg));
  c.add(cof::make_document("long", "", "", "term pad pad pad pad pad pad pad", {}, cfg));
  c.add(cof::make_document("none", "", "", "pad pad", {}, cfg));
  const auto s = cof::compute_stats(c);
  const auto q = query("term");
  EXPECT_GT(cof::bm25(q, c.at("short"), s), cof::bm25(q, c.at("long"), s));
  EXPECT_DOUBLE_EQ(cof::bm25(q, c.at("none"), s), 0.0);
  const cof::Bm25Params flat{1.2, 0.0};
  EXPECT_DOUBLE_EQ(cof::bm25(q, c.at("short"), s, flat), cof::bm25(q, c.at("long"), s, flat));
  cof::CorpusStats empty;
  EXPECT_THROW(cof::bm25(q, c.at("short"), empty), cof::EmptyCorpusError);
}

TEST(Features, DirectSubstitutionOnTwentyFixtures) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto f = random_fixture(seed);
    const auto r = oracle::recount(f.corpus);
    std::set<std::string> qset(f.q.terms.begin(), f.q.terms.end());
    double idf = 0.0, icf = 0.0;
    for (const auto& t : qset) {
      if (r.df.count(t)) idf += std::log(static_cast<double>(r.n) / static_cast<double>(r.df.at(t)));
      if (r.cf.count(t)) icf += std::log(static_cast<double>(r.tokens) / static_cast<double>(r.cf.at(t)));
    }
    EXPECT_NEAR(cof::idf(f.q, f.stats), idf, 1e-12);
    EXPECT_NEAR(cof::icf(f.q, f.stats), icf, 1e-12);
    for (const auto& d : f.corpus.documents()) {
      double tf = 0.0, tfidf = 0.0;
      for (const auto& t : qset) {
        int c = 0;
        for (const auto& p : d.parts) c += static_cast<int>(std::count(p.tokens.begin(), p.tokens.end(), t));
        if (c == 0) continue;
        tf += std::log(c + 1.0);
        tfidf += std::log(c + 1.0) * std::log(static_cast<double>(r.n) / static_cast<double>(r.df.at(t)));
      }
      EXPECT_NEAR(cof::tf(f.q, d), tf, 1e-12);
      EXPECT_NEAR(cof::tf_idf(f.q, d, f.stats), tfidf, 1e-12);
      EXPECT_GE(cof::idf(f.q, f.stats), 0.0);
      EXPECT_GE(cof::icf(f.q, f.stats), 0.0);
    }
  }
}

TEST(Features, SmoothedModelsSumToOne) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto f = random_fixture(seed);
    const double floor = 1.0 / static_cast<double>(f.stats.total_tokens + f.stats.vocabulary_size());
    for (auto method : {cof::SmoothingMethod::Dirichlet, cof::SmoothingMethod::JelinekMercer,
                        cof::SmoothingMethod::AbsoluteDiscount}) {
      cof::SmoothingConfig sm;
      sm.method = method;
      sm.mu = 7.0;
      EXPECT_DOUBLE_EQ(cof::collection_prob("never-seen", f.stats), floor);
      for (const auto& d : f.corpus.documents()) {
        double sum = 0.0;
        for (const auto& [t, cf] : f.stats.cf) sum += cof::document_prob(t, d, f.stats, sm);
        EXPECT_NEAR(sum, 1.0, 1e-9) << cof::smoothing_name(method);
      }
    }
  }
}

TEST(Features, LanguageModelProperties) {
  const auto cfg = raw_cfg();
  cof::Corpus c;
  c.add(cof::make_document("same", "", "", "red blue", {}, cfg));
  c.add(cof::make_document("other", "", "", "green black", {}, cfg));
  c.add(cof::make_document("empty", "", "", "", {}, cfg));
  const auto s = cof::compute_stats(c);
  const auto q = query("red blue");
  for (auto method : {cof::SmoothingMethod::Dirichlet, cof::SmoothingMethod::JelinekMercer,
                      cof::SmoothingMethod::AbsoluteDiscount}) {
    cof::SmoothingConfig sm;
    sm.method = method;
    EXPECT_GT(cof::lm_score(q, c.at("same"), s, sm), cof::lm_score(q, c.at("other"), s, sm));
    for (const auto& d : c.documents()) EXPECT_LE(cof::lm_score(q, d, s, sm), 0.0);
    for (const auto* t : {"red", "green", "never"})
      EXPECT_DOUBLE_EQ(cof::document_prob(t, c.at("empty"), s, sm), cof::collection_prob(t, s));
  }
  EXPECT_THROW(cof::lm_score(query(""), c.at("same"), s), cof::ValidationError);
}

TEST(Features, DuplicatingCorpusKeepsIdfAndIcf) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto f = random_fixture(seed);
    cof::Corpus twice;
    for (const auto& d : f.corpus.documents()) {
      twice.add(d);
      auto copy = d;
      copy.doc_id += "-copy";
      twice.add(copy);
    }
    const auto s2 = cof::compute_stats(twice);
    EXPECT_NEAR(cof::idf(f.q, s2), cof::idf(f.q, f.stats), 1e-12);
    EXPECT_NEAR(cof::icf(f.q, s2), cof::icf(f.q, f.stats), 1e-12);
  }
}

TEST(Features, QueryScope) {
  const auto cfg = raw_cfg();
  const auto q = query("ship");
  EXPECT_EQ(cof::query_scope(q, cof::make_document("a", "boat", "sea", "wave", {}, cfg)), 0);
  EXPECT_EQ(cof::query_scope(q, cof::make_document("b", "ship", "sea", "big ship", {}, cfg)), 2);
  EXPECT_EQ(cof::query_scope(q, cof::make_document("c", "ship", "ship", "ship", {}, cfg)), 3);
}

TEST(Features, ExtractMatchesSingleFeatureCalls) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto f = random_fixture(seed);
    if (f.q.terms.empty()) continue;
    cof::FeatureConfig fc;
    fc.smoothing.method = seed % 2 ? cof::SmoothingMethod::JelinekMercer : cof::SmoothingMethod::Dirichlet;
    for (const auto& d : f.corpus.documents()) {
      const int rel = d.doc_id == "d0" ? 1 : 2;
      const auto in = cof::extract(f.q, d, {f.q.query_id, d.doc_id, rel}, f.stats, fc);
      using F = cof::Feature;
      const auto& x = in.features;
      EXPECT_EQ(in.label, rel == 1 ? 1 : 0);
      EXPECT_EQ(x[cof::slot(F::QueryTermId)], f.q.query_id);
      EXPECT_EQ(x[cof::slot(F::IsRel)], rel);
      EXPECT_EQ(x[cof::slot(F::QueryScope)], cof::query_scope(f.q, d));
      EXPECT_EQ(x[cof::slot(F::TF)], cof::tf(f.q, d));
      EXPECT_EQ(x[cof::slot(F::IDF)], cof::idf(f.q, f.stats));
      EXPECT_EQ(x[cof::slot(F::TFIDF)], cof::tf_idf(f.q, d, f.stats));
      EXPECT_EQ(x[cof::slot(F::ICF)], cof::icf(f.q, f.stats));
      EXPECT_EQ(x[cof::slot(F::BM25)], cof::bm25(f.q, d, f.stats, fc.bm25));
      EXPECT_EQ(x[cof::slot(F::LM)], cof::lm_score(f.q, d, f.stats, fc.smoothing));
      EXPECT_EQ(x[cof::slot(F::DocLength)], static_cast<double>(d.length_tokens));
      EXPECT_EQ(x[cof::slot(F::QueryLength)], static_cast<double>(f.q.length_terms));
      EXPECT_EQ(x[cof::slot(F::DocTypeId)], static_cast<double>(d.category));
      EXPECT_EQ(in, cof::extract(f.q, d, {f.q.query_id, d.doc_id, rel}, f.stats, fc));
    }
  }
  const auto f = random_fixture(3);
  EXPECT_THROW(cof::extract(f.q, f.corpus.documents()[0], {99, "d0", 1}, f.stats), cof::ValidationError);
}

TEST(Features, NoOverlapGivesZeros) {
  const auto f = random_fixture(5);
  const auto q = query("zebra");
  for (const auto& d : f.corpus.documents()) {
    EXPECT_EQ(cof::tf(q, d), 0.0);
    EXPECT_EQ(cof::tf_idf(q, d, f.stats), 0.0);
    EXPECT_EQ(cof::bm25(q, d, f.stats), 0.0);
  }
}

TEST(Features, PresetsAndMasks) {
  EXPECT_EQ(cof::preset_mask(cof::FeaturePreset::PaperFaithful).count(), 12u);
  const auto safe = cof::preset_mask(cof::FeaturePreset::LeakageSafe);
  EXPECT_EQ(safe.masked_list(), "1,2");
  EXPECT_EQ(cof::FeatureMask::from_masked_list("1,2"), safe);
  EXPECT_EQ(cof::parse_preset("paper-faithful"), cof::FeaturePreset::PaperFaithful);
  EXPECT_THROW(cof::parse_preset("bogus"), cof::ValidationError);
  EXPECT_THROW(cof::FeatureMask::from_masked_list("13"), cof::ValidationError);
}
