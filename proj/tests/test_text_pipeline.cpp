#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cof/cof.hpp"
#include "oracles.hpp"

namespace {

using cof::DigitPolicy;
using cof::PipelineConfig;
using cof::StemmerKind;
using Terms = std::vector<std::string>;

std::string join(const Terms& t) {
  std::string s;
  for (const auto& x : t) s += x + " ";
  return s;
}

cof::Corpus fixture_corpus(const PipelineConfig& cfg) {
  std::ifstream in(COF_TEST_DATA "/fixture_corpus.jsonl");
  return cof::ingest(in, cfg);
}

}  // namespace

TEST(Porter, MatchesFrozenReference) {
  const auto ref = oracle::porter_reference(COF_TEST_DATA "/porter_reference.txt");
  ASSERT_GT(ref.size(), 2000u);
  std::size_t mismatches = 0;
  for (const auto& [word, stem] : ref) {
    if (cof::porter_stem(word) != stem) {
      ADD_FAILURE() << word << " -> " << cof::porter_stem(word) << ", expected " << stem;
      if (++mismatches > 20) break;
    }
  }
}

TEST(Porter, ClassicExamples) {
  EXPECT_EQ(cof::porter_stem("caresses"), "caress");
  EXPECT_EQ(cof::porter_stem("ponies"), "poni");
  EXPECT_EQ(cof::porter_stem("running"), "run");
  EXPECT_EQ(cof::porter_stem("relational"), "relat");
  EXPECT_EQ(cof::porter_stem("generalizations"), "gener");
  EXPECT_EQ(cof::porter_stem("cats"), "cat");
  EXPECT_EQ(cof::porter_stem(""), "");
}

TEST(Tokenize, SplitsOnNonAlphabetic) {
  EXPECT_TRUE(cof::tokenize("").empty());
  EXPECT_EQ(cof::tokenize("U.S.-based news!"), (Terms{"U", "S", "based", "news"}));
  EXPECT_EQ(cof::tokenize("year 2016 report", DigitPolicy::Drop), (Terms{"year", "report"}));
  EXPECT_EQ(cof::tokenize("year 2016 report", DigitPolicy::Keep), (Terms{"year", "2016", "report"}));
  EXPECT_EQ(cof::tokenize("abc123def"), (Terms{"abc", "def"}));
}

TEST(Process, ExamplesFromTheChain) {
  const PipelineConfig cfg;
  EXPECT_EQ(cof::process("The cats and running dogs", cfg), (Terms{"cat", "run", "dog"}));
  EXPECT_TRUE(cof::process("a", cfg).empty());
  EXPECT_TRUE(cof::process(std::string(26, 'q'), cfg).empty());
  EXPECT_EQ(cof::process(std::string(25, 'q'), cfg).size(), 1u);
  EXPECT_TRUE(cof::process("THE And BUT", cfg).empty());
}

TEST(Process, NoStemmerKeepsLowercaseTokens) {
  PipelineConfig cfg;
  cfg.stemmer = StemmerKind::None;
  EXPECT_EQ(cof::process("Running DOGS", cfg), (Terms{"running", "dogs"}));
}

TEST(Process, CustomBoundsAndStopwords) {
  PipelineConfig cfg;
  cfg.min_len = 4;
  cfg.max_len = 5;
  cfg.stopwords = {"zebra"};
  EXPECT_EQ(cof::process("cat zebra horse elephant", cfg), (Terms{"hors"}));
  cfg.min_len = 0;
  EXPECT_THROW(cfg.validate(), cof::ValidationError);
}

TEST(Process, StopwordFileOverridesList) {
  const auto path = std::string(::testing::TempDir()) + "/stop.txt";
  std::ofstream(path) << "cat\n\n dog \n";
  PipelineConfig cfg;
  cfg.stopwords = cof::load_stopwords(path);
  EXPECT_EQ(cof::process("the cat and the dog", cfg), (Terms{"the", "and", "the"}));
  EXPECT_THROW(cof::load_stopwords("/nonexistent/stop.txt"), cof::Error);
}

TEST(Process, EveryTermSatisfiesTheChainOnFixture) {
  const PipelineConfig cfg;
  std::ifstream in(COF_TEST_DATA "/fixture_corpus.jsonl");
  std::string line;
  std::size_t terms = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* key : {"subject", "lead", "body"}) {
      for (const auto& t : cof::process_traced(j[key].get<std::string>(), cfg)) {
        ++terms;
        EXPECT_GE(t.raw.size(), 2u);
        EXPECT_LE(t.raw.size(), 25u);
        EXPECT_EQ(t.term, cof::porter_stem(cof::detail::to_lower(t.raw)));
        EXPECT_FALSE(cfg.stopwords.contains(t.term)) << t.term;
        for (char c : t.term) EXPECT_TRUE(c >= 'a' && c <= 'z') << t.term;
      }
    }
  }
  EXPECT_GT(terms, 5000u);
}

TEST(Process, IdempotentWithoutStemming) {
  PipelineConfig cfg;
  cfg.stemmer = StemmerKind::None;
  const auto corpus = fixture_corpus(cfg);
  for (const auto& d : corpus.documents())
    for (const auto& p : d.parts) EXPECT_EQ(cof::process(join(p.tokens), cfg), p.tokens);
}

// Porter is not a fixpoint on every stem (abuse -> abus -> abu), so with the
// stemmer on, re-processing may change a term. The stemmer must be the only
// cause: each term either survives unchanged or is re-stemmed.
TEST(Process, PorterIsTheOnlySourceOfNonIdempotence) {
  const PipelineConfig cfg;
  std::size_t changed = 0;
  const auto corpus = fixture_corpus(cfg);
  for (const auto& d : corpus.documents()) {
    for (const auto& p : d.parts) {
      const auto again = cof::process(join(p.tokens), cfg);
      Terms expected;
      for (const auto& t : p.tokens) {
        if (t.size() < 2 || t.size() > 25) continue;
        const auto s = cof::porter_stem(t);
        if (!s.empty() && !cfg.stopwords.contains(s)) expected.push_back(s);
      }
      EXPECT_EQ(again, expected);
      changed += again != p.tokens;
    }
  }
  EXPECT_EQ(cof::process("abus", cfg), (Terms{"abu"}));
  EXPECT_GT(changed, 0u);
}

TEST(Process, SyntheticVocabularyIsAFixpoint) {
  const auto data = cof::synthesize({});
  const PipelineConfig cfg;
  for (const auto& w : data.vocabulary) EXPECT_EQ(cof::process(w, cfg), Terms{w});
}
