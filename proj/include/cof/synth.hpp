#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cof/corpus.hpp"
#include "cof/random.hpp"
#include "cof/text_pipeline.hpp"

namespace cof {

/// Shape of the generated collection: 10 queries, each with 10 relevant and 5
/// non-relevant judged documents, padded with unjudged background news up to
/// `total_docs`.
struct SynthConfig {
  std::uint64_t seed = 7;
  int num_queries = 10;
  int relevant_per_query = 10;
  int non_relevant_per_query = 5;
  // non-relevant documents that republish one of the query's relevant stories
  int reposts_per_query = 2;
  int total_docs = 2600;
  int vocabulary = 500;
  double zipf_exponent = 1.0;
};

struct SynthRecord {
  std::string doc_id;
  std::string subject;
  std::string lead;
  std::string body;
  Category category = Category::Political;
};

struct SynthQuery {
  int query_id = 0;
  std::string text;
};

struct SynthData {
  std::vector<SynthRecord> documents;
  std::vector<SynthQuery> queries;
  std::vector<Judgment> judgments;
  std::vector<std::string> vocabulary;
};

namespace detail {

class SynthGenerator {
 public:
  explicit SynthGenerator(const SynthConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  SynthData run() {
    if (cfg_.num_queries < 1 || cfg_.relevant_per_query < 1 || cfg_.non_relevant_per_query < 0 ||
        cfg_.reposts_per_query < 0 || cfg_.reposts_per_query > cfg_.non_relevant_per_query)
      throw ValidationError("synth: invalid query shape");
    const int judged = cfg_.num_queries * (cfg_.relevant_per_query + cfg_.non_relevant_per_query);
    if (cfg_.total_docs < judged) throw ValidationError("synth: total_docs smaller than the judged set");

    SynthData out;
    out.vocabulary = make_vocabulary();
    vocab_ = out.vocabulary;
    build_zipf();

    // Query terms come from the middle of the frequency range.
    const auto lo = std::min<std::size_t>(20, vocab_.size() - 1);
    const auto hi = std::min<std::size_t>(120, vocab_.size());
    std::vector<std::size_t> candidates;
    for (auto i = lo; i < hi; ++i) candidates.push_back(i);
    shuffle(candidates, rng_);
    if (candidates.size() < static_cast<std::size_t>(cfg_.num_queries)) throw ValidationError("synth: vocabulary too small");
    std::vector<std::size_t> query_terms(candidates.begin(), candidates.begin() + cfg_.num_queries);

    std::vector<std::size_t> ids(static_cast<std::size_t>(cfg_.total_docs));
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    shuffle(ids, rng_);
    std::size_t next_id = 0;
    auto take_id = [&] {
      char buf[16];
      std::snprintf(buf, sizeof buf, "n%05zu", ids[next_id++]);
      return std::string(buf);
    };

    for (int q = 0; q < cfg_.num_queries; ++q) {
      const auto term = query_terms[static_cast<std::size_t>(q)];
      out.queries.push_back({q, vocab_[term]});
      std::vector<SynthRecord> relevant;
      for (int r = 0; r < cfg_.relevant_per_query; ++r) {
        SynthRecord rec = background(term);
        rec.subject = insert_term(rec.subject, term, 1 + static_cast<int>(uniform_index(rng_, 2)));
        rec.lead = insert_term(rec.lead, term, 1 + static_cast<int>(uniform_index(rng_, 3)));
        rec.body = insert_term(rec.body, term, 2 + static_cast<int>(uniform_index(rng_, 7)));
        rec.doc_id = take_id();
        out.judgments.push_back({q, rec.doc_id, 1});
        relevant.push_back(rec);
        out.documents.push_back(std::move(rec));
      }
      for (int r = 0; r < cfg_.non_relevant_per_query; ++r) {
        SynthRecord rec;
        if (r < cfg_.reposts_per_query) {
          rec = relevant[uniform_index(rng_, relevant.size())];
        } else {
          rec = background(term);
          // Passing mentions in one or two parts.
          if (uniform_real(rng_) < 0.5) {
            const int parts = 1 + static_cast<int>(uniform_index(rng_, 2));
            for (int p = 0; p < parts; ++p) {
              const auto which = uniform_index(rng_, 3);
              auto& text = which == 0 ? rec.subject : which == 1 ? rec.lead : rec.body;
              text = insert_term(text, term, 1 + static_cast<int>(uniform_index(rng_, 2)));
            }
          }
        }
        rec.doc_id = take_id();
        out.judgments.push_back({q, rec.doc_id, 2});
        out.documents.push_back(std::move(rec));
      }
    }
    while (next_id < ids.size()) {
      SynthRecord rec = background(vocab_.size());
      rec.doc_id = take_id();
      out.documents.push_back(std::move(rec));
    }
    std::sort(out.documents.begin(), out.documents.end(),
              [](const SynthRecord& a, const SynthRecord& b) { return a.doc_id < b.doc_id; });
    return out;
  }

 private:
  // Pronounceable pseudo-words that the pipeline leaves unchanged.
  std::vector<std::string> make_vocabulary() {
    static constexpr std::string_view kCons = "bdfgklmnprstvz";
    static constexpr std::string_view kVow = "aeiou";
    const PipelineConfig pc;
    std::set<std::string> seen;
    std::vector<std::string> words;
    while (static_cast<int>(words.size()) < cfg_.vocabulary) {
      std::string w;
      const int syl = 2 + static_cast<int>(uniform_index(rng_, 2));
      for (int s = 0; s < syl; ++s) {
        w += kCons[uniform_index(rng_, kCons.size())];
        w += kVow[uniform_index(rng_, kVow.size())];
      }
      w += kCons[uniform_index(rng_, kCons.size())];
      auto processed = process(w, pc);
      if (processed.size() != 1 || processed[0] != w || !seen.insert(w).second) continue;
      words.push_back(std::move(w));
    }
    return words;
  }

  void build_zipf() {
    cdf_.clear();
    double acc = 0.0;
    for (std::size_t r = 0; r < vocab_.size(); ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), cfg_.zipf_exponent);
      cdf_.push_back(acc);
    }
    for (auto& c : cdf_) c /= acc;
  }

  std::size_t zipf_draw() {
    const double u = uniform_real(rng_);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), vocab_.size() - 1);
  }

  // News-like text: sentences of Zipf words mixed with stopwords, digits and
  // punctuation. `exclude` (an index, or vocab size for none) never appears.
  std::string sentence_text(int words, std::size_t exclude) {
    static constexpr std::array<std::string_view, 8> kFiller = {"the", "and", "of", "but", "in", "to", "a", "was"};
    std::string text;
    int in_sentence = 0;
    for (int i = 0; i < words; ++i) {
      std::string w;
      const double u = uniform_real(rng_);
      if (u < 0.22) {
        w = kFiller[uniform_index(rng_, kFiller.size())];
      } else if (u < 0.24) {
        w = std::to_string(2016 + uniform_index(rng_, 2));
      } else {
        std::size_t k;
        do {
          k = zipf_draw();
        } while (k == exclude);
        w = vocab_[k];
      }
      if (in_sentence == 0 && !w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
      if (!text.empty()) text += ' ';
      text += w;
      if (++in_sentence >= 8 + static_cast<int>(uniform_index(rng_, 8))) {
        text += '.';
        in_sentence = 0;
      }
    }
    if (!text.empty() && text.back() != '.') text += '.';
    return text;
  }

  SynthRecord background(std::size_t exclude) {
    SynthRecord r;
    r.category = static_cast<Category>(uniform_index(rng_, 4));
    r.subject = sentence_text(5 + static_cast<int>(uniform_index(rng_, 6)), exclude);
    r.lead = sentence_text(15 + static_cast<int>(uniform_index(rng_, 16)), exclude);
    r.body = sentence_text(60 + static_cast<int>(uniform_index(rng_, 141)), exclude);
    return r;
  }

  std::string insert_term(const std::string& text, std::size_t term, int times) {
    std::vector<std::string> words;
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto sp = text.find(' ', pos);
      if (sp == std::string::npos) sp = text.size();
      words.push_back(text.substr(pos, sp - pos));
      pos = sp + 1;
    }
    for (int t = 0; t < times; ++t) {
      const auto at = uniform_index(rng_, words.size() + 1);
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(at), vocab_[term]);
    }
    std::string out;
    for (const auto& w : words) {
      if (!out.empty()) out += ' ';
      out += w;
    }
    return out;
  }

  SynthConfig cfg_;
  Rng rng_;
  std::vector<std::string> vocab_;
  std::vector<double> cdf_;
};

}  // namespace detail

inline SynthData synthesize(const SynthConfig& cfg = {}) { return detail::SynthGenerator(cfg).run(); }

inline void write_documents_jsonl(const SynthData& d, std::ostream& out) {
  for (const auto& r : d.documents) {
    nlohmann::json j = {{"doc_id", r.doc_id},
                        {"subject", r.subject},
                        {"lead", r.lead},
                        {"body", r.body},
                        {"category", std::string(category_name(r.category))}};
    out << j.dump() << '\n';
  }
}

inline void write_queries_jsonl(const SynthData& d, std::ostream& out) {
  for (const auto& q : d.queries) out << nlohmann::json{{"query_id", q.query_id}, {"text", q.text}}.dump() << '\n';
}

inline void write_judgments_jsonl(const SynthData& d, std::ostream& out) {
  for (const auto& j : d.judgments)
    out << nlohmann::json{{"query_id", j.query_id}, {"doc_id", j.doc_id}, {"is_rel", j.is_rel_raw}}.dump() << '\n';
}

}  // namespace cof
