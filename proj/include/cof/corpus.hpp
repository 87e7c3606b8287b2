#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cof/error.hpp"
#include "cof/random.hpp"
#include "cof/text_pipeline.hpp"

namespace cof {

enum class PartKind { Subject = 0, Lead = 1, Body = 2 };
inline constexpr std::size_t kPartCount = 3;

struct DocumentPart {
  PartKind kind = PartKind::Body;
  std::string raw_text;
  std::vector<std::string> tokens;

  bool operator==(const DocumentPart&) const = default;
};

enum class Category { Political = 0, Sports = 1, Economic = 2, Artistic = 3 };

inline std::string_view category_name(Category c) {
  switch (c) {
    case Category::Political: return "political";
    case Category::Sports: return "sports";
    case Category::Economic: return "economic";
    case Category::Artistic: return "artistic";
  }
  return "unknown";
}

/// Case-insensitive name, or the integer code as a string.
inline std::optional<Category> parse_category(std::string_view s) {
  const std::string lower = detail::to_lower(s);
  for (int code = 0; code < 4; ++code) {
    auto c = static_cast<Category>(code);
    if (lower == category_name(c) || lower == std::to_string(code)) return c;
  }
  return std::nullopt;
}

struct Document {
  std::string doc_id;
  std::array<DocumentPart, kPartCount> parts;
  Category category = Category::Political;
  std::size_t length_tokens = 0;
  // term -> occurrences over all parts
  std::map<std::string, int, std::less<>> term_counts;

  [[nodiscard]] int count(std::string_view term) const {
    auto it = term_counts.find(term);
    return it == term_counts.end() ? 0 : it->second;
  }
  [[nodiscard]] const DocumentPart& part(PartKind k) const { return parts[static_cast<std::size_t>(k)]; }

  bool operator==(const Document&) const = default;
};

inline Document make_document(std::string doc_id, std::string subject, std::string lead, std::string body,
                              Category category, const PipelineConfig& cfg) {
  Document d;
  d.doc_id = std::move(doc_id);
  d.category = category;
  std::array<std::string, kPartCount> texts{std::move(subject), std::move(lead), std::move(body)};
  for (std::size_t i = 0; i < kPartCount; ++i) {
    auto& p = d.parts[i];
    p.kind = static_cast<PartKind>(i);
    p.tokens = process(texts[i], cfg);
    p.raw_text = std::move(texts[i]);
    d.length_tokens += p.tokens.size();
    for (const auto& t : p.tokens) ++d.term_counts[t];
  }
  return d;
}

struct Query {
  int query_id = 0;
  std::string raw_text;
  std::vector<std::string> terms;
  std::size_t length_terms = 0;

  bool operator==(const Query&) const = default;
};

inline Query make_query(int query_id, std::string text, const PipelineConfig& cfg) {
  if (query_id < 0) throw ValidationError("query_id must be nonnegative");
  Query q;
  q.query_id = query_id;
  q.terms = process(text, cfg);
  q.length_terms = q.terms.size();
  q.raw_text = std::move(text);
  return q;
}

/// Relevance as coded in the source data: 1 = related, 2 = non-related.
struct Judgment {
  int query_id = 0;
  std::string doc_id;
  int is_rel_raw = 2;

  [[nodiscard]] int label() const { return is_rel_raw == 1 ? 1 : 0; }
  bool operator==(const Judgment&) const = default;
};

struct CorpusStats {
  std::size_t num_docs = 0;
  std::map<std::string, std::size_t, std::less<>> df;
  std::map<std::string, std::size_t, std::less<>> cf;
  std::size_t total_tokens = 0;
  double avgdl = 0.0;

  [[nodiscard]] std::size_t doc_freq(std::string_view t) const {
    auto it = df.find(t);
    return it == df.end() ? 0 : it->second;
  }
  [[nodiscard]] std::size_t coll_freq(std::string_view t) const {
    auto it = cf.find(t);
    return it == cf.end() ? 0 : it->second;
  }
  [[nodiscard]] std::size_t vocabulary_size() const { return cf.size(); }

  bool operator==(const CorpusStats&) const = default;
};

class Corpus {
 public:
  Corpus() = default;

  void add(Document d) {
    if (index_.contains(d.doc_id)) throw ValidationError("duplicate doc_id: " + d.doc_id);
    index_.emplace(d.doc_id, docs_.size());
    docs_.push_back(std::move(d));
  }

  [[nodiscard]] std::size_t size() const { return docs_.size(); }
  [[nodiscard]] bool empty() const { return docs_.empty(); }
  [[nodiscard]] const std::vector<Document>& documents() const { return docs_; }

  [[nodiscard]] const Document* find(std::string_view doc_id) const {
    auto it = index_.find(std::string(doc_id));
    return it == index_.end() ? nullptr : &docs_[it->second];
  }

  [[nodiscard]] const Document& at(std::string_view doc_id) const {
    if (const auto* d = find(doc_id)) return *d;
    throw ValidationError("unknown doc_id: " + std::string(doc_id));
  }

  bool operator==(const Corpus& o) const { return docs_ == o.docs_; }

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

inline nlohmann::json parse_json_line(const std::string& line, std::size_t lineno) {
  try {
    auto j = nlohmann::json::parse(line);
    if (!j.is_object()) throw ParseError(lineno, "expected a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(lineno, e.what());
  }
}

inline std::string string_field(const nlohmann::json& j, const char* key, std::size_t lineno) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(lineno, std::string("missing field '") + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw ParseError(lineno, std::string("field '") + key + "' must be a string");
}

inline long long int_field(const nlohmann::json& j, const char* key, std::size_t lineno) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(lineno, std::string("missing field '") + key + "'");
  if (!it->is_number_integer()) throw ParseError(lineno, std::string("field '") + key + "' must be an integer");
  return it->get<long long>();
}

template <typename F>
void for_each_line(std::istream& in, F&& f) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    f(line, lineno);
  }
}

}  // namespace detail

/// JSON Lines, one object per line with doc_id, subject, lead, body, category.
inline Corpus ingest(std::istream& in, const PipelineConfig& cfg) {
  cfg.validate();
  Corpus corpus;
  detail::for_each_line(in, [&](const std::string& line, std::size_t lineno) {
    auto j = detail::parse_json_line(line, lineno);
    auto id = detail::string_field(j, "doc_id", lineno);
    auto subject = detail::string_field(j, "subject", lineno);
    auto lead = detail::string_field(j, "lead", lineno);
    auto body = detail::string_field(j, "body", lineno);
    auto cat_text = detail::string_field(j, "category", lineno);
    auto cat = parse_category(cat_text);
    if (!cat) throw ValidationError("line " + std::to_string(lineno) + ": unknown category '" + cat_text + "'");
    if (corpus.find(id)) throw ValidationError("line " + std::to_string(lineno) + ": duplicate doc_id '" + id + "'");
    corpus.add(make_document(std::move(id), std::move(subject), std::move(lead), std::move(body), *cat, cfg));
  });
  return corpus;
}

inline nlohmann::json document_to_json(const Document& d) {
  return {{"doc_id", d.doc_id},
          {"subject", d.part(PartKind::Subject).raw_text},
          {"lead", d.part(PartKind::Lead).raw_text},
          {"body", d.part(PartKind::Body).raw_text},
          {"category", std::string(category_name(d.category))}};
}

/// JSON Lines, one object per line with query_id and text.
inline std::vector<Query> read_queries(std::istream& in, const PipelineConfig& cfg) {
  std::vector<Query> out;
  std::set<int> seen;
  detail::for_each_line(in, [&](const std::string& line, std::size_t lineno) {
    auto j = detail::parse_json_line(line, lineno);
    auto id = static_cast<int>(detail::int_field(j, "query_id", lineno));
    if (id < 0) throw ValidationError("line " + std::to_string(lineno) + ": negative query_id");
    if (!seen.insert(id).second)
      throw ValidationError("line " + std::to_string(lineno) + ": duplicate query_id " + std::to_string(id));
    out.push_back(make_query(id, detail::string_field(j, "text", lineno), cfg));
  });
  return out;
}

/// JSON Lines with query_id, doc_id and is_rel (1 related, 2 non-related).
inline std::vector<Judgment> read_judgments(std::istream& in) {
  std::vector<Judgment> out;
  detail::for_each_line(in, [&](const std::string& line, std::size_t lineno) {
    auto j = detail::parse_json_line(line, lineno);
    Judgment jd;
    jd.query_id = static_cast<int>(detail::int_field(j, "query_id", lineno));
    jd.doc_id = detail::string_field(j, "doc_id", lineno);
    jd.is_rel_raw = static_cast<int>(detail::int_field(j, "is_rel", lineno));
    if (jd.is_rel_raw != 1 && jd.is_rel_raw != 2)
      throw ValidationError("line " + std::to_string(lineno) + ": is_rel must be 1 or 2");
    out.push_back(std::move(jd));
  });
  return out;
}

inline CorpusStats compute_stats(const Corpus& corpus) {
  if (corpus.empty()) throw EmptyCorpusError();
  CorpusStats s;
  s.num_docs = corpus.size();
  for (const auto& d : corpus.documents()) {
    s.total_tokens += d.length_tokens;
    for (const auto& [term, c] : d.term_counts) {
      ++s.df[term];
      s.cf[term] += static_cast<std::size_t>(c);
    }
  }
  s.avgdl = static_cast<double>(s.total_tokens) / static_cast<double>(s.num_docs);
  return s;
}

inline nlohmann::json stats_to_json(const CorpusStats& s) {
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& [t, cf] : s.cf) terms[t] = {{"df", s.doc_freq(t)}, {"cf", cf}};
  return {{"N", s.num_docs},
          {"total_tokens", s.total_tokens},
          {"avgdl", s.avgdl},
          {"vocabulary_size", s.vocabulary_size()},
          {"terms", std::move(terms)}};
}

/// The k most frequent terms by collection frequency; ties go to the
/// lexicographically smaller term.
inline std::vector<std::string> top_terms(const CorpusStats& stats, std::size_t k) {
  std::vector<std::pair<std::string, std::size_t>> all(stats.cf.begin(), stats.cf.end());
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                    [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].first);
  return out;
}

/// 64-bit FNV-1a over doc ids, categories and processed tokens.
inline std::uint64_t corpus_hash(const Corpus& corpus) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  for (const auto& d : corpus.documents()) {
    mix(d.doc_id);
    mix(category_name(d.category));
    for (const auto& p : d.parts)
      for (const auto& t : p.tokens) mix(t);
  }
  return h;
}

/// Picks the training query ids: round(fraction * #ids), at least one on each
/// side, chosen by a seeded shuffle of the sorted ids.
inline std::set<int> split_query_ids(const std::set<int>& ids, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw SplitError("train fraction must lie in (0, 1)");
  if (ids.size() < 2) throw SplitError("cannot split: need at least 2 distinct queries, have " + std::to_string(ids.size()));
  std::vector<int> order(ids.begin(), ids.end());
  Rng rng(seed);
  shuffle(order, rng);
  const auto q = static_cast<long>(order.size());
  const long n_train = std::clamp(std::lround(train_fraction * static_cast<double>(q)), 1L, q - 1);
  return {order.begin(), order.begin() + n_train};
}

struct JudgmentSplit {
  std::vector<Judgment> train;
  std::vector<Judgment> test;
};

/// Partitions judgments by query id; each query lands wholly on one side.
inline JudgmentSplit split_by_query(const std::vector<Judgment>& judgments, double train_fraction, std::uint64_t seed) {
  std::set<int> ids;
  for (const auto& j : judgments) ids.insert(j.query_id);
  const auto train_ids = split_query_ids(ids, train_fraction, seed);
  JudgmentSplit out;
  for (const auto& j : judgments) (train_ids.contains(j.query_id) ? out.train : out.test).push_back(j);
  return out;
}

}  // namespace cof
