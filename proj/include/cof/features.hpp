#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "cof/corpus.hpp"
#include "cof/error.hpp"

namespace cof {

inline constexpr std::size_t kFeatureCount = 12;

/// Slot order of the CoF vector. Values are 0-based slot indices; LETOR
/// files use slot + 1.
enum class Feature : std::size_t {
  QueryTermId = 0,
  IsRel,
  QueryScope,
  TF,
  IDF,
  TFIDF,
  ICF,
  BM25,
  LM,
  DocLength,
  QueryLength,
  DocTypeId,
};

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "query_term_id", "is_rel", "query_scope", "tf", "idf", "tf_idf",
    "icf",           "bm25",   "lm",          "dl", "ql",  "doc_type_id"};

using FeatureVector = std::array<double, kFeatureCount>;

inline constexpr std::size_t slot(Feature f) { return static_cast<std::size_t>(f); }

/// true = the slot may be read by a ranker.
struct FeatureMask {
  std::array<bool, kFeatureCount> enabled{};

  static FeatureMask all() {
    FeatureMask m;
    m.enabled.fill(true);
    return m;
  }
  [[nodiscard]] bool operator[](std::size_t i) const { return enabled[i]; }
  [[nodiscard]] std::size_t count() const {
    return static_cast<std::size_t>(std::count(enabled.begin(), enabled.end(), true));
  }
  /// Comma-separated 1-based indices of the masked (disabled) slots, or "none".
  [[nodiscard]] std::string masked_list() const {
    std::string out;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (enabled[i]) continue;
      if (!out.empty()) out += ',';
      out += std::to_string(i + 1);
    }
    return out.empty() ? "none" : out;
  }
  static FeatureMask from_masked_list(std::string_view s) {
    FeatureMask m = all();
    if (s == "none" || s.empty()) return m;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      auto comma = s.find(',', pos);
      auto item = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      std::size_t idx = 0;
      try {
        idx = std::stoul(std::string(item));
      } catch (const std::exception&) {
        throw ValidationError("bad feature mask entry '" + std::string(item) + "'");
      }
      if (idx < 1 || idx > kFeatureCount) throw ValidationError("feature mask index out of range");
      m.enabled[idx - 1] = false;
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return m;
  }
  bool operator==(const FeatureMask&) const = default;
};

enum class FeaturePreset { PaperFaithful, LeakageSafe };

inline std::string_view preset_name(FeaturePreset p) {
  return p == FeaturePreset::PaperFaithful ? "paper-faithful" : "leakage-safe";
}

inline FeaturePreset parse_preset(std::string_view s) {
  if (s == "paper-faithful") return FeaturePreset::PaperFaithful;
  if (s == "leakage-safe") return FeaturePreset::LeakageSafe;
  throw ValidationError("unknown preset '" + std::string(s) + "'");
}

/// Leakage-safe hides the query id and the label-encoding IsRel slot.
inline FeatureMask preset_mask(FeaturePreset p) {
  FeatureMask m = FeatureMask::all();
  if (p == FeaturePreset::LeakageSafe) {
    m.enabled[slot(Feature::QueryTermId)] = false;
    m.enabled[slot(Feature::IsRel)] = false;
  }
  return m;
}

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;

  void validate() const {
    if (!(k1 >= 0.0)) throw ValidationError("bm25: k1 must be >= 0");
    if (!(b >= 0.0 && b <= 1.0)) throw ValidationError("bm25: b must lie in [0, 1]");
  }
};

enum class SmoothingMethod { Dirichlet, JelinekMercer, AbsoluteDiscount };

inline std::string_view smoothing_name(SmoothingMethod m) {
  switch (m) {
    case SmoothingMethod::Dirichlet: return "dirichlet";
    case SmoothingMethod::JelinekMercer: return "jelinek-mercer";
    case SmoothingMethod::AbsoluteDiscount: return "absolute-discount";
  }
  return "?";
}

inline SmoothingMethod parse_smoothing(std::string_view s) {
  for (auto m : {SmoothingMethod::Dirichlet, SmoothingMethod::JelinekMercer, SmoothingMethod::AbsoluteDiscount})
    if (s == smoothing_name(m)) return m;
  throw ValidationError("unknown smoothing method '" + std::string(s) + "'");
}

struct SmoothingConfig {
  SmoothingMethod method = SmoothingMethod::Dirichlet;
  double mu = 2000.0;
  double lambda = 0.1;
  double delta = 0.7;

  void validate() const {
    switch (method) {
      case SmoothingMethod::Dirichlet:
        if (!(mu > 0.0)) throw ValidationError("dirichlet: mu must be > 0");
        break;
      case SmoothingMethod::JelinekMercer:
        if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("jelinek-mercer: lambda must lie in (0, 1)");
        break;
      case SmoothingMethod::AbsoluteDiscount:
        if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("absolute-discount: delta must lie in (0, 1)");
        break;
    }
  }
};

struct FeatureConfig {
  Bm25Params bm25;
  SmoothingConfig smoothing;
  FeaturePreset preset = FeaturePreset::LeakageSafe;

  [[nodiscard]] FeatureMask mask() const { return preset_mask(preset); }
};

struct Instance {
  int query_id = 0;
  std::string doc_id;
  int label = 0;
  FeatureVector features{};

  bool operator==(const Instance&) const = default;
};

/// Sorted distinct query terms; the q ∩ d sums run over these.
inline std::vector<std::string> distinct_terms(const Query& q) {
  std::vector<std::string> t = q.terms;
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

inline double tf(const Query& q, const Document& d) {
  double sum = 0.0;
  for (const auto& t : distinct_terms(q))
    if (int c = d.count(t); c > 0) sum += std::log(c + 1.0);
  return sum;
}

inline double idf_term(std::string_view t, const CorpusStats& s) {
  const auto df = s.doc_freq(t);
  if (df == 0) return 0.0;
  return std::log(static_cast<double>(s.num_docs) / static_cast<double>(df));
}

inline double idf(const Query& q, const CorpusStats& s) {
  double sum = 0.0;
  for (const auto& t : distinct_terms(q)) sum += idf_term(t, s);
  return sum;
}

inline double tf_idf(const Query& q, const Document& d, const CorpusStats& s) {
  double sum = 0.0;
  for (const auto& t : distinct_terms(q))
    if (int c = d.count(t); c > 0) sum += std::log(c + 1.0) * idf_term(t, s);
  return sum;
}

inline double icf(const Query& q, const CorpusStats& s) {
  double sum = 0.0;
  for (const auto& t : distinct_terms(q)) {
    const auto cf = s.coll_freq(t);
    if (cf > 0) sum += std::log(static_cast<double>(s.total_tokens) / static_cast<double>(cf));
  }
  return sum;
}

/// Saturated, length-normalized term weight; multiply by idf_term for the
/// per-term BM25 contribution.
inline double bm25_tf_weight(double c, double doc_len, double avgdl, const Bm25Params& p) {
  if (c <= 0.0) return 0.0;
  return c * (p.k1 + 1.0) / (c + p.k1 * (1.0 - p.b + p.b * doc_len / avgdl));
}

inline double bm25(const Query& q, const Document& d, const CorpusStats& s, const Bm25Params& p = {}) {
  if (!(s.avgdl > 0.0)) throw EmptyCorpusError();
  double sum = 0.0;
  const auto len = static_cast<double>(d.length_tokens);
  for (const auto& t : distinct_terms(q))
    sum += idf_term(t, s) * bm25_tf_weight(d.count(t), len, s.avgdl, p);
  return sum;
}

/// p(t|C), floored at 1/(|C|+|V|) for terms the collection never saw.
inline double collection_prob(std::string_view t, const CorpusStats& s) {
  if (s.total_tokens == 0) throw EmptyCorpusError();
  const auto cf = s.coll_freq(t);
  if (cf == 0) return 1.0 / static_cast<double>(s.total_tokens + s.vocabulary_size());
  return static_cast<double>(cf) / static_cast<double>(s.total_tokens);
}

/// Smoothed document model p(t|θ_d). An empty document falls back to p(t|C)
/// under every method.
inline double document_prob(std::string_view t, const Document& d, const CorpusStats& s, const SmoothingConfig& sm) {
  const double pc = collection_prob(t, s);
  const auto len = static_cast<double>(d.length_tokens);
  const double c = d.count(t);
  switch (sm.method) {
    case SmoothingMethod::Dirichlet:
      return (c + sm.mu * pc) / (len + sm.mu);
    case SmoothingMethod::JelinekMercer:
      if (len == 0.0) return pc;
      return (1.0 - sm.lambda) * c / len + sm.lambda * pc;
    case SmoothingMethod::AbsoluteDiscount: {
      if (len == 0.0) return pc;
      const auto unique = static_cast<double>(d.term_counts.size());
      return std::max(c - sm.delta, 0.0) / len + sm.delta * unique / len * pc;
    }
  }
  return pc;
}

/// Σ_t p(t|θ_q) log p(t|θ_d) with a maximum-likelihood query model.
inline double lm_score(const Query& q, const Document& d, const CorpusStats& s, const SmoothingConfig& sm = {}) {
  if (q.terms.empty()) throw ValidationError("lm_score: empty query");
  std::map<std::string, int, std::less<>> qcounts;
  for (const auto& t : q.terms) ++qcounts[t];
  const auto ql = static_cast<double>(q.terms.size());
  double sum = 0.0;
  for (const auto& [t, n] : qcounts) sum += (n / ql) * std::log(document_prob(t, d, s, sm));
  return sum;
}

/// Number of parts (subject, lead, body) holding at least one query term.
inline int query_scope(const Query& q, const Document& d) {
  const auto terms = distinct_terms(q);
  int scope = 0;
  for (const auto& p : d.parts) {
    const bool hit = std::any_of(p.tokens.begin(), p.tokens.end(),
                                 [&](const std::string& tok) { return std::binary_search(terms.begin(), terms.end(), tok); });
    if (hit) ++scope;
  }
  return scope;
}

inline Instance extract(const Query& q, const Document& d, const Judgment& j, const CorpusStats& s,
                        const FeatureConfig& cfg = {}) {
  if (j.query_id != q.query_id || j.doc_id != d.doc_id)
    throw ValidationError("judgment (" + std::to_string(j.query_id) + ", " + j.doc_id + ") does not match pair (" +
                          std::to_string(q.query_id) + ", " + d.doc_id + ")");
  if (j.is_rel_raw != 1 && j.is_rel_raw != 2) throw ValidationError("is_rel must be 1 or 2");
  Instance in;
  in.query_id = q.query_id;
  in.doc_id = d.doc_id;
  in.label = j.label();
  auto& f = in.features;
  f[slot(Feature::QueryTermId)] = q.query_id;
  f[slot(Feature::IsRel)] = j.is_rel_raw;
  f[slot(Feature::QueryScope)] = query_scope(q, d);
  f[slot(Feature::TF)] = tf(q, d);
  f[slot(Feature::IDF)] = idf(q, s);
  f[slot(Feature::TFIDF)] = tf_idf(q, d, s);
  f[slot(Feature::ICF)] = icf(q, s);
  f[slot(Feature::BM25)] = bm25(q, d, s, cfg.bm25);
  f[slot(Feature::LM)] = lm_score(q, d, s, cfg.smoothing);
  f[slot(Feature::DocLength)] = static_cast<double>(d.length_tokens);
  f[slot(Feature::QueryLength)] = static_cast<double>(q.length_terms);
  f[slot(Feature::DocTypeId)] = static_cast<double>(static_cast<int>(d.category));
  return in;
}

}  // namespace cof
