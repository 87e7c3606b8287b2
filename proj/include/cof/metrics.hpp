#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cof/error.hpp"

namespace cof {

/// One query's documents in rank order: score descending, ties by ascending
/// doc_id.
struct RankedList {
  struct Entry {
    std::string doc_id;
    double score = 0.0;
    int label = 0;
  };

  int query_id = 0;
  std::vector<Entry> entries;

  static RankedList from_entries(int query_id, std::vector<Entry> entries) {
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.doc_id < b.doc_id;
    });
    return {query_id, std::move(entries)};
  }

  [[nodiscard]] std::vector<int> labels() const {
    std::vector<int> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.label);
    return out;
  }
  [[nodiscard]] std::size_t size() const { return entries.size(); }
};

inline constexpr int kMaxCutoff = 10;

/// (precision, recall) of an unordered retrieved set.
inline std::pair<double, double> precision_recall(const std::set<std::string>& retrieved,
                                                  const std::set<std::string>& relevant) {
  if (retrieved.empty()) throw UndefinedMetricError("precision undefined: nothing retrieved");
  if (relevant.empty()) throw UndefinedMetricError("recall undefined: no relevant documents");
  std::size_t hit = 0;
  for (const auto& d : retrieved) hit += relevant.count(d);
  return {static_cast<double>(hit) / static_cast<double>(retrieved.size()),
          static_cast<double>(hit) / static_cast<double>(relevant.size())};
}

/// Lists shorter than k are padded with non-relevant documents.
inline double precision_at_k(std::span<const int> labels, int k) {
  if (k < 1) throw UndefinedMetricError("precision_at_k: k must be >= 1");
  const auto n = std::min<std::size_t>(labels.size(), static_cast<std::size_t>(k));
  int rel = 0;
  for (std::size_t i = 0; i < n; ++i) rel += labels[i] > 0 ? 1 : 0;
  return static_cast<double>(rel) / k;
}

inline double average_precision(std::span<const int> labels) {
  int rel = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 0) {
      ++rel;
      sum += static_cast<double>(rel) / static_cast<double>(i + 1);
    }
  }
  if (rel == 0) throw UndefinedMetricError("average precision undefined: no relevant documents");
  return sum / rel;
}

inline double dcg_at_k(std::span<const int> labels, int k) {
  const auto n = std::min<std::size_t>(labels.size(), static_cast<std::size_t>(std::max(k, 0)));
  double dcg = 0.0;
  for (std::size_t i = 0; i < n; ++i) dcg += (std::exp2(labels[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  return dcg;
}

/// 0 when the ideal DCG is 0.
inline double ndcg_at_k(std::span<const int> labels, int k) {
  if (k < 1) throw UndefinedMetricError("ndcg_at_k: k must be >= 1");
  std::vector<int> ideal(labels.begin(), labels.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg_at_k(ideal, k);
  if (idcg <= 0.0) return 0.0;
  return dcg_at_k(labels, k) / idcg;
}

inline double err_at_k(std::span<const int> labels, int k, int y_max = 1) {
  if (k < 1) throw UndefinedMetricError("err_at_k: k must be >= 1");
  const double denom = std::exp2(y_max);
  const auto n = std::min<std::size_t>(labels.size(), static_cast<std::size_t>(k));
  double err = 0.0;
  double not_stopped = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (std::exp2(labels[i]) - 1.0) / denom;
    err += not_stopped * r / static_cast<double>(i + 1);
    not_stopped *= 1.0 - r;
  }
  return err;
}

inline double precision_at_k(const RankedList& l, int k) { return precision_at_k(l.labels(), k); }
inline double average_precision(const RankedList& l) { return average_precision(l.labels()); }
inline double ndcg_at_k(const RankedList& l, int k) { return ndcg_at_k(l.labels(), k); }
inline double err_at_k(const RankedList& l, int k, int y_max = 1) { return err_at_k(l.labels(), k, y_max); }

inline bool has_relevant(std::span<const int> labels) {
  return std::any_of(labels.begin(), labels.end(), [](int y) { return y > 0; });
}

/// Mean AP over the lists with at least one relevant document.
inline double mean_average_precision(std::span<const RankedList> lists) {
  double sum = 0.0;
  int m = 0;
  for (const auto& l : lists) {
    const auto y = l.labels();
    if (!has_relevant(y)) continue;
    sum += average_precision(y);
    ++m;
  }
  if (m == 0) throw UndefinedMetricError("MAP undefined: no query has a relevant document");
  return sum / m;
}

enum class MetricKind { MAP, NDCG, ERR };

/// A metric with its cutoff, spelled "MAP", "NDCG@k" or "ERR@k".
struct MetricSpec {
  MetricKind kind = MetricKind::NDCG;
  int k = 10;

  [[nodiscard]] std::string name() const {
    switch (kind) {
      case MetricKind::MAP: return "MAP";
      case MetricKind::NDCG: return "NDCG@" + std::to_string(k);
      case MetricKind::ERR: return "ERR@" + std::to_string(k);
    }
    return "?";
  }

  static MetricSpec parse(std::string_view s) {
    std::string up(s);
    for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up == "MAP") return {MetricKind::MAP, kMaxCutoff};
    auto at = up.find('@');
    const std::string head = up.substr(0, at);
    int k = kMaxCutoff;
    if (at != std::string::npos) {
      try {
        std::size_t used = 0;
        k = std::stoi(up.substr(at + 1), &used);
        if (used != up.size() - at - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ValidationError("bad metric cutoff in '" + std::string(s) + "'");
      }
    }
    if (k < 1 || k > kMaxCutoff) throw ValidationError("metric cutoff must lie in 1..10");
    if (head == "NDCG") return {MetricKind::NDCG, k};
    if (head == "ERR") return {MetricKind::ERR, k};
    throw ValidationError("unknown metric '" + std::string(s) + "'");
  }

  /// Per-query value; AP of a list with no relevant document counts as 0.
  [[nodiscard]] double evaluate(std::span<const int> labels, int y_max = 1) const {
    switch (kind) {
      case MetricKind::MAP: return has_relevant(labels) ? average_precision(labels) : 0.0;
      case MetricKind::NDCG: return ndcg_at_k(labels, k);
      case MetricKind::ERR: return err_at_k(labels, k, y_max);
    }
    return 0.0;
  }

  bool operator==(const MetricSpec&) const = default;
};

struct QueryMetrics {
  std::optional<double> ap;
  std::array<double, kMaxCutoff> p{};
  std::array<double, kMaxCutoff> ndcg{};
  std::array<double, kMaxCutoff> err{};
};

struct MetricReport {
  std::string split;
  std::map<int, QueryMetrics> per_query;
  double map = 0.0;
  std::array<double, kMaxCutoff> p{};
  std::array<double, kMaxCutoff> ndcg{};
  std::array<double, kMaxCutoff> err{};
  // queries left out of MAP for lack of a relevant document
  int skipped_queries = 0;

  [[nodiscard]] double value(const MetricSpec& m) const {
    switch (m.kind) {
      case MetricKind::MAP: return map;
      case MetricKind::NDCG: return ndcg[static_cast<std::size_t>(m.k - 1)];
      case MetricKind::ERR: return err[static_cast<std::size_t>(m.k - 1)];
    }
    return 0.0;
  }
};

inline MetricReport report(std::span<const RankedList> lists, std::string split = "test", int y_max = 1) {
  if (lists.empty()) throw UndefinedMetricError("report: no ranked lists");
  MetricReport r;
  r.split = std::move(split);
  double ap_sum = 0.0;
  int ap_count = 0;
  for (const auto& l : lists) {
    const auto y = l.labels();
    QueryMetrics qm;
    if (has_relevant(y)) {
      qm.ap = average_precision(y);
      ap_sum += *qm.ap;
      ++ap_count;
    } else {
      ++r.skipped_queries;
    }
    for (int k = 1; k <= kMaxCutoff; ++k) {
      const auto i = static_cast<std::size_t>(k - 1);
      qm.p[i] = precision_at_k(y, k);
      qm.ndcg[i] = ndcg_at_k(y, k);
      qm.err[i] = err_at_k(y, k, y_max);
      r.p[i] += qm.p[i];
      r.ndcg[i] += qm.ndcg[i];
      r.err[i] += qm.err[i];
    }
    r.per_query[l.query_id] = qm;
  }
  const auto m = static_cast<double>(lists.size());
  for (std::size_t i = 0; i < kMaxCutoff; ++i) {
    r.p[i] /= m;
    r.ndcg[i] /= m;
    r.err[i] /= m;
  }
  r.map = ap_count > 0 ? ap_sum / ap_count : 0.0;
  return r;
}

namespace detail {
inline std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}
inline std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

/// CSV rows `metric,k,split,value`; MAP has an empty k.
inline void write_csv(const MetricReport& r, std::ostream& out, bool with_header = true) {
  if (with_header) out << "metric,k,split,value\n";
  out << "MAP,," << r.split << ',' << detail::full(r.map) << '\n';
  for (int k = 1; k <= kMaxCutoff; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    out << "P," << k << ',' << r.split << ',' << detail::full(r.p[i]) << '\n';
    out << "NDCG," << k << ',' << r.split << ',' << detail::full(r.ndcg[i]) << '\n';
    out << "ERR," << k << ',' << r.split << ',' << detail::full(r.err[i]) << '\n';
  }
}

inline void write_table(const MetricReport& r, std::ostream& out) {
  out << "split: " << r.split << "   MAP: " << detail::fixed4(r.map);
  if (r.skipped_queries > 0) out << "   (" << r.skipped_queries << " queries without relevant documents)";
  out << "\n  k      P@k   NDCG@k    ERR@k\n";
  for (int k = 1; k <= kMaxCutoff; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    char buf[80];
    std::snprintf(buf, sizeof buf, "%3d %8.4f %8.4f %8.4f\n", k, r.p[i], r.ndcg[i], r.err[i]);
    out << buf;
  }
}

}  // namespace cof
