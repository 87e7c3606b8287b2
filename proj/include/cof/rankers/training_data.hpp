#pragma once

#include <string>
#include <vector>

#include "cof/error.hpp"
#include "cof/letor_io.hpp"

namespace cof {

struct QueryGroup {
  int query_id = 0;
  std::vector<FeatureVector> x;
  std::vector<int> y;
  std::vector<std::string> doc_ids;

  [[nodiscard]] std::size_t size() const { return x.size(); }
};

/// Query groups in ascending query id, documents in ascending doc_id.
inline std::vector<QueryGroup> training_groups(const Dataset& ds) {
  std::vector<QueryGroup> out;
  for (const auto& [q, g] : ds.groups()) {
    QueryGroup qg;
    qg.query_id = q;
    for (const auto& in : g) {
      qg.x.push_back(in.features);
      qg.y.push_back(in.label);
      qg.doc_ids.push_back(in.doc_id);
    }
    out.push_back(std::move(qg));
  }
  return out;
}

/// At least one query must hold both a relevant and a non-relevant document.
inline void require_trainable(const std::vector<QueryGroup>& groups) {
  for (const auto& g : groups) {
    bool pos = false;
    bool neg = false;
    for (int y : g.y) (y > 0 ? pos : neg) = true;
    if (pos && neg) return;
  }
  throw TrainingError("degenerate dataset: no query has both relevant and non-relevant documents");
}

/// Labels of `g` in the order induced by `scores` (descending, ties by doc_id).
template <typename Scores>
std::vector<std::size_t> rank_order(const QueryGroup& g, const Scores& scores) {
  std::vector<std::size_t> order(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return g.doc_ids[a] < g.doc_ids[b];
  });
  return order;
}

template <typename Scores>
std::vector<int> ranked_labels(const QueryGroup& g, const Scores& scores) {
  std::vector<int> out;
  for (auto i : rank_order(g, scores)) out.push_back(g.y[i]);
  return out;
}

}  // namespace cof
