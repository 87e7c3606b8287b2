#pragma once

#include <numeric>
#include <span>
#include <vector>

#include "cof/rankers/model.hpp"
#include "cof/rankers/regression_tree.hpp"
#include "cof/rankers/train_log.hpp"
#include "cof/rankers/training_data.hpp"

namespace cof {

namespace detail {

struct FlatRows {
  std::vector<FeatureVector> x;
  std::vector<double> y;
  // [offset[q], offset[q + 1]) are the rows of query q
  std::vector<std::size_t> offset;
};

inline FlatRows flatten(const std::vector<QueryGroup>& groups) {
  FlatRows r;
  r.offset.push_back(0);
  for (const auto& g : groups) {
    r.x.insert(r.x.end(), g.x.begin(), g.x.end());
    for (int y : g.y) r.y.push_back(y);
    r.offset.push_back(r.x.size());
  }
  return r;
}

inline RankingModel tree_model(RankerKind kind, const FeatureMask& mask, const TrainConfig& cfg, int rounds, double lr,
                               TreeEnsemble ens) {
  RankingModel model;
  model.kind = kind;
  model.mask = mask;
  model.meta = {rounds, static_cast<int>(ens.trees.size()), lr, cfg.leaves, cfg.seed, cfg.metric};
  model.params = std::move(ens);
  return model;
}

}  // namespace detail

/// Pointwise least-squares gradient boosting. Starts from the mean label;
/// each tree fits the residuals and its leaves hold shrunken mean residuals.
inline RankingModel train_mart(const Dataset& ds, const TrainConfig& cfg, TrainLog* log = nullptr) {
  constexpr RankerKind kind = RankerKind::MART;
  cfg.validate(kind);
  const auto groups = training_groups(ds);
  require_trainable(groups);
  const FeatureMask mask = cfg.mask.value_or(ds.mask());
  const int rounds = cfg.rounds_for(kind);
  const double lr = cfg.learning_rate_for(kind);
  const auto rows = detail::flatten(groups);
  const auto n = rows.x.size();

  TreeEnsemble ens;
  ens.base = std::accumulate(rows.y.begin(), rows.y.end(), 0.0) / static_cast<double>(n);
  std::vector<double> f(n, ens.base);
  std::vector<double> resid(n);
  const TreeBuilder builder(rows.x, mask, cfg.leaves, cfg.min_leaf);
  for (int t = 0; t < rounds; ++t) {
    for (std::size_t i = 0; i < n; ++i) resid[i] = rows.y[i] - f[i];
    auto tree = builder.build(resid, [&](std::span<const std::size_t> leaf) {
      double s = 0.0;
      for (auto i : leaf) s += resid[i];
      return lr * s / static_cast<double>(leaf.size());
    });
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] += tree.predict(rows.x[i]);
      sse += (rows.y[i] - f[i]) * (rows.y[i] - f[i]);
    }
    ens.trees.push_back(std::move(tree));
    if (log) log->stage_loss.push_back(sse);
  }
  return detail::tree_model(kind, mask, cfg, rounds, lr, std::move(ens));
}

}  // namespace cof
