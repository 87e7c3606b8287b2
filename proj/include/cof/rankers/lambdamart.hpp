#pragma once

#include <span>
#include <vector>

#include "cof/rankers/lambda.hpp"
#include "cof/rankers/mart.hpp"

namespace cof {

/// Newton step for a leaf: Σλ / Σ(λ-derivative), 0 when the curvature vanishes.
inline double newton_leaf(std::span<const std::size_t> rows, std::span<const double> lambdas,
                          std::span<const double> hess) {
  double num = 0.0;
  double den = 0.0;
  for (auto i : rows) {
    num += lambdas[i];
    den += hess[i];
  }
  return den > 0.0 ? num / den : 0.0;
}

/// Boosted trees driven by lambda gradients. Trees fit the lambdas by least
/// squares; each leaf takes the Newton step Σλ / Σ(λ-derivative).
inline RankingModel train_lambdamart(const Dataset& ds, const TrainConfig& cfg, TrainLog* log = nullptr) {
  constexpr RankerKind kind = RankerKind::LambdaMART;
  cfg.validate(kind);
  const auto groups = training_groups(ds);
  require_trainable(groups);
  const FeatureMask mask = cfg.mask.value_or(ds.mask());
  const int rounds = cfg.rounds_for(kind);
  const double lr = cfg.learning_rate_for(kind);
  const auto rows = detail::flatten(groups);
  const auto n = rows.x.size();

  TreeEnsemble ens;
  std::vector<double> f(n, 0.0);
  std::vector<double> lambdas(n), hess(n);
  const TreeBuilder builder(rows.x, mask, cfg.leaves, cfg.min_leaf);
  for (int t = 0; t < rounds; ++t) {
    for (std::size_t q = 0; q < groups.size(); ++q) {
      const auto b = rows.offset[q];
      const auto lg = lambda_gradients(groups[q], std::span<const double>(f).subspan(b, groups[q].size()), cfg.metric);
      for (std::size_t d = 0; d < groups[q].size(); ++d) {
        lambdas[b + d] = -lg.grad[d];
        hess[b + d] = lg.hess[d];
      }
    }
    auto tree = builder.build(lambdas, [&](std::span<const std::size_t> leaf) { return lr * newton_leaf(leaf, lambdas, hess); });
    for (std::size_t i = 0; i < n; ++i) f[i] += tree.predict(rows.x[i]);
    ens.trees.push_back(std::move(tree));
    if (log) {
      double perf = 0.0;
      for (std::size_t q = 0; q < groups.size(); ++q)
        perf += cfg.metric.evaluate(
            ranked_labels(groups[q], std::span<const double>(f).subspan(rows.offset[q], groups[q].size())));
      log->stage_loss.push_back(perf / static_cast<double>(groups.size()));
    }
  }
  return detail::tree_model(kind, mask, cfg, rounds, lr, std::move(ens));
}

}  // namespace cof
