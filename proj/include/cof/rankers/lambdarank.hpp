#pragma once

#include <cmath>
#include <vector>

#include "cof/rankers/lambda.hpp"
#include "cof/rankers/model.hpp"
#include "cof/rankers/neural.hpp"
#include "cof/rankers/train_log.hpp"
#include "cof/rankers/training_data.hpp"

namespace cof {

/// Parameter gradient of the lambda cost at the current ranking.
inline std::vector<double> lambdarank_gradient(const NeuralScorer& n, const FeatureMask& mask, const QueryGroup& g,
                                               const MetricSpec& metric) {
  const auto s = group_scores(n, mask, g);
  const auto lg = lambda_gradients(g, s, metric);
  return backprop(n, mask, g, lg.grad);
}

/// Lambda cost with the pair weights frozen (what the gradient differentiates).
inline double lambdarank_cost(const NeuralScorer& n, const FeatureMask& mask, const QueryGroup& g,
                              const std::vector<PairWeight>& pairs) {
  const auto s = group_scores(n, mask, g);
  return lambda_pair_cost(s, pairs);
}

inline RankingModel train_lambdarank(const Dataset& ds, const TrainConfig& cfg, TrainLog* log = nullptr) {
  constexpr RankerKind kind = RankerKind::LambdaRank;
  cfg.validate(kind);
  const auto groups = training_groups(ds);
  require_trainable(groups);
  const FeatureMask mask = cfg.mask.value_or(ds.mask());
  const int epochs = cfg.rounds_for(kind);
  const double lr = cfg.learning_rate_for(kind);

  NeuralScorer net = init_scorer(cfg.hidden, cfg.seed);
  auto params = get_params(net);
  for (int e = 0; e < epochs; ++e) {
    double epoch_cost = 0.0;
    for (const auto& g : groups) {
      const auto s = group_scores(net, mask, g);
      const auto lg = lambda_gradients(g, s, cfg.metric);
      epoch_cost += lambda_pair_cost(s, lg.pairs);
      const auto grad = backprop(net, mask, g, lg.grad);
      for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grad[i];
      set_params(net, params);
    }
    if (!std::isfinite(epoch_cost)) throw DivergenceError(static_cast<std::size_t>(e));
    if (log) log->stage_loss.push_back(epoch_cost);
  }

  RankingModel model;
  model.kind = kind;
  model.mask = mask;
  model.meta = {epochs, epochs, lr, 0, cfg.seed, cfg.metric};
  model.params = std::move(net);
  return model;
}

}  // namespace cof
