#pragma once

#include <cmath>
#include <vector>

#include "cof/rankers/model.hpp"
#include "cof/rankers/neural.hpp"
#include "cof/rankers/train_log.hpp"
#include "cof/rankers/training_data.hpp"

namespace cof {

/// Gradient descent on the top-one cross entropy, one update per query in
/// ascending query order.
inline RankingModel train_listnet(const Dataset& ds, const TrainConfig& cfg, TrainLog* log = nullptr) {
  constexpr RankerKind kind = RankerKind::ListNet;
  cfg.validate(kind);
  const auto groups = training_groups(ds);
  require_trainable(groups);
  const FeatureMask mask = cfg.mask.value_or(ds.mask());
  const int epochs = cfg.rounds_for(kind);
  const double lr = cfg.learning_rate_for(kind);

  NeuralScorer net = init_scorer(cfg.hidden, cfg.seed);
  auto params = get_params(net);
  for (int e = 0; e < epochs; ++e) {
    double epoch_loss = 0.0;
    for (const auto& g : groups) {
      epoch_loss += listnet_loss(net, mask, g);
      const auto grad = listnet_gradient(net, mask, g);
      for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grad[i];
      set_params(net, params);
    }
    if (!std::isfinite(epoch_loss)) throw DivergenceError(static_cast<std::size_t>(e));
    if (log) log->stage_loss.push_back(epoch_loss);
  }

  RankingModel model;
  model.kind = kind;
  model.mask = mask;
  model.meta = {epochs, epochs, lr, 0, cfg.seed, cfg.metric};
  model.params = std::move(net);
  return model;
}

}  // namespace cof
