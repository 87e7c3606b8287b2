#pragma once

#include "cof/rankers/adarank.hpp"
#include "cof/rankers/lambdamart.hpp"
#include "cof/rankers/lambdarank.hpp"
#include "cof/rankers/listnet.hpp"
#include "cof/rankers/mart.hpp"
#include "cof/rankers/model.hpp"

namespace cof {

inline RankingModel train(RankerKind kind, const Dataset& ds, const TrainConfig& cfg, TrainLog* log = nullptr) {
  switch (kind) {
    case RankerKind::AdaRank: return train_adarank(ds, cfg, log);
    case RankerKind::ListNet: return train_listnet(ds, cfg, log);
    case RankerKind::MART: return train_mart(ds, cfg, log);
    case RankerKind::LambdaRank: return train_lambdarank(ds, cfg, log);
    case RankerKind::LambdaMART: return train_lambdamart(ds, cfg, log);
  }
  throw TrainingError("unknown ranker");
}

}  // namespace cof
