#pragma once

#include <vector>

namespace cof {

/// Per-round training objective: squared error for MART, summed epoch loss
/// for ListNet and LambdaRank, training metric for AdaRank and LambdaMART.
struct TrainLog {
  std::vector<double> stage_loss;
};

}  // namespace cof
