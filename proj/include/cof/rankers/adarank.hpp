#pragma once

#include <cmath>
#include <vector>

#include "cof/rankers/model.hpp"
#include "cof/rankers/train_log.hpp"
#include "cof/rankers/training_data.hpp"

namespace cof {

namespace detail {

inline double weak_metric(const QueryGroup& g, std::size_t feature, int sign, const MetricSpec& metric) {
  std::vector<double> s;
  s.reserve(g.size());
  for (const auto& x : g.x) s.push_back(sign * x[feature]);
  return metric.evaluate(ranked_labels(g, s));
}

}  // namespace detail

/// Listwise boosting over single-feature weak rankers (both polarities).
/// Stops after `rounds` or as soon as a round fails to raise the training
/// metric of the combined ranker; that round is discarded.
inline RankingModel train_adarank(const Dataset& ds, const TrainConfig& cfg, TrainLog* log = nullptr) {
  constexpr RankerKind kind = RankerKind::AdaRank;
  cfg.validate(kind);
  const auto groups = training_groups(ds);
  require_trainable(groups);
  const FeatureMask mask = cfg.mask.value_or(ds.mask());
  if (mask.count() == 0) throw TrainingError("every feature is masked");
  const auto m = groups.size();
  const int rounds = cfg.rounds_for(kind);

  // Per-query metric of every weak ranker; index = 2 * feature + (sign < 0).
  std::vector<std::vector<double>> weak(2 * kFeatureCount, std::vector<double>(m, 0.0));
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    if (!mask[f]) continue;
    for (std::size_t q = 0; q < m; ++q) {
      weak[2 * f][q] = detail::weak_metric(groups[q], f, 1, cfg.metric);
      weak[2 * f + 1][q] = detail::weak_metric(groups[q], f, -1, cfg.metric);
    }
  }

  WeakEnsemble ens;
  std::vector<double> dist(m, 1.0 / static_cast<double>(m));
  std::vector<std::vector<double>> scores(m);
  for (std::size_t q = 0; q < m; ++q) scores[q].assign(groups[q].size(), 0.0);
  double best_perf = -1.0;
  int done = 0;
  for (int t = 0; t < rounds; ++t) {
    std::size_t pick = 0;
    double pick_perf = -1.0;
    for (std::size_t c = 0; c < 2 * kFeatureCount; ++c) {
      if (!mask[c / 2]) continue;
      double perf = 0.0;
      for (std::size_t q = 0; q < m; ++q) perf += dist[q] * weak[c][q];
      if (perf > pick_perf) {
        pick_perf = perf;
        pick = c;
      }
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      num += dist[q] * (1.0 + weak[pick][q]);
      den += dist[q] * (1.0 - weak[pick][q]);
    }
    constexpr double kEps = 1e-12;
    const double alpha = 0.5 * std::log((num + kEps) / (den + kEps));
    const WeakRanker wr{pick / 2, pick % 2 == 0 ? 1 : -1, alpha};

    std::vector<std::vector<double>> next = scores;
    std::vector<double> perf_q(m);
    double perf = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      for (std::size_t d = 0; d < groups[q].size(); ++d) next[q][d] += wr.alpha * wr.sign * groups[q].x[d][wr.feature];
      perf_q[q] = cfg.metric.evaluate(ranked_labels(groups[q], next[q]));
      perf += perf_q[q];
    }
    perf /= static_cast<double>(m);
    if (perf <= best_perf) break;
    best_perf = perf;
    scores = std::move(next);
    ens.rankers.push_back(wr);
    ++done;
    if (log) log->stage_loss.push_back(perf);

    double z = 0.0;
    for (std::size_t q = 0; q < m; ++q) z += (dist[q] = std::exp(-perf_q[q]));
    for (auto& d : dist) d /= z;
  }

  RankingModel model;
  model.kind = kind;
  model.mask = mask;
  model.meta = {rounds, done, 0.0, 0, cfg.seed, cfg.metric};
  model.params = std::move(ens);
  return model;
}

}  // namespace cof
