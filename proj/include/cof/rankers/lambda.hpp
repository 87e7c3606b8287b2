#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "cof/metrics.hpp"
#include "cof/rankers/training_data.hpp"

namespace cof {

struct PairWeight {
  std::size_t better = 0;
  std::size_t worse = 0;
  // |Δmetric| of swapping the two documents in the current ranking
  double weight = 0.0;
};

/// Per-document derivatives of the |Δmetric|-weighted pairwise logistic cost
/// C = Σ w log(1 + exp(-(s_better - s_worse))), weights frozen at the current
/// ranking.
struct LambdaGradients {
  std::vector<double> grad;  // dC/ds
  std::vector<double> hess;  // Σ w ρ(1-ρ)
  std::vector<PairWeight> pairs;
};

/// ρ = 1 / (1 + exp(s_better - s_worse)), the pairwise lambda magnitude per
/// unit weight.
inline double pair_rho(double s_better, double s_worse) {
  const double d = s_better - s_worse;
  if (d >= 0) {
    const double e = std::exp(-d);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(d));
}

/// |metric change| when the documents at 0-based positions a and b swap.
inline double swap_delta(const MetricSpec& metric, std::span<const int> ranked, std::size_t a, std::size_t b,
                         double idcg, int y_max) {
  if (metric.kind == MetricKind::NDCG) {
    if (idcg <= 0.0) return 0.0;
    auto disc = [&](std::size_t p) {
      return p < static_cast<std::size_t>(metric.k) ? 1.0 / std::log2(static_cast<double>(p) + 2.0) : 0.0;
    };
    return std::abs((std::exp2(ranked[a]) - std::exp2(ranked[b])) * (disc(a) - disc(b))) / idcg;
  }
  std::vector<int> swapped(ranked.begin(), ranked.end());
  std::swap(swapped[a], swapped[b]);
  return std::abs(metric.evaluate(swapped, y_max) - metric.evaluate(ranked, y_max));
}

inline LambdaGradients lambda_gradients(const QueryGroup& g, std::span<const double> scores, const MetricSpec& metric,
                                        int y_max = 1) {
  const auto n = g.size();
  LambdaGradients out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), {}};
  const auto order = rank_order(g, scores);
  std::vector<std::size_t> pos(n);
  std::vector<int> ranked(n);
  for (std::size_t p = 0; p < n; ++p) {
    pos[order[p]] = p;
    ranked[p] = g.y[order[p]];
  }
  std::vector<int> ideal = ranked;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg_at_k(ideal, metric.k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (g.y[i] <= g.y[j]) continue;
      const double w = swap_delta(metric, ranked, pos[i], pos[j], idcg, y_max);
      out.pairs.push_back({i, j, w});
      if (w == 0.0) continue;
      const double rho = pair_rho(scores[i], scores[j]);
      out.grad[i] -= w * rho;
      out.grad[j] += w * rho;
      out.hess[i] += w * rho * (1.0 - rho);
      out.hess[j] += w * rho * (1.0 - rho);
    }
  }
  return out;
}

/// The cost whose gradient the lambdas are, for fixed pair weights.
inline double lambda_pair_cost(std::span<const double> scores, std::span<const PairWeight> pairs) {
  double c = 0.0;
  for (const auto& p : pairs) {
    const double d = scores[p.better] - scores[p.worse];
    // log(1 + exp(-d)), stable for both signs
    c += p.weight * (d > 0 ? std::log1p(std::exp(-d)) : -d + std::log1p(std::exp(d)));
  }
  return c;
}

}  // namespace cof
