#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cof/random.hpp"
#include "cof/rankers/model.hpp"
#include "cof/rankers/training_data.hpp"

namespace cof {

/// Zero linear weights; hidden units start uniform in [-0.1, 0.1).
inline NeuralScorer init_scorer(int hidden, std::uint64_t seed) {
  NeuralScorer n;
  if (hidden <= 0) return n;
  Rng rng(seed);
  for (int h = 0; h < hidden; ++h) {
    FeatureVector in{};
    for (auto& w : in) w = uniform_real(rng, -0.1, 0.1);
    n.hidden_in.push_back(in);
    n.hidden_bias.push_back(0.0);
    n.hidden_out.push_back(uniform_real(rng, -0.1, 0.1));
  }
  return n;
}

/// Flat parameter layout: linear [w_0..w_11, bias]; hidden, per unit
/// [out, in_bias, in_0..in_11] followed by the output bias.
inline std::vector<double> get_params(const NeuralScorer& n) {
  std::vector<double> p;
  p.reserve(n.num_params());
  if (n.hidden() == 0) {
    p.assign(n.weights.begin(), n.weights.end());
  } else {
    for (std::size_t h = 0; h < n.hidden(); ++h) {
      p.push_back(n.hidden_out[h]);
      p.push_back(n.hidden_bias[h]);
      p.insert(p.end(), n.hidden_in[h].begin(), n.hidden_in[h].end());
    }
  }
  p.push_back(n.bias);
  return p;
}

inline void set_params(NeuralScorer& n, std::span<const double> p) {
  std::size_t k = 0;
  if (n.hidden() == 0) {
    for (auto& w : n.weights) w = p[k++];
  } else {
    for (std::size_t h = 0; h < n.hidden(); ++h) {
      n.hidden_out[h] = p[k++];
      n.hidden_bias[h] = p[k++];
      for (auto& w : n.hidden_in[h]) w = p[k++];
    }
  }
  n.bias = p[k];
}

inline std::vector<double> group_scores(const NeuralScorer& n, const FeatureMask& mask, const QueryGroup& g) {
  std::vector<double> s;
  s.reserve(g.size());
  for (const auto& x : g.x) s.push_back(score(n, mask, x));
  return s;
}

/// Σ_docs dscore[d] * ∂s_d/∂θ in the flat layout.
inline std::vector<double> backprop(const NeuralScorer& n, const FeatureMask& mask, const QueryGroup& g,
                                    std::span<const double> dscore) {
  std::vector<double> grad(n.num_params(), 0.0);
  for (std::size_t d = 0; d < g.size(); ++d) {
    const double ds = dscore[d];
    if (ds == 0.0) continue;
    const auto& x = g.x[d];
    if (n.hidden() == 0) {
      for (std::size_t f = 0; f < kFeatureCount; ++f)
        if (mask[f]) grad[f] += ds * x[f];
    } else {
      for (std::size_t h = 0; h < n.hidden(); ++h) {
        double a = n.hidden_bias[h];
        for (std::size_t f = 0; f < kFeatureCount; ++f)
          if (mask[f]) a += n.hidden_in[h][f] * x[f];
        const double t = std::tanh(a);
        const std::size_t base = h * (kFeatureCount + 2);
        grad[base] += ds * t;
        const double da = ds * n.hidden_out[h] * (1.0 - t * t);
        grad[base + 1] += da;
        for (std::size_t f = 0; f < kFeatureCount; ++f)
          if (mask[f]) grad[base + 2 + f] += da * x[f];
      }
    }
    grad.back() += ds;
  }
  return grad;
}

inline std::vector<double> softmax(std::span<const double> v) {
  std::vector<double> out(v.size());
  if (v.empty()) return out;
  const double mx = *std::max_element(v.begin(), v.end());
  double z = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) z += (out[i] = std::exp(v[i] - mx));
  for (auto& o : out) o /= z;
  return out;
}

/// Top-one probabilities of the labels, the ListNet target.
inline std::vector<double> listnet_target(const QueryGroup& g) {
  std::vector<double> y(g.y.begin(), g.y.end());
  return softmax(y);
}

/// Cross entropy between the label and score top-one distributions.
inline double listnet_loss(const NeuralScorer& n, const FeatureMask& mask, const QueryGroup& g) {
  const auto s = group_scores(n, mask, g);
  const auto target = listnet_target(g);
  const double mx = *std::max_element(s.begin(), s.end());
  double z = 0.0;
  for (double v : s) z += std::exp(v - mx);
  const double log_z = mx + std::log(z);
  double loss = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) loss -= target[i] * (s[i] - log_z);
  return loss;
}

inline std::vector<double> listnet_gradient(const NeuralScorer& n, const FeatureMask& mask, const QueryGroup& g) {
  const auto s = group_scores(n, mask, g);
  const auto p = softmax(s);
  const auto target = listnet_target(g);
  std::vector<double> ds(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) ds[i] = p[i] - target[i];
  return backprop(n, mask, g, ds);
}

}  // namespace cof
