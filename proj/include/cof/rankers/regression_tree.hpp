#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "cof/features.hpp"
#include "cof/rankers/model.hpp"

namespace cof {

/// Best-first least-squares tree growth. Splits pick the largest reduction in
/// squared error of `targets`; ties keep the lowest feature, then the lowest
/// threshold, then the oldest leaf. Leaf outputs come from `leaf_value`.
class TreeBuilder {
 public:
  using LeafValue = std::function<double(std::span<const std::size_t>)>;

  TreeBuilder(std::span<const FeatureVector> x, FeatureMask mask, int max_leaves, int min_leaf)
      : x_(x), mask_(mask), max_leaves_(max_leaves), min_leaf_(min_leaf) {}

  [[nodiscard]] RegressionTree build(std::span<const double> targets, const LeafValue& leaf_value) const {
    struct Leaf {
      std::size_t node;
      std::vector<std::size_t> rows;
      Split split;
    };
    RegressionTree tree;
    std::vector<Leaf> open;
    std::vector<std::size_t> all(x_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    tree.nodes.push_back({});
    open.push_back({0, all, best_split(all, targets)});
    int leaves = 1;
    while (leaves < max_leaves_) {
      std::size_t pick = open.size();
      for (std::size_t i = 0; i < open.size(); ++i) {
        if (!open[i].split.valid()) continue;
        if (pick == open.size() || open[i].split.gain > open[pick].split.gain) pick = i;
      }
      if (pick == open.size()) break;
      Leaf leaf = std::move(open[pick]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
      std::vector<std::size_t> lrows, rrows;
      for (auto r : leaf.rows) (x_[r][leaf.split.feature] <= leaf.split.threshold ? lrows : rrows).push_back(r);
      const auto l = tree.nodes.size();
      tree.nodes.push_back({});
      tree.nodes.push_back({});
      auto& parent = tree.nodes[leaf.node];
      parent.feature = static_cast<int>(leaf.split.feature);
      parent.threshold = leaf.split.threshold;
      parent.left = static_cast<int>(l);
      parent.right = static_cast<int>(l + 1);
      auto ls = best_split(lrows, targets);
      auto rs = best_split(rrows, targets);
      open.push_back({l, std::move(lrows), ls});
      open.push_back({l + 1, std::move(rrows), rs});
      ++leaves;
    }
    for (const auto& leaf : open) tree.nodes[leaf.node].value = leaf_value(leaf.rows);
    return tree;
  }

  static constexpr double kMinGain = 1e-12;

 private:
  struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
    bool found = false;
    [[nodiscard]] bool valid() const { return found && gain > kMinGain; }
  };

  [[nodiscard]] Split best_split(const std::vector<std::size_t>& rows, std::span<const double> targets) const {
    Split best;
    const auto n = rows.size();
    if (n < 2 * static_cast<std::size_t>(min_leaf_)) return best;
    double total = 0.0;
    for (auto r : rows) total += targets[r];
    const double parent = total * total / static_cast<double>(n);
    std::vector<std::size_t> sorted = rows;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      if (!mask_[f]) continue;
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](std::size_t a, std::size_t b) { return x_[a][f] < x_[b][f]; });
      double left = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left += targets[sorted[i]];
        const double a = x_[sorted[i]][f];
        const double b = x_[sorted[i + 1]][f];
        if (!(a < b)) continue;
        const auto nl = i + 1;
        const auto nr = n - nl;
        if (nl < static_cast<std::size_t>(min_leaf_) || nr < static_cast<std::size_t>(min_leaf_)) continue;
        const double right = total - left;
        const double gain =
            left * left / static_cast<double>(nl) + right * right / static_cast<double>(nr) - parent;
        if (!best.found || gain > best.gain) {
          double thr = a + (b - a) / 2.0;
          if (!(thr < b)) thr = a;
          best = {f, thr, gain, true};
        }
      }
    }
    return best;
  }

  std::span<const FeatureVector> x_;
  FeatureMask mask_;
  int max_leaves_;
  int min_leaf_;
};

}  // namespace cof
