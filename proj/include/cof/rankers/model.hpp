#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cof/error.hpp"
#include "cof/features.hpp"
#include "cof/letor_io.hpp"
#include "cof/metrics.hpp"

namespace cof {

enum class RankerKind { AdaRank, ListNet, MART, LambdaRank, LambdaMART };

inline constexpr std::array<RankerKind, 5> kAllRankers = {RankerKind::AdaRank, RankerKind::ListNet, RankerKind::MART,
                                                          RankerKind::LambdaMART, RankerKind::LambdaRank};

inline std::string_view ranker_name(RankerKind k) {
  switch (k) {
    case RankerKind::AdaRank: return "AdaRank";
    case RankerKind::ListNet: return "ListNet";
    case RankerKind::MART: return "MART";
    case RankerKind::LambdaRank: return "LambdaRank";
    case RankerKind::LambdaMART: return "LambdaMART";
  }
  return "?";
}

inline RankerKind parse_ranker(std::string_view s) {
  std::string lower = detail::to_lower(s);
  for (auto k : kAllRankers)
    if (lower == detail::to_lower(ranker_name(k))) return k;
  throw ValidationError("unknown algorithm '" + std::string(s) + "'");
}

inline bool is_tree_ranker(RankerKind k) { return k == RankerKind::MART || k == RankerKind::LambdaMART; }

/// Unset counts and rates take the per-algorithm defaults: 300 trees at 0.1,
/// 500 AdaRank rounds, 1500 ListNet/LambdaRank epochs at 1e-3.
struct TrainConfig {
  std::optional<int> rounds;
  std::optional<double> learning_rate;
  int leaves = 10;
  int min_leaf = 1;
  MetricSpec metric{MetricKind::NDCG, 10};
  std::uint64_t seed = 7;
  // hidden units of the ListNet/LambdaRank scorer; 0 = linear
  int hidden = 0;
  std::optional<FeatureMask> mask;

  [[nodiscard]] int rounds_for(RankerKind k) const {
    if (rounds) return *rounds;
    switch (k) {
      case RankerKind::AdaRank: return 500;
      case RankerKind::ListNet:
      case RankerKind::LambdaRank: return 1500;
      case RankerKind::MART:
      case RankerKind::LambdaMART: return 300;
    }
    return 0;
  }
  [[nodiscard]] double learning_rate_for(RankerKind k) const {
    if (learning_rate) return *learning_rate;
    return is_tree_ranker(k) ? 0.1 : 1e-3;
  }

  void validate(RankerKind k) const {
    if (rounds_for(k) <= 0) throw TrainingError("rounds must be positive");
    if (!(learning_rate_for(k) > 0.0)) throw TrainingError("learning rate must be positive");
    if (leaves < 1 || min_leaf < 1) throw TrainingError("leaves and min_leaf must be positive");
    if (hidden < 0) throw TrainingError("hidden width must be nonnegative");
    if (metric.k < 1 || metric.k > kMaxCutoff) throw TrainingError("metric cutoff must lie in 1..10");
  }
};

/// Single-feature scorer `sign * x[feature]` with its boosting weight.
struct WeakRanker {
  std::size_t feature = 0;
  int sign = 1;
  double alpha = 0.0;
  bool operator==(const WeakRanker&) const = default;
};

struct WeakEnsemble {
  std::vector<WeakRanker> rankers;
  bool operator==(const WeakEnsemble&) const = default;
};

/// bias + w.x when linear; bias + Σ_h out[h] * tanh(in[h].x + in_bias[h]) otherwise.
struct NeuralScorer {
  FeatureVector weights{};
  double bias = 0.0;
  std::vector<FeatureVector> hidden_in;
  std::vector<double> hidden_bias;
  std::vector<double> hidden_out;

  [[nodiscard]] std::size_t hidden() const { return hidden_in.size(); }
  /// Number of trainable parameters.
  [[nodiscard]] std::size_t num_params() const {
    return hidden() == 0 ? kFeatureCount + 1 : hidden() * (kFeatureCount + 2) + 1;
  }
  bool operator==(const NeuralScorer&) const = default;
};

struct TreeNode {
  // -1 marks a leaf
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  bool operator==(const TreeNode&) const = default;
};

/// Binary regression tree; x[feature] <= threshold goes left.
struct RegressionTree {
  std::vector<TreeNode> nodes;

  [[nodiscard]] double predict(const FeatureVector& x) const {
    if (nodes.empty()) return 0.0;
    std::size_t i = 0;
    while (nodes[i].feature >= 0)
      i = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold ? nodes[i].left
                                                                                                        : nodes[i].right);
    return nodes[i].value;
  }
  [[nodiscard]] std::size_t num_leaves() const {
    std::size_t n = 0;
    for (const auto& nd : nodes) n += nd.feature < 0 ? 1 : 0;
    return n;
  }
  bool operator==(const RegressionTree&) const = default;
};

struct TreeEnsemble {
  double base = 0.0;
  // leaf values already include shrinkage
  std::vector<RegressionTree> trees;
  bool operator==(const TreeEnsemble&) const = default;
};

struct TrainingMeta {
  int rounds = 0;
  int rounds_done = 0;
  double learning_rate = 0.0;
  int leaves = 0;
  std::uint64_t seed = 0;
  MetricSpec metric;
  bool operator==(const TrainingMeta&) const = default;
};

struct RankingModel {
  RankerKind kind = RankerKind::MART;
  FeatureMask mask = FeatureMask::all();
  TrainingMeta meta;
  std::variant<WeakEnsemble, NeuralScorer, TreeEnsemble> params;

  bool operator==(const RankingModel&) const = default;
};

inline double score(const NeuralScorer& n, const FeatureMask& mask, const FeatureVector& x) {
  double s = n.bias;
  if (n.hidden() == 0) {
    for (std::size_t f = 0; f < kFeatureCount; ++f)
      if (mask[f]) s += n.weights[f] * x[f];
    return s;
  }
  for (std::size_t h = 0; h < n.hidden(); ++h) {
    double a = n.hidden_bias[h];
    for (std::size_t f = 0; f < kFeatureCount; ++f)
      if (mask[f]) a += n.hidden_in[h][f] * x[f];
    s += n.hidden_out[h] * std::tanh(a);
  }
  return s;
}

inline double score(const RankingModel& m, const FeatureVector& x) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, WeakEnsemble>) {
          double s = 0.0;
          for (const auto& w : p.rankers) s += w.alpha * w.sign * x[w.feature];
          return s;
        } else if constexpr (std::is_same_v<T, NeuralScorer>) {
          return score(p, m.mask, x);
        } else {
          double s = p.base;
          for (const auto& t : p.trees) s += t.predict(x);
          return s;
        }
      },
      m.params);
}

inline RankedList rank(const RankingModel& m, const std::vector<Instance>& group) {
  std::vector<RankedList::Entry> entries;
  entries.reserve(group.size());
  int qid = group.empty() ? 0 : group.front().query_id;
  for (const auto& in : group) entries.push_back({in.doc_id, score(m, in.features), in.label});
  return RankedList::from_entries(qid, std::move(entries));
}

inline std::vector<RankedList> rank_all(const RankingModel& m, const Dataset& ds) {
  std::vector<RankedList> out;
  for (const auto& [q, g] : ds.groups()) out.push_back(rank(m, g));
  return out;
}

inline MetricReport evaluate(const RankingModel& m, const Dataset& ds, std::string split) {
  auto lists = rank_all(m, ds);
  return report(lists, std::move(split));
}

// ---- serialization -------------------------------------------------------

inline constexpr std::string_view kModelMagic = "# cof-model v1";

namespace detail {
inline std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline void save(const RankingModel& m, std::ostream& out) {
  using detail::exact;
  out << kModelMagic << '\n';
  out << "kind " << ranker_name(m.kind) << '\n';
  out << "feature_mask " << m.mask.masked_list() << '\n';
  out << "seed " << m.meta.seed << '\n';
  out << "metric " << m.meta.metric.name() << '\n';
  out << "rounds " << m.meta.rounds << '\n';
  out << "rounds_done " << m.meta.rounds_done << '\n';
  out << "learning_rate " << exact(m.meta.learning_rate) << '\n';
  out << "leaves " << m.meta.leaves << '\n';
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, WeakEnsemble>) {
          out << "weak_rankers " << p.rankers.size() << '\n';
          for (const auto& w : p.rankers) out << (w.feature + 1) << ' ' << w.sign << ' ' << exact(w.alpha) << '\n';
        } else if constexpr (std::is_same_v<T, NeuralScorer>) {
          out << "hidden " << p.hidden() << '\n';
          out << "bias " << exact(p.bias) << '\n';
          out << "weights";
          for (double w : p.weights) out << ' ' << exact(w);
          out << '\n';
          for (std::size_t h = 0; h < p.hidden(); ++h) {
            out << "unit " << exact(p.hidden_out[h]) << ' ' << exact(p.hidden_bias[h]);
            for (double w : p.hidden_in[h]) out << ' ' << exact(w);
            out << '\n';
          }
        } else {
          out << "base " << exact(p.base) << '\n';
          out << "trees " << p.trees.size() << '\n';
          for (const auto& t : p.trees) {
            out << "tree " << t.nodes.size() << '\n';
            for (const auto& n : t.nodes)
              out << n.feature << ' ' << exact(n.threshold) << ' ' << n.left << ' ' << n.right << ' ' << exact(n.value)
                  << '\n';
          }
        }
      },
      m.params);
  out << "end\n";
  if (!out) throw Error("model write failed");
}

inline std::string to_string(const RankingModel& m) {
  std::ostringstream ss;
  save(m, ss);
  return ss.str();
}

namespace detail {

class ModelReader {
 public:
  explicit ModelReader(std::istream& in) : in_(in) {}

  std::istringstream line(std::string_view expected_key) {
    std::string l;
    if (!std::getline(in_, l)) throw ModelLoadError("truncated model file: expected '" + std::string(expected_key) + "'");
    ++lineno_;
    std::istringstream ss(l);
    std::string key;
    ss >> key;
    if (key != expected_key)
      throw ModelLoadError("model line " + std::to_string(lineno_) + ": expected '" + std::string(expected_key) +
                           "', got '" + key + "'");
    return ss;
  }

  template <typename T>
  T value(std::string_view key) {
    auto ss = line(key);
    return read<T>(ss, key);
  }

  template <typename T>
  T read(std::istringstream& ss, std::string_view what) {
    if constexpr (std::is_same_v<T, double>) {
      std::string tok;
      if (!(ss >> tok)) fail(what);
      char* end = nullptr;
      double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) fail(what);
      return v;
    } else {
      T v{};
      if (!(ss >> v)) fail(what);
      return v;
    }
  }

  std::istringstream raw_line() {
    std::string l;
    if (!std::getline(in_, l)) throw ModelLoadError("truncated model file");
    ++lineno_;
    return std::istringstream(l);
  }

  [[noreturn]] void fail(std::string_view what) const {
    throw ModelLoadError("model line " + std::to_string(lineno_) + ": bad value for '" + std::string(what) + "'");
  }

  std::size_t lineno() const { return lineno_; }

 private:
  std::istream& in_;
  std::size_t lineno_ = 0;
};

}  // namespace detail

/// Loads a model; when `expected` is given, a different kind is an error.
inline RankingModel load(std::istream& in, std::optional<RankerKind> expected = std::nullopt) {
  std::string magic;
  if (!std::getline(in, magic)) throw ModelLoadError("empty model file");
  if (!magic.empty() && magic.back() == '\r') magic.pop_back();
  if (magic != kModelMagic) throw ModelLoadError("not a cof model (bad magic line)");
  detail::ModelReader r(in);
  RankingModel m;
  try {
    m.kind = parse_ranker(r.value<std::string>("kind"));
    m.mask = FeatureMask::from_masked_list(r.value<std::string>("feature_mask"));
    m.meta.seed = r.value<std::uint64_t>("seed");
    m.meta.metric = MetricSpec::parse(r.value<std::string>("metric"));
  } catch (const ValidationError& e) {
    throw ModelLoadError(e.what());
  }
  if (expected && *expected != m.kind)
    throw ModelLoadError("model kind mismatch: expected " + std::string(ranker_name(*expected)) + ", file holds " +
                         std::string(ranker_name(m.kind)));
  m.meta.rounds = r.value<int>("rounds");
  m.meta.rounds_done = r.value<int>("rounds_done");
  m.meta.learning_rate = r.value<double>("learning_rate");
  m.meta.leaves = r.value<int>("leaves");

  auto check_feature = [&](long f) {
    if (f < 0 || f >= static_cast<long>(kFeatureCount)) r.fail("feature index");
  };

  switch (m.kind) {
    case RankerKind::AdaRank: {
      WeakEnsemble e;
      const auto n = r.value<std::size_t>("weak_rankers");
      for (std::size_t i = 0; i < n; ++i) {
        auto ss = r.raw_line();
        WeakRanker w;
        const long f = r.read<long>(ss, "feature") - 1;
        check_feature(f);
        w.feature = static_cast<std::size_t>(f);
        w.sign = r.read<int>(ss, "sign");
        if (w.sign != 1 && w.sign != -1) r.fail("sign");
        w.alpha = r.read<double>(ss, "alpha");
        e.rankers.push_back(w);
      }
      m.params = std::move(e);
      break;
    }
    case RankerKind::ListNet:
    case RankerKind::LambdaRank: {
      NeuralScorer n;
      const auto h = r.value<std::size_t>("hidden");
      n.bias = r.value<double>("bias");
      auto ws = r.line("weights");
      for (auto& w : n.weights) w = r.read<double>(ws, "weights");
      for (std::size_t i = 0; i < h; ++i) {
        auto us = r.line("unit");
        n.hidden_out.push_back(r.read<double>(us, "unit"));
        n.hidden_bias.push_back(r.read<double>(us, "unit"));
        FeatureVector in{};
        for (auto& w : in) w = r.read<double>(us, "unit");
        n.hidden_in.push_back(in);
      }
      m.params = std::move(n);
      break;
    }
    case RankerKind::MART:
    case RankerKind::LambdaMART: {
      TreeEnsemble e;
      e.base = r.value<double>("base");
      const auto nt = r.value<std::size_t>("trees");
      for (std::size_t t = 0; t < nt; ++t) {
        RegressionTree tree;
        const auto nn = r.value<std::size_t>("tree");
        for (std::size_t i = 0; i < nn; ++i) {
          auto ss = r.raw_line();
          TreeNode nd;
          nd.feature = r.read<int>(ss, "node");
          nd.threshold = r.read<double>(ss, "node");
          nd.left = r.read<int>(ss, "node");
          nd.right = r.read<int>(ss, "node");
          nd.value = r.read<double>(ss, "node");
          if (nd.feature >= 0) {
            check_feature(nd.feature);
            const auto lim = static_cast<int>(nn);
            if (nd.left <= static_cast<int>(i) || nd.right <= static_cast<int>(i) || nd.left >= lim || nd.right >= lim)
              r.fail("node children");
          }
          tree.nodes.push_back(nd);
        }
        e.trees.push_back(std::move(tree));
      }
      m.params = std::move(e);
      break;
    }
  }
  r.line("end");
  return m;
}

}  // namespace cof
