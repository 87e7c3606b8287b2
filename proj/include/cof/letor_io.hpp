#pragma once

#include <algorithm>
#include <cstdio>
#include <istream>
#include <iterator>
#include <optional>
#include <set>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cof/corpus.hpp"
#include "cof/error.hpp"
#include "cof/features.hpp"

namespace cof {

/// Instances grouped by query id, each group sorted by doc_id, plus an
/// ordered provenance header.
class Dataset {
 public:
  using Group = std::vector<Instance>;

  void add(Instance in) {
    auto& g = groups_[in.query_id];
    auto pos = std::lower_bound(g.begin(), g.end(), in.doc_id,
                                [](const Instance& a, const std::string& id) { return a.doc_id < id; });
    if (pos != g.end() && pos->doc_id == in.doc_id)
      throw ValidationError("duplicate instance (" + std::to_string(in.query_id) + ", " + in.doc_id + ")");
    g.insert(pos, std::move(in));
  }

  void set_header(const std::string& key, std::string value) {
    for (auto& kv : header_)
      if (kv.first == key) {
        kv.second = std::move(value);
        return;
      }
    header_.emplace_back(key, std::move(value));
  }
  [[nodiscard]] std::optional<std::string> header(std::string_view key) const {
    for (const auto& kv : header_)
      if (kv.first == key) return kv.second;
    return std::nullopt;
  }
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& header_entries() const { return header_; }

  [[nodiscard]] const std::map<int, Group>& groups() const { return groups_; }
  [[nodiscard]] std::map<int, Group>& groups() { return groups_; }
  [[nodiscard]] std::size_t num_queries() const { return groups_.size(); }
  [[nodiscard]] std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [q, g] : groups_) n += g.size();
    return n;
  }
  [[nodiscard]] bool empty() const { return groups_.empty(); }
  static constexpr std::size_t feature_count() { return kFeatureCount; }

  /// Feature mask recorded in the header; everything enabled when absent.
  [[nodiscard]] FeatureMask mask() const {
    auto m = header("feature_mask");
    return m ? FeatureMask::from_masked_list(*m) : FeatureMask::all();
  }

  [[nodiscard]] Dataset subset(const std::set<int>& query_ids) const {
    Dataset out;
    out.header_ = header_;
    for (const auto& [q, g] : groups_)
      if (query_ids.contains(q)) out.groups_.emplace(q, g);
    return out;
  }

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::pair<std::string, std::string>> header_;
  std::map<int, Group> groups_;
};

/// Six significant digits, the rendering precision of dataset files.
inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void write(const Dataset& ds, std::ostream& out) {
  out << "# cof-dataset v1\n";
  for (const auto& [k, v] : ds.header_entries()) out << "# " << k << ": " << v << '\n';
  for (const auto& [q, group] : ds.groups()) {
    for (const auto& in : group) {
      out << in.label << " qid:" << in.query_id;
      for (std::size_t i = 0; i < kFeatureCount; ++i) out << ' ' << (i + 1) << ':' << format_value(in.features[i]);
      out << " # " << in.doc_id << '\n';
    }
  }
  if (!out) throw Error("write failed");
}

namespace detail {

inline double parse_double(std::string_view s, std::size_t lineno) {
  try {
    std::size_t used = 0;
    double v = std::stod(std::string(s), &used);
    if (used != s.size()) throw ParseError(lineno, "bad number '" + std::string(s) + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(lineno, "bad number '" + std::string(s) + "'");
  }
}

inline long parse_long(std::string_view s, std::size_t lineno) {
  try {
    std::size_t used = 0;
    long v = std::stol(std::string(s), &used);
    if (used != s.size()) throw ParseError(lineno, "bad integer '" + std::string(s) + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(lineno, "bad integer '" + std::string(s) + "'");
  }
}

}  // namespace detail

/// Reads `<label> qid:<q> 1:<v> ... 12:<v> # <doc_id>` rows. Header lines are
/// `# key: value` comments before the first row.
inline Dataset read(std::istream& in) {
  Dataset ds;
  std::string line;
  std::size_t lineno = 0;
  bool in_header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '#') {
      if (!in_header) continue;
      auto colon = line.find(": ");
      if (colon != std::string::npos && colon > 2) ds.set_header(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    in_header = false;

    std::string body = line;
    std::string doc_id;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      body = line.substr(0, hash);
      auto rest = line.substr(hash + 1);
      auto b = rest.find_first_not_of(" \t");
      if (b != std::string::npos) doc_id = rest.substr(b, rest.find_last_not_of(" \t") - b + 1);
    }
    std::istringstream ss(body);
    std::string tok;
    Instance inst;
    if (!(ss >> tok)) throw ParseError(lineno, "missing label");
    inst.label = static_cast<int>(detail::parse_long(tok, lineno));
    if (!(ss >> tok) || tok.rfind("qid:", 0) != 0) throw ParseError(lineno, "missing qid");
    inst.query_id = static_cast<int>(detail::parse_long(std::string_view(tok).substr(4), lineno));
    std::size_t expected = 1;
    while (ss >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos) throw ParseError(lineno, "expected index:value, got '" + tok + "'");
      const long idx = detail::parse_long(std::string_view(tok).substr(0, colon), lineno);
      if (idx != static_cast<long>(expected) || expected > kFeatureCount)
        throw ParseError(lineno, "non-contiguous feature index " + std::to_string(idx) + " (expected " +
                                     std::to_string(expected) + ")");
      inst.features[expected - 1] = detail::parse_double(std::string_view(tok).substr(colon + 1), lineno);
      ++expected;
    }
    if (expected != kFeatureCount + 1)
      throw ParseError(lineno, "expected " + std::to_string(kFeatureCount) + " features, got " + std::to_string(expected - 1));
    inst.doc_id = doc_id.empty() ? "line" + std::to_string(lineno) : doc_id;
    try {
      ds.add(std::move(inst));
    } catch (const ValidationError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return ds;
}

/// Min-max rescales every feature to [0, 1] within each query; constant
/// features become 0.
inline Dataset normalize_per_query(const Dataset& ds) {
  Dataset out = ds;
  for (auto& [q, group] : out.groups()) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& in : group) {
        lo = std::min(lo, in.features[f]);
        hi = std::max(hi, in.features[f]);
      }
      for (auto& in : group) in.features[f] = hi > lo ? (in.features[f] - lo) / (hi - lo) : 0.0;
    }
  }
  out.set_header("normalization", "per-query-minmax");
  return out;
}

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

inline DatasetSplit split_dataset(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  std::set<int> ids;
  for (const auto& [q, g] : ds.groups()) ids.insert(q);
  const auto train_ids = split_query_ids(ids, train_fraction, seed);
  std::set<int> test_ids;
  std::set_difference(ids.begin(), ids.end(), train_ids.begin(), train_ids.end(), std::inserter(test_ids, test_ids.end()));
  DatasetSplit out{ds.subset(train_ids), ds.subset(test_ids)};
  out.train.set_header("split", "train");
  out.test.set_header("split", "test");
  return out;
}

}  // namespace cof
