#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>

#include "cof/error.hpp"
#include "cof/features.hpp"
#include "cof/rankers/model.hpp"
#include "cof/text_pipeline.hpp"

namespace cof {

/// Everything a CLI run can be configured with.
struct RunConfig {
  PipelineConfig pipeline;
  std::string stopwords_file;
  FeatureConfig features;
  // set once a preset is chosen explicitly; `reproduce` otherwise uses paper-faithful
  bool preset_given = false;
  bool normalize = false;
  TrainConfig train;
  std::optional<RankerKind> algorithm;
  double split_fraction = 0.7;
  std::uint64_t seed = 7;
  std::map<std::string, std::string> paths;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) return v.substr(1, v.size() - 2);
  return v;
}

// Strips a trailing comment that is not inside quotes.
inline std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace detail

/// Applies one dotted key (e.g. "bm25.k1") to the config.
inline void apply_setting(RunConfig& rc, const std::string& key, const std::string& value) {
  auto as_double = [&] {
    try {
      std::size_t used = 0;
      double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ValidationError("config " + key + ": expected a number, got '" + value + "'");
    }
  };
  auto as_int = [&] {
    const double v = as_double();
    if (v != static_cast<double>(static_cast<long long>(v))) throw ValidationError("config " + key + ": expected an integer");
    return static_cast<long long>(v);
  };
  auto as_bool = [&] {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ValidationError("config " + key + ": expected true or false");
  };

  if (key == "pipeline.min_len") rc.pipeline.min_len = static_cast<int>(as_int());
  else if (key == "pipeline.max_len") rc.pipeline.max_len = static_cast<int>(as_int());
  else if (key == "pipeline.stemmer") {
    if (value == "porter") rc.pipeline.stemmer = StemmerKind::Porter;
    else if (value == "none") rc.pipeline.stemmer = StemmerKind::None;
    else throw ValidationError("config pipeline.stemmer: expected porter or none");
  } else if (key == "pipeline.digits") {
    if (value == "drop") rc.pipeline.digit_policy = DigitPolicy::Drop;
    else if (value == "keep") rc.pipeline.digit_policy = DigitPolicy::Keep;
    else throw ValidationError("config pipeline.digits: expected drop or keep");
  } else if (key == "pipeline.stopwords_file") {
    rc.stopwords_file = value;
    rc.pipeline.stopwords = load_stopwords(value);
  } else if (key == "bm25.k1") rc.features.bm25.k1 = as_double();
  else if (key == "bm25.b") rc.features.bm25.b = as_double();
  else if (key == "smoothing.method") rc.features.smoothing.method = parse_smoothing(value);
  else if (key == "smoothing.mu") rc.features.smoothing.mu = as_double();
  else if (key == "smoothing.lambda") rc.features.smoothing.lambda = as_double();
  else if (key == "smoothing.delta") rc.features.smoothing.delta = as_double();
  else if (key == "features.preset") {
    rc.features.preset = parse_preset(value);
    rc.preset_given = true;
  }
  else if (key == "features.normalize") rc.normalize = as_bool();
  else if (key == "train.algorithm") rc.algorithm = parse_ranker(value);
  else if (key == "train.rounds") rc.train.rounds = static_cast<int>(as_int());
  else if (key == "train.learning_rate") rc.train.learning_rate = as_double();
  else if (key == "train.leaves") rc.train.leaves = static_cast<int>(as_int());
  else if (key == "train.min_leaf") rc.train.min_leaf = static_cast<int>(as_int());
  else if (key == "train.metric") rc.train.metric = MetricSpec::parse(value);
  else if (key == "train.hidden") rc.train.hidden = static_cast<int>(as_int());
  else if (key == "train.seed" || key == "seed") {
    rc.seed = static_cast<std::uint64_t>(as_int());
    rc.train.seed = rc.seed;
  } else if (key == "split.fraction") rc.split_fraction = as_double();
  else if (key.rfind("paths.", 0) == 0) rc.paths[key.substr(6)] = value;
  else throw ValidationError("config: unknown key '" + key + "'");
}

/// TOML-style `[section]` headers and `key = value` lines; `#` comments.
inline RunConfig parse_run_config(std::istream& in, RunConfig rc = {}) {
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = detail::trim(detail::strip_comment(line));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError(lineno, "unterminated section header");
      section = detail::trim(std::string_view(text).substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
    const auto key = detail::trim(std::string_view(text).substr(0, eq));
    const auto value = detail::unquote(detail::trim(std::string_view(text).substr(eq + 1)));
    if (key.empty()) throw ParseError(lineno, "empty key");
    try {
      apply_setting(rc, section.empty() ? key : section + "." + key, value);
    } catch (const ValidationError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  rc.pipeline.validate();
  rc.features.bm25.validate();
  rc.features.smoothing.validate();
  return rc;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  return parse_run_config(in);
}

}  // namespace cof
