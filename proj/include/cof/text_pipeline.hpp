#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cof/error.hpp"
#include "cof/porter_stemmer.hpp"
#include "cof/stopwords.hpp"

namespace cof {

enum class StemmerKind { Porter, None };
enum class DigitPolicy { Drop, Keep };

struct PipelineConfig {
  int min_len = 2;
  int max_len = 25;
  std::unordered_set<std::string> stopwords = default_stopwords();
  StemmerKind stemmer = StemmerKind::Porter;
  DigitPolicy digit_policy = DigitPolicy::Drop;

  static std::unordered_set<std::string> default_stopwords() {
    std::unordered_set<std::string> out;
    for (auto w : kSmartStopwords) out.emplace(w);
    return out;
  }

  void validate() const {
    if (min_len < 1 || min_len > max_len)
      throw ValidationError("pipeline: require 1 <= min_len <= max_len");
  }
};

/// One stopword per line; blank lines and surrounding whitespace ignored.
inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file: " + path);
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string w = line.substr(b, e - b + 1);
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
    out.insert(std::move(w));
  }
  return out;
}

namespace detail {
inline bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}
}  // namespace detail

/// Maximal runs of ASCII letters (and digits when kept). Everything else,
/// including non-ASCII bytes, separates tokens.
inline std::vector<std::string> tokenize(std::string_view text, DigitPolicy digits = DigitPolicy::Drop) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto in_token = [digits](char c) {
    return detail::is_alpha(c) || (digits == DigitPolicy::Keep && detail::is_digit(c));
  };
  while (i < n) {
    while (i < n && !in_token(text[i])) ++i;
    const std::size_t start = i;
    while (i < n && in_token(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

/// A processed term together with the raw token it came from.
struct TracedTerm {
  std::string raw;
  std::string term;
};

/// tokenize -> stopwords -> length filter -> lowercase -> stem. Stopword
/// matching ignores case, and a stem that lands on a stopword is dropped too.
inline std::vector<TracedTerm> process_traced(std::string_view text, const PipelineConfig& cfg) {
  std::vector<TracedTerm> out;
  for (auto& tok : tokenize(text, cfg.digit_policy)) {
    std::string lower = detail::to_lower(tok);
    if (cfg.stopwords.contains(lower)) continue;
    const auto len = static_cast<int>(tok.size());
    if (len < cfg.min_len || len > cfg.max_len) continue;
    std::string term = cfg.stemmer == StemmerKind::Porter ? porter_stem(lower) : lower;
    if (term.empty() || cfg.stopwords.contains(term)) continue;
    out.push_back({std::move(tok), std::move(term)});
  }
  return out;
}

inline std::vector<std::string> process(std::string_view text, const PipelineConfig& cfg) {
  std::vector<std::string> out;
  for (auto& t : process_traced(text, cfg)) out.push_back(std::move(t.term));
  return out;
}

}  // namespace cof
