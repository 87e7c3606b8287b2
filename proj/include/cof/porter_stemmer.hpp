#pragma once

#include <string>
#include <string_view>

namespace cof {

/// Classic Porter (1980) suffix stripper for lowercase ASCII words, as
/// published: none of the reference C release's departures ("bli", "logi",
/// short-word guard) are applied.
class PorterStemmer {
 public:
  [[nodiscard]] std::string operator()(std::string_view word) const {
    State s{std::string(word), static_cast<int>(word.size()) - 1, 0};
    if (s.k < 0) return s.b;
    step1ab(s);
    if (s.k > 0) {
      step1c(s);
      step2(s);
      step3(s);
      step4(s);
      step5(s);
    }
    s.b.resize(static_cast<std::size_t>(s.k + 1));
    return s.b;
  }

 private:
  struct State {
    std::string b;
    int k;  // index of last char
    int j;  // general offset set by ends()
  };

  static bool cons(const State& s, int i) {
    switch (s.b[static_cast<std::size_t>(i)]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(s, i - 1);
      default:
        return true;
    }
  }

  // number of VC sequences in b[0..j]
  static int measure(const State& s) {
    int n = 0;
    int i = 0;
    for (;;) {
      if (i > s.j) return n;
      if (!cons(s, i)) break;
      ++i;
    }
    ++i;
    for (;;) {
      for (;;) {
        if (i > s.j) return n;
        if (cons(s, i)) break;
        ++i;
      }
      ++i;
      ++n;
      for (;;) {
        if (i > s.j) return n;
        if (!cons(s, i)) break;
        ++i;
      }
      ++i;
    }
  }

  static bool vowel_in_stem(const State& s) {
    for (int i = 0; i <= s.j; ++i)
      if (!cons(s, i)) return true;
    return false;
  }

  static bool double_cons(const State& s, int j) {
    if (j < 1) return false;
    if (s.b[static_cast<std::size_t>(j)] != s.b[static_cast<std::size_t>(j - 1)]) return false;
    return cons(s, j);
  }

  // consonant-vowel-consonant ending at i, where the last c is not w, x or y
  static bool cvc(const State& s, int i) {
    if (i < 2 || !cons(s, i) || cons(s, i - 1) || !cons(s, i - 2)) return false;
    const char ch = s.b[static_cast<std::size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  static bool ends(State& s, std::string_view suffix) {
    const int len = static_cast<int>(suffix.size());
    if (len > s.k + 1) return false;
    if (std::string_view(s.b).substr(static_cast<std::size_t>(s.k - len + 1), suffix.size()) != suffix)
      return false;
    s.j = s.k - len;
    return true;
  }

  static void set_to(State& s, std::string_view repl) {
    s.b.replace(static_cast<std::size_t>(s.j + 1), static_cast<std::size_t>(s.k - s.j), repl);
    s.k = s.j + static_cast<int>(repl.size());
    s.b.resize(static_cast<std::size_t>(s.k + 1));
  }

  static void replace_if_measured(State& s, std::string_view repl) {
    if (measure(s) > 0) set_to(s, repl);
  }

  char at(const State& s, int i) const { return s.b[static_cast<std::size_t>(i)]; }

  // plurals and -ed / -ing
  void step1ab(State& s) const {
    if (at(s, s.k) == 's') {
      if (ends(s, "sses")) {
        s.k -= 2;
      } else if (ends(s, "ies")) {
        set_to(s, "i");
      } else if (s.k == 0 || at(s, s.k - 1) != 's') {
        --s.k;
      }
      s.b.resize(static_cast<std::size_t>(s.k + 1));
    }
    if (ends(s, "eed")) {
      if (measure(s) > 0) --s.k;
    } else if ((ends(s, "ed") || ends(s, "ing")) && vowel_in_stem(s)) {
      s.k = s.j;
      s.b.resize(static_cast<std::size_t>(s.k + 1));
      if (ends(s, "at")) {
        set_to(s, "ate");
      } else if (ends(s, "bl")) {
        set_to(s, "ble");
      } else if (ends(s, "iz")) {
        set_to(s, "ize");
      } else if (double_cons(s, s.k)) {
        --s.k;
        const char ch = at(s, s.k);
        if (ch == 'l' || ch == 's' || ch == 'z') ++s.k;
      } else if (measure(s) == 1 && cvc(s, s.k)) {
        s.j = s.k;
        set_to(s, "e");
      }
    }
    s.b.resize(static_cast<std::size_t>(s.k + 1));
  }

  void step1c(State& s) const {
    if (ends(s, "y") && vowel_in_stem(s)) s.b[static_cast<std::size_t>(s.k)] = 'i';
  }

  struct Rule {
    std::string_view suffix;
    std::string_view repl;
  };

  // First rule whose suffix matches wins, whether or not the measure allows
  // the replacement.
  template <std::size_t N>
  static void apply_first(State& s, const Rule (&rules)[N]) {
    for (const auto& r : rules) {
      if (ends(s, r.suffix)) {
        replace_if_measured(s, r.repl);
        return;
      }
    }
  }

  void step2(State& s) const {
    if (s.k < 1) return;
    switch (at(s, s.k - 1)) {
      case 'a': {
        static constexpr Rule r[] = {{"ational", "ate"}, {"tional", "tion"}};
        apply_first(s, r);
        break;
      }
      case 'c': {
        static constexpr Rule r[] = {{"enci", "ence"}, {"anci", "ance"}};
        apply_first(s, r);
        break;
      }
      case 'e': {
        static constexpr Rule r[] = {{"izer", "ize"}};
        apply_first(s, r);
        break;
      }
      case 'l': {
        static constexpr Rule r[] = {
            {"abli", "able"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
        apply_first(s, r);
        break;
      }
      case 'o': {
        static constexpr Rule r[] = {{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
        apply_first(s, r);
        break;
      }
      case 's': {
        static constexpr Rule r[] = {
            {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
        apply_first(s, r);
        break;
      }
      case 't': {
        static constexpr Rule r[] = {{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
        apply_first(s, r);
        break;
      }
      default:
        break;
    }
  }

  void step3(State& s) const {
    switch (at(s, s.k)) {
      case 'e': {
        static constexpr Rule r[] = {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
        apply_first(s, r);
        break;
      }
      case 'i': {
        static constexpr Rule r[] = {{"iciti", "ic"}};
        apply_first(s, r);
        break;
      }
      case 'l': {
        static constexpr Rule r[] = {{"ical", "ic"}, {"ful", ""}};
        apply_first(s, r);
        break;
      }
      case 's': {
        static constexpr Rule r[] = {{"ness", ""}};
        apply_first(s, r);
        break;
      }
      default:
        break;
    }
  }

  // -ant, -ence etc. in context <c>vcvc<v>
  void step4(State& s) const {
    if (s.k < 1) return;
    auto any = [&s](std::initializer_list<std::string_view> suffixes) {
      for (auto suf : suffixes)
        if (ends(s, suf)) return true;
      return false;
    };
    bool hit = false;
    switch (at(s, s.k - 1)) {
      case 'a': hit = any({"al"}); break;
      case 'c': hit = any({"ance", "ence"}); break;
      case 'e': hit = any({"er"}); break;
      case 'i': hit = any({"ic"}); break;
      case 'l': hit = any({"able", "ible"}); break;
      case 'n': hit = any({"ant", "ement", "ment", "ent"}); break;
      case 'o':
        if (ends(s, "ion") && s.j >= 0 && (at(s, s.j) == 's' || at(s, s.j) == 't')) {
          hit = true;
        } else {
          hit = ends(s, "ou");
        }
        break;
      case 's': hit = any({"ism"}); break;
      case 't': hit = any({"ate", "iti"}); break;
      case 'u': hit = any({"ous"}); break;
      case 'v': hit = any({"ive"}); break;
      case 'z': hit = any({"ize"}); break;
      default: break;
    }
    if (hit && measure(s) > 1) {
      s.k = s.j;
      s.b.resize(static_cast<std::size_t>(s.k + 1));
    }
  }

  // final -e and -ll
  void step5(State& s) const {
    s.j = s.k;
    if (at(s, s.k) == 'e') {
      const int a = measure(s);
      if (a > 1 || (a == 1 && !cvc(s, s.k - 1))) --s.k;
    }
    if (at(s, s.k) == 'l' && double_cons(s, s.k) && measure(s) > 1) --s.k;
    s.b.resize(static_cast<std::size_t>(s.k + 1));
  }
};

[[nodiscard]] inline std::string porter_stem(std::string_view word) { return PorterStemmer{}(word); }

}  // namespace cof
