#include "noteffect/effects/readability.hpp"

#include <cctype>
#include <string>

namespace noteffect {

namespace {

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::size_t count_syllables(std::string_view word) {
  std::string w;
  for (char c : word)
    if (std::isalpha(static_cast<unsigned char>(c)))
      w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (w.empty()) return 1;
  std::size_t groups = 0;
  bool prev = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !prev) ++groups;
    prev = v;
  }
  const bool silent_e = w.size() > 1 && w.back() == 'e' && !(w.size() > 2 && w[w.size() - 2] == 'l' && !is_vowel(w[w.size() - 3]));
  if (silent_e && groups > 1) --groups;
  return groups == 0 ? 1 : groups;
}

std::size_t sentence_count(std::string_view text) {
  std::size_t count = 0;
  bool content = false;  // word characters since the last terminal run
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (is_terminal(c)) {
      // A period between digits is a decimal point.
      if (c == '.' && i > 0 && i + 1 < text.size() &&
          std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
          std::isdigit(static_cast<unsigned char>(text[i + 1])))
        continue;
      if (content) ++count;
      content = false;
    } else if (std::isalnum(static_cast<unsigned char>(c))) {
      content = true;
    }
  }
  if (content) ++count;
  return count;
}

TextStats text_stats(std::string_view text) {
  TextStats s;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const auto token = text.substr(begin, i - begin);
    bool word = false;
    for (char c : token)
      if (std::isalnum(static_cast<unsigned char>(c))) word = true;
    if (!word) continue;
    ++s.words;
    s.syllables += count_syllables(token);
  }
  s.sentences = s.words ? std::max<std::size_t>(1, sentence_count(text)) : 0;
  return s;
}

std::optional<double> flesch_kincaid(std::string_view text) {
  const auto s = text_stats(text);
  if (s.words == 0) return std::nullopt;
  const double w = static_cast<double>(s.words);
  return 0.39 * (w / static_cast<double>(s.sentences)) +
         11.8 * (static_cast<double>(s.syllables) / w) - 15.59;
}

}  // namespace noteffect
