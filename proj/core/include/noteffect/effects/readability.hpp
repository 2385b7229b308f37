#pragma once

#include <optional>
#include <string_view>

namespace noteffect {

struct TextStats {
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
};

// Vowel groups (a, e, i, o, u, y), minus a silent final 'e' (but not "-le"),
// never below one.
std::size_t count_syllables(std::string_view word);

// Words are whitespace-separated tokens containing a letter or digit.
// Sentences are runs of terminal punctuation (. ! ?); text without any counts
// as one sentence.
TextStats text_stats(std::string_view text);

std::size_t sentence_count(std::string_view text);

// 0.39 (words/sentences) + 11.8 (syllables/words) - 15.59; absent without words.
std::optional<double> flesch_kincaid(std::string_view text);

}  // namespace noteffect
