#pragma once

// Character bi-gram chains trained from UTF-8 text.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "markagg/chain.hpp"

namespace markagg {

// Matches lines such as "Chapter 3", "CHAPTER IV" or a lone roman numeral.
inline constexpr std::string_view kDefaultHeadingPattern =
    R"(^\s*((chapter|CHAPTER|Chapter)\s+([0-9]+|[IVXLC]+)\.?|[IVXLC]+\.?)\s*$)";

inline constexpr double kDefaultSmoothing = 1e-3;

struct TextOptions {
  // Line breaks become a single space (never doubling an existing one).
  bool strip_linebreaks = true;
  // Lines matching this ECMAScript regex are dropped before joining.
  std::optional<std::string> heading_pattern = std::string(kDefaultHeadingPattern);
};

std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(char32_t code_point);
std::string encode_utf8(std::u32string_view text);

std::u32string preprocess_text(std::string_view utf8, const TextOptions& options = {});

struct BigramModel {
  FirstOrderChain chain;
  // State i is alphabet[i]; characters appear in order of first occurrence.
  std::u32string alphabet;
  std::size_t n_characters = 0;
};

// P_ij = (count_ij + delta) / (count_i + delta * N). With delta = 0, rows
// without any successor become uniform and a warning is emitted.
BigramModel bigram_train(std::u32string_view text, double delta = kDefaultSmoothing);

}  // namespace markagg
