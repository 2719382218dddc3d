#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hicd::text {

// Code-point utilities. Every span offset in this project (corpus
// annotations, sentence spans, token spans) counts Unicode scalar values,
// 0-based, end-exclusive.

std::vector<char32_t> utf8_decode(std::string_view s);
std::string utf8_encode(const std::vector<char32_t>& cps, size_t begin, size_t end);
inline std::string utf8_encode(const std::vector<char32_t>& cps) {
  return utf8_encode(cps, 0, cps.size());
}

char32_t to_lower(char32_t c);
bool is_space(char32_t c);
bool is_digit(char32_t c);
bool is_upper(char32_t c);
bool is_word_char(char32_t c);  // letters (incl. non-ASCII) and digits

// Canonical composition for decomposed Latin sequences (base letter +
// combining mark -> precomposed Latin-1 form). Full-table NFC is out of
// reach without ICU; this covers the diacritics that occur in clinical
// text. `src[i]` maps output code point i back to the index of its first
// source code point, so spans keep pointing at the original document.
struct Normalized {
  std::vector<char32_t> cp;
  std::vector<size_t> src;
};
Normalized normalize_compose(const std::vector<char32_t>& in);

}  // namespace hicd::text
