#include "text/segment.hpp"

#include <array>
#include <set>

#include "text/unicode.hpp"

namespace hicd::text {

namespace {

const std::set<std::u32string>& abbreviations() {
  static const std::set<std::u32string> abbr = {
      U"cm.", U"mm.", U"ml.", U"dr.", U"mr.", U"mrs.", U"ms.", U"st.",
      U"no.", U"fig.", U"vs.", U"approx.", U"e.g.", U"i.e.", U"etc."};
  return abbr;
}

// The word ending at `pos` (inclusive of the terminator), lowercased.
std::u32string word_ending_at(const std::vector<char32_t>& cp, size_t pos) {
  size_t begin = pos;
  while (begin > 0) {
    char32_t prev = cp[begin - 1];
    if (is_space(prev)) break;
    begin--;
  }
  std::u32string w;
  for (size_t i = begin; i <= pos; ++i) w.push_back(to_lower(cp[i]));
  return w;
}

bool inside_decimal(const std::vector<char32_t>& cp, size_t pos) {
  return pos > 0 && pos + 1 < cp.size() && is_digit(cp[pos - 1]) && is_digit(cp[pos + 1]);
}

}  // namespace

std::vector<Sentence> split_sentences(const std::string& document) {
  std::vector<char32_t> cp = utf8_decode(document);
  const size_t n = cp.size();

  // Mark break positions: index of the first code point after a boundary.
  std::vector<size_t> breaks;
  for (size_t i = 0; i < n; ++i) {
    char32_t c = cp[i];
    if (c == U'.' || c == U'!' || c == U'?') {
      if (c == U'.' && inside_decimal(cp, i)) continue;
      size_t j = i + 1;
      bool saw_space = false;
      while (j < n && is_space(cp[j])) {
        saw_space = true;
        j++;
      }
      if (!saw_space || j >= n) continue;
      if (!(is_upper(cp[j]) || is_digit(cp[j]))) continue;
      if (c == U'.' && abbreviations().count(word_ending_at(cp, i))) continue;
      breaks.push_back(i + 1);
    } else if (c == U'\n') {
      // Blank line: this newline plus another newline with only spaces
      // or tabs in between.
      size_t j = i + 1;
      while (j < n && (cp[j] == U' ' || cp[j] == U'\t' || cp[j] == U'\r')) j++;
      bool blank = j < n && cp[j] == U'\n';
      // Colon header: last non-space char of the preceding line is ':'.
      size_t k = i;
      while (k > 0 && (cp[k - 1] == U' ' || cp[k - 1] == U'\t' || cp[k - 1] == U'\r')) k--;
      bool colon = k > 0 && cp[k - 1] == U':';
      if (blank || colon) breaks.push_back(i + 1);
    }
  }
  breaks.push_back(n);

  std::vector<Sentence> out;
  size_t begin = 0;
  for (size_t b : breaks) {
    size_t s = begin, e = b;
    while (s < e && is_space(cp[s])) s++;
    while (e > s && is_space(cp[e - 1])) e--;
    if (e > s) {
      Sentence sent;
      sent.span = {static_cast<int64_t>(s), static_cast<int64_t>(e)};
      sent.text = utf8_encode(cp, s, e);
      out.push_back(std::move(sent));
    }
    begin = b;
  }
  return out;
}

std::vector<Token> tokenize(const std::string& sentence_text) {
  std::vector<char32_t> raw = utf8_decode(sentence_text);
  Normalized norm = normalize_compose(raw);
  const std::vector<char32_t>& cp = norm.cp;
  const size_t n = cp.size();

  auto src_start = [&](size_t i) { return static_cast<int64_t>(norm.src[i]); };
  auto src_end = [&](size_t i) {
    return static_cast<int64_t>(i + 1 < n ? norm.src[i + 1] : raw.size());
  };

  std::vector<Token> out;
  size_t i = 0;
  while (i < n) {
    if (is_space(cp[i])) {
      i++;
      continue;
    }
    size_t begin = i;
    if (is_word_char(cp[i])) {
      while (i < n) {
        if (is_word_char(cp[i])) {
          i++;
        } else if ((cp[i] == U'.' || cp[i] == U',') && i > begin && is_digit(cp[i - 1]) &&
                   i + 1 < n && is_digit(cp[i + 1])) {
          i++;  // decimal separator stays inside the number
        } else {
          break;
        }
      }
    } else {
      i++;  // one code point of punctuation per token
    }
    std::u32string low;
    for (size_t k = begin; k < i; ++k) low.push_back(to_lower(cp[k]));
    Token t;
    t.surface = utf8_encode(std::vector<char32_t>(low.begin(), low.end()), 0, low.size());
    t.span = {src_start(begin), src_end(i - 1)};
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> token_strings(const std::string& text) {
  std::vector<std::string> out;
  for (Token& t : tokenize(text)) out.push_back(std::move(t.surface));
  return out;
}

}  // namespace hicd::text
