#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hicd::text {

// Half-open [start, end) span of code points into a source document.
struct Span {
  int64_t start = 0;
  int64_t end = 0;
};

struct Sentence {
  Span span;
  std::string text;  // UTF-8 slice of the document
};

// Rule-based splitter:
//   (a) '.', '!' or '?' followed by whitespace and an uppercase letter or
//       digit ends a sentence, unless the word carrying the period is on
//       the abbreviation list;
//   (b) a blank line ends a sentence;
//   (c) a newline ends a sentence when the line before it ends in ':'.
// Periods inside decimal numbers never split. Sentences are trimmed of
// surrounding whitespace and never empty; the document is exactly the
// spans plus inter-span whitespace.
std::vector<Sentence> split_sentences(const std::string& document);

struct Token {
  std::string surface;  // normalized + lowercased
  Span span;            // code points into the text passed in
};

// Lowercased tokens; runs of word characters stay together, every other
// non-space character becomes its own token. '.' or ',' flanked by digits
// stays inside the number ("0.2" is one token).
std::vector<Token> tokenize(const std::string& sentence_text);

// Surfaces only, for callers that do not need spans.
std::vector<std::string> token_strings(const std::string& text);

}  // namespace hicd::text
