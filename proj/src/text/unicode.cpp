#include "text/unicode.hpp"

namespace hicd::text {

std::vector<char32_t> utf8_decode(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0xFFFD;
    size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0 && i + 1 < s.size() &&
               (static_cast<unsigned char>(s[i + 1]) & 0xC0) == 0x80) {
      cp = (static_cast<char32_t>(b0 & 0x1F) << 6) |
           (static_cast<unsigned char>(s[i + 1]) & 0x3F);
      len = 2;
      if (cp < 0x80) cp = 0xFFFD;  // overlong
    } else if ((b0 & 0xF0) == 0xE0 && i + 2 < s.size() &&
               (static_cast<unsigned char>(s[i + 1]) & 0xC0) == 0x80 &&
               (static_cast<unsigned char>(s[i + 2]) & 0xC0) == 0x80) {
      cp = (static_cast<char32_t>(b0 & 0x0F) << 12) |
           ((static_cast<char32_t>(static_cast<unsigned char>(s[i + 1]) & 0x3F)) << 6) |
           (static_cast<unsigned char>(s[i + 2]) & 0x3F);
      len = 3;
      if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    } else if ((b0 & 0xF8) == 0xF0 && i + 3 < s.size() &&
               (static_cast<unsigned char>(s[i + 1]) & 0xC0) == 0x80 &&
               (static_cast<unsigned char>(s[i + 2]) & 0xC0) == 0x80 &&
               (static_cast<unsigned char>(s[i + 3]) & 0xC0) == 0x80) {
      cp = (static_cast<char32_t>(b0 & 0x07) << 18) |
           ((static_cast<char32_t>(static_cast<unsigned char>(s[i + 1]) & 0x3F)) << 12) |
           ((static_cast<char32_t>(static_cast<unsigned char>(s[i + 2]) & 0x3F)) << 6) |
           (static_cast<unsigned char>(s[i + 3]) & 0x3F);
      len = 4;
      if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string utf8_encode(const std::vector<char32_t>& cps, size_t begin, size_t end) {
  std::string out;
  out.reserve(end - begin);
  for (size_t i = begin; i < end && i < cps.size(); ++i) {
    char32_t c = cps[i];
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  // Latin-1 capitals, skipping the multiplication sign.
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  return c;
}

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' ||
         c == 0xA0;
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_upper(char32_t c) {
  return (c >= U'A' && c <= U'Z') || (c >= 0xC0 && c <= 0xDE && c != 0xD7);
}

bool is_word_char(char32_t c) {
  if (is_digit(c)) return true;
  if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) return true;
  if (c >= 0x80 && !is_space(c) && !(c >= 0x300 && c <= 0x36F)) {
    // Treat non-ASCII, non-combining code points as word characters except
    // common non-letter symbols.
    if (c == 0xB0 || c == 0xB7 || c == 0xD7 || c == 0xF7 || c == 0x2013 || c == 0x2014 ||
        c == 0x2018 || c == 0x2019 || c == 0x201C || c == 0x201D)
      return false;
    return true;
  }
  return false;
}

namespace {

// (base << 16) | combining -> precomposed. Latin-1 repertoire.
char32_t compose_pair(char32_t base, char32_t mark) {
  auto key = [](char32_t b, char32_t m) { return (static_cast<uint32_t>(b) << 16) | m; };
  switch (key(base, mark)) {
    case (U'A' << 16) | 0x300: return 0xC0;
    case (U'A' << 16) | 0x301: return 0xC1;
    case (U'A' << 16) | 0x302: return 0xC2;
    case (U'A' << 16) | 0x303: return 0xC3;
    case (U'A' << 16) | 0x308: return 0xC4;
    case (U'A' << 16) | 0x30A: return 0xC5;
    case (U'C' << 16) | 0x327: return 0xC7;
    case (U'E' << 16) | 0x300: return 0xC8;
    case (U'E' << 16) | 0x301: return 0xC9;
    case (U'E' << 16) | 0x302: return 0xCA;
    case (U'E' << 16) | 0x308: return 0xCB;
    case (U'I' << 16) | 0x300: return 0xCC;
    case (U'I' << 16) | 0x301: return 0xCD;
    case (U'I' << 16) | 0x302: return 0xCE;
    case (U'I' << 16) | 0x308: return 0xCF;
    case (U'N' << 16) | 0x303: return 0xD1;
    case (U'O' << 16) | 0x300: return 0xD2;
    case (U'O' << 16) | 0x301: return 0xD3;
    case (U'O' << 16) | 0x302: return 0xD4;
    case (U'O' << 16) | 0x303: return 0xD5;
    case (U'O' << 16) | 0x308: return 0xD6;
    case (U'U' << 16) | 0x300: return 0xD9;
    case (U'U' << 16) | 0x301: return 0xDA;
    case (U'U' << 16) | 0x302: return 0xDB;
    case (U'U' << 16) | 0x308: return 0xDC;
    case (U'Y' << 16) | 0x301: return 0xDD;
    case (U'a' << 16) | 0x300: return 0xE0;
    case (U'a' << 16) | 0x301: return 0xE1;
    case (U'a' << 16) | 0x302: return 0xE2;
    case (U'a' << 16) | 0x303: return 0xE3;
    case (U'a' << 16) | 0x308: return 0xE4;
    case (U'a' << 16) | 0x30A: return 0xE5;
    case (U'c' << 16) | 0x327: return 0xE7;
    case (U'e' << 16) | 0x300: return 0xE8;
    case (U'e' << 16) | 0x301: return 0xE9;
    case (U'e' << 16) | 0x302: return 0xEA;
    case (U'e' << 16) | 0x308: return 0xEB;
    case (U'i' << 16) | 0x300: return 0xEC;
    case (U'i' << 16) | 0x301: return 0xED;
    case (U'i' << 16) | 0x302: return 0xEE;
    case (U'i' << 16) | 0x308: return 0xEF;
    case (U'n' << 16) | 0x303: return 0xF1;
    case (U'o' << 16) | 0x300: return 0xF2;
    case (U'o' << 16) | 0x301: return 0xF3;
    case (U'o' << 16) | 0x302: return 0xF4;
    case (U'o' << 16) | 0x303: return 0xF5;
    case (U'o' << 16) | 0x308: return 0xF6;
    case (U'u' << 16) | 0x300: return 0xF9;
    case (U'u' << 16) | 0x301: return 0xFA;
    case (U'u' << 16) | 0x302: return 0xFB;
    case (U'u' << 16) | 0x308: return 0xFC;
    case (U'y' << 16) | 0x301: return 0xFD;
    case (U'y' << 16) | 0x308: return 0xFF;
    default: return 0;
  }
}

}  // namespace

Normalized normalize_compose(const std::vector<char32_t>& in) {
  Normalized out;
  out.cp.reserve(in.size());
  out.src.reserve(in.size());
  for (size_t i = 0; i < in.size(); ++i) {
    if (!out.cp.empty() && in[i] >= 0x300 && in[i] <= 0x36F) {
      char32_t composed = compose_pair(out.cp.back(), in[i]);
      if (composed != 0) {
        out.cp.back() = composed;
        continue;  // src keeps pointing at the base character
      }
    }
    out.cp.push_back(in[i]);
    out.src.push_back(i);
  }
  return out;
}

}  // namespace hicd::text
