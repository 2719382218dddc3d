#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hicd::data {

// One coder-attributed evidence span. Offsets count Unicode scalar values
// in the report text, 0-based, end-exclusive.
struct SpanAnnotation {
  int64_t start = 0;
  int64_t end = 0;
  std::string code;
};

struct Report {
  std::string id;
  std::string text;
  std::string r4v;  // reason-for-visit free text
  std::vector<SpanAnnotation> annotations;
  std::vector<std::string> codes;  // sorted, unique; equals the annotation codes
};

struct Corpus {
  std::vector<Report> reports;
};

// Recomputes `codes` from the annotations (sorted, unique).
void refresh_codes(Report& report);

// Throws DataError naming the report id on any invariant violation:
// empty id, span out of bounds or inverted, empty code string, or codes
// not matching the annotation codes.
void validate_report(const Report& report);

// JSONL, one report per line, keys: annotations, codes, id, r4v,
// schema_version, text. Errors carry 1-based line numbers.
Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

std::string report_to_json_line(const Report& report);
Report report_from_json_line(const std::string& line);

}  // namespace hicd::data
