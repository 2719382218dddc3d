#include "data/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "common/error.hpp"
#include "text/unicode.hpp"

namespace hicd::data {

using nlohmann::json;

void refresh_codes(Report& report) {
  std::set<std::string> codes;
  for (const SpanAnnotation& a : report.annotations) codes.insert(a.code);
  report.codes.assign(codes.begin(), codes.end());
}

void validate_report(const Report& report) {
  auto fail = [&](const std::string& what) {
    throw DataError("report '" + report.id + "': " + what);
  };
  if (report.id.empty()) throw DataError("report with empty id");
  int64_t len = static_cast<int64_t>(text::utf8_decode(report.text).size());
  std::set<std::string> ann_codes;
  for (const SpanAnnotation& a : report.annotations) {
    if (a.code.empty()) fail("annotation with empty code");
    if (a.start >= a.end)
      fail("annotation span [" + std::to_string(a.start) + ", " + std::to_string(a.end) +
           ") is empty or inverted");
    if (a.start < 0 || a.end > len)
      fail("annotation span [" + std::to_string(a.start) + ", " + std::to_string(a.end) +
           ") out of bounds for text of length " + std::to_string(len));
    ann_codes.insert(a.code);
  }
  for (const std::string& c : report.codes)
    if (c.empty()) fail("empty code string");
  std::set<std::string> listed(report.codes.begin(), report.codes.end());
  if (listed.size() != report.codes.size()) fail("duplicate codes in codeset");
  if (listed != ann_codes) fail("codeset does not match annotation codes");
}

std::string report_to_json_line(const Report& report) {
  json anns = json::array();
  for (const SpanAnnotation& a : report.annotations)
    anns.push_back({{"start", a.start}, {"end", a.end}, {"code", a.code}});
  json j = {{"schema_version", 1}, {"id", report.id},      {"text", report.text},
            {"r4v", report.r4v},   {"annotations", anns},  {"codes", report.codes}};
  return j.dump();
}

Report report_from_json_line(const std::string& line) {
  json j = json::parse(line);
  if (!j.is_object()) throw DataError("report line is not a JSON object");
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
    throw DataError("missing or unsupported schema_version");
  Report r;
  r.id = j.at("id").get<std::string>();
  r.text = j.at("text").get<std::string>();
  r.r4v = j.value("r4v", std::string());
  for (const json& a : j.value("annotations", json::array())) {
    SpanAnnotation ann;
    ann.start = a.at("start").get<int64_t>();
    ann.end = a.at("end").get<int64_t>();
    ann.code = a.at("code").get<std::string>();
    r.annotations.push_back(std::move(ann));
  }
  for (const json& c : j.value("codes", json::array()))
    r.codes.push_back(c.get<std::string>());
  std::sort(r.codes.begin(), r.codes.end());
  return r;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  Corpus corpus;
  std::string line;
  int lineno = 0;
  std::set<std::string> seen_ids;
  while (std::getline(in, line)) {
    lineno++;
    if (line.empty()) continue;
    Report r;
    try {
      r = report_from_json_line(line);
    } catch (const json::exception& e) {
      throw DataError("corpus line " + std::to_string(lineno) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    validate_report(r);
    if (!seen_ids.insert(r.id).second)
      throw DataError("corpus line " + std::to_string(lineno) + ": duplicate report id '" +
                      r.id + "'");
    corpus.reports.push_back(std::move(r));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  for (const Report& r : corpus.reports) out << report_to_json_line(r) << "\n";
}

}  // namespace hicd::data
