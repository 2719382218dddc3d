#include "pipeline/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

#include "common/error.hpp"
#include "text/segment.hpp"

namespace hicd::pipeline {

using nlohmann::json;

int fallback_focus(const std::vector<double>& focus_probs) {
  if (focus_probs.empty())
    throw std::invalid_argument("fallback_focus: empty report");
  int best = 0;
  for (size_t i = 1; i < focus_probs.size(); ++i)
    if (focus_probs[i] > focus_probs[best]) best = static_cast<int>(i);
  return best;
}

Prediction predict_codeset(const data::Report& report, const model::TaggerModel& tagger,
                           const model::ClassifierModel& classifier) {
  if (tagger.embedding_hash != classifier.embedding_hash)
    throw ConfigError("embedding hash mismatch between tagger and classifier checkpoints");

  std::vector<text::Sentence> sentences = text::split_sentences(report.text);
  if (sentences.empty())
    throw DataError("report '" + report.id + "' has no sentences");

  std::vector<std::vector<std::string>> sentence_tokens;
  sentence_tokens.reserve(sentences.size());
  for (const text::Sentence& s : sentences)
    sentence_tokens.push_back(text::token_strings(s.text));
  std::vector<std::string> r4v_tokens = text::token_strings(report.r4v);

  model::TagResult tags =
      model::tag_report(sentence_tokens, r4v_tokens, tagger.params, tagger.table);

  Prediction out;
  out.report_id = report.id;
  std::vector<int> focus;
  for (size_t i = 0; i < tags.tags.size(); ++i)
    if (tags.tags[i] == 1) focus.push_back(static_cast<int>(i));
  if (focus.empty()) {
    focus.push_back(fallback_focus(tags.focus_prob));
    out.fallback_used = true;
  }

  std::set<std::string> codes;
  for (int si : focus) {
    model::ClassifyResult r =
        model::classify(sentence_tokens[si], r4v_tokens, classifier.params, classifier.table);
    int arg = 0;
    for (size_t i = 1; i < r.label_probs.size(); ++i)
      if (r.label_probs[i] > r.label_probs[arg]) arg = static_cast<int>(i);

    Evidence ev;
    ev.sentence_index = si;
    ev.sentence_text = sentences[si].text;
    ev.tokens = sentence_tokens[si];
    ev.attention = r.alpha;
    ev.code = classifier.labels.code_of(arg);
    codes.insert(ev.code);
    out.evidence.push_back(std::move(ev));
  }
  out.codes.assign(codes.begin(), codes.end());
  return out;
}

namespace {

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string explain_text(const Prediction& prediction, const data::Report& report) {
  std::string out;
  out += "report " + prediction.report_id + "\n";
  out += "codes:";
  for (const std::string& c : prediction.codes) out += " " + c;
  out += prediction.fallback_used ? "  (fallback focus)" : "";
  out += "\n";
  if (!report.r4v.empty()) out += "reason for visit: " + report.r4v + "\n";
  for (const Evidence& ev : prediction.evidence) {
    out += "[" + ev.code + "] sentence " + std::to_string(ev.sentence_index) + ": ";
    if (ev.attention.empty()) {
      out += ev.sentence_text;
    } else {
      for (size_t t = 0; t < ev.tokens.size(); ++t) {
        if (t) out += " ";
        out += ev.tokens[t] + "(" + fmt3(ev.attention[t]) + ")";
      }
    }
    out += "\n";
  }
  return out;
}

std::string explain_html(const Prediction& prediction, const data::Report& report) {
  std::vector<text::Sentence> sentences = text::split_sentences(report.text);
  std::set<int> focus_set;
  for (const Evidence& ev : prediction.evidence) focus_set.insert(ev.sentence_index);

  std::string html;
  html += "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" +
          html_escape(prediction.report_id) + "</title>\n";
  html += "<style>\n"
          ".sentence { margin: 2px 0; }\n"
          ".focus { background: #fff3cd; }\n"
          ".code { font-weight: bold; font-family: monospace; }\n"
          ".evidence { border-left: 3px solid #888; margin: 8px 0; padding: 4px 8px; }\n"
          "</style></head><body>\n";
  html += "<h2>Report " + html_escape(prediction.report_id) + "</h2>\n";
  html += "<p>Predicted codes:";
  for (const std::string& c : prediction.codes)
    html += " <span class=\"code\">" + html_escape(c) + "</span>";
  html += prediction.fallback_used ? " <em>(fallback focus)</em>" : "";
  html += "</p>\n";
  if (!report.r4v.empty())
    html += "<p>Reason for visit: " + html_escape(report.r4v) + "</p>\n";

  html += "<h3>Document</h3>\n<div>\n";
  for (size_t i = 0; i < sentences.size(); ++i) {
    bool focus = focus_set.count(static_cast<int>(i)) > 0;
    html += "<div class=\"sentence" + std::string(focus ? " focus" : "") + "\">" +
            html_escape(sentences[i].text) + "</div>\n";
  }
  html += "</div>\n<h3>Evidence</h3>\n";

  for (const Evidence& ev : prediction.evidence) {
    html += "<div class=\"evidence\"><span class=\"code\">" + html_escape(ev.code) +
            "</span> &mdash; sentence " + std::to_string(ev.sentence_index) + "<br>\n";
    if (ev.attention.empty()) {
      html += html_escape(ev.sentence_text) + "\n";
    } else {
      double max_a = 0.0;
      for (double a : ev.attention) max_a = std::max(max_a, a);
      for (size_t t = 0; t < ev.tokens.size(); ++t) {
        double intensity = max_a > 0.0 ? ev.attention[t] / max_a : 0.0;
        html += "<span style=\"background: rgba(255,82,82," +
                fmt3(0.05 + 0.80 * intensity) + ")\" title=\"" + fmt3(ev.attention[t]) +
                "\">" + html_escape(ev.tokens[t]) + "</span> ";
      }
      html += "\n";
    }
    html += "</div>\n";
  }
  html += "</body></html>\n";
  return html;
}

std::string prediction_to_json_line(const Prediction& p) {
  json evidence = json::array();
  for (const Evidence& ev : p.evidence) {
    json e = {{"sentence_index", ev.sentence_index},
              {"sentence", ev.sentence_text},
              {"tokens", ev.tokens},
              {"code", ev.code}};
    if (!ev.attention.empty()) e["attention"] = ev.attention;
    evidence.push_back(std::move(e));
  }
  json j = {{"id", p.report_id},
            {"codes", p.codes},
            {"fallback_used", p.fallback_used},
            {"evidence", evidence}};
  return j.dump();
}

Prediction prediction_from_json_line(const std::string& line) {
  json j = json::parse(line);
  Prediction p;
  p.report_id = j.at("id").get<std::string>();
  p.codes = j.at("codes").get<std::vector<std::string>>();
  p.fallback_used = j.value("fallback_used", false);
  for (const json& e : j.value("evidence", json::array())) {
    Evidence ev;
    ev.sentence_index = e.at("sentence_index").get<int>();
    ev.sentence_text = e.value("sentence", std::string());
    ev.tokens = e.value("tokens", std::vector<std::string>());
    if (e.contains("attention")) ev.attention = e["attention"].get<std::vector<double>>();
    ev.code = e.at("code").get<std::string>();
    p.evidence.push_back(std::move(ev));
  }
  return p;
}

void save_predictions(const std::vector<Prediction>& preds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write predictions file: " + path);
  for (const Prediction& p : preds) out << prediction_to_json_line(p) << "\n";
}

std::vector<Prediction> load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open predictions file: " + path);
  std::vector<Prediction> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (line.empty()) continue;
    try {
      out.push_back(prediction_from_json_line(line));
    } catch (const json::exception& e) {
      throw DataError("predictions line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string explanation_file_name(const std::string& report_id) {
  std::string name;
  for (char c : report_id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '-' || c == '_' || c == '.';
    name.push_back(ok ? c : '_');
  }
  return name + ".html";
}

}  // namespace hicd::pipeline
