#pragma once

#include <string>
#include <vector>

#include "model/model_io.hpp"

namespace hicd::pipeline {

// Why one code made it into the report's codeset: which sentence, and for
// attention variants, how the mass fell across its tokens.
struct Evidence {
  int sentence_index = 0;
  std::string sentence_text;
  std::vector<std::string> tokens;
  std::vector<double> attention;  // empty for the pooling variant
  std::string code;
};

struct Prediction {
  std::string report_id;
  std::vector<std::string> codes;  // sorted distinct union, never empty
  std::vector<Evidence> evidence;
  bool fallback_used = false;
};

// Index of the sentence with the highest focus probability; ties break
// toward the lowest index. Engaged when the tagger marks every sentence
// non-focus.
int fallback_focus(const std::vector<double>& focus_probs);

// Tag, classify each focus sentence, union the predicted codes. Checks
// embedding-hash compatibility between the two checkpoints.
Prediction predict_codeset(const data::Report& report, const model::TaggerModel& tagger,
                           const model::ClassifierModel& classifier);

std::string explain_text(const Prediction& prediction, const data::Report& report);
std::string explain_html(const Prediction& prediction, const data::Report& report);

// JSONL, one prediction per line, keys: codes, evidence, fallback_used, id.
std::string prediction_to_json_line(const Prediction& p);
Prediction prediction_from_json_line(const std::string& line);
void save_predictions(const std::vector<Prediction>& preds, const std::string& path);
std::vector<Prediction> load_predictions(const std::string& path);

// File name for a report's explanation (id sanitized for the filesystem).
std::string explanation_file_name(const std::string& report_id);

}  // namespace hicd::pipeline
