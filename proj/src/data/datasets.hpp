#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "data/corpus.hpp"
#include "text/segment.hpp"

namespace hicd::data {

// Ordered code strings with a dense code <-> id bijection.
class LabelSpace {
 public:
  LabelSpace() = default;
  explicit LabelSpace(std::vector<std::string> codes);

  int id_of(const std::string& code) const;  // -1 when absent
  const std::string& code_of(int id) const { return codes_.at(id); }
  int size() const { return static_cast<int>(codes_.size()); }
  const std::vector<std::string>& codes() const { return codes_; }

 private:
  std::vector<std::string> codes_;
  std::map<std::string, int> ids_;
};

// Report-level split, disjoint and exhaustive; holds indices into
// Corpus::reports. Deterministic in (corpus order, ratios, seed).
struct Split {
  std::vector<int> train, validation, test;
};

Split split_corpus(const Corpus& corpus, const std::array<double, 3>& ratios, uint64_t seed);

struct LabelFilterReport {
  std::map<std::string, int> kept_counts;     // training-split counts
  std::map<std::string, int> dropped_counts;  // below min_count
  std::vector<std::string> removed_report_ids;  // left with empty gold sets
};

// Counts codes on the training split only; keeps codes with count >=
// min_count. Filtered codes are removed from annotations and gold sets in
// every split; reports left without gold codes are removed from their
// split and reported.
LabelSpace filter_labels(Corpus& corpus, Split& split, int min_count, LabelFilterReport* report);

// ---- level-one dataset --------------------------------------------------

struct TaggerExample {
  std::string report_id;
  std::vector<text::Sentence> sentences;
  std::vector<std::vector<std::string>> sentence_tokens;
  std::vector<std::string> r4v_tokens;
  std::vector<int> focus;  // 0/1 per sentence
};

struct DatasetWarnings {
  std::vector<std::string> messages;
};

// A sentence is focus iff any gold annotation span overlaps it.
// Annotations straddling a sentence boundary mark every overlapped
// sentence (warned). Annotations overlapping no sentence are warned.
std::vector<TaggerExample> build_tagger_dataset(const Corpus& corpus,
                                                const std::vector<int>& report_indices,
                                                DatasetWarnings* warnings);

// ---- level-two dataset --------------------------------------------------

struct ClassifierRecord {
  std::string report_id;
  int sentence_index = 0;
  std::vector<std::string> tokens;
  std::vector<double> alpha;  // binary attention target, |alpha| == |tokens|
  std::vector<std::string> r4v_tokens;
  std::string code;
  int label_id = -1;  // resolved against a LabelSpace by the trainer
};

struct ClassifierDatasetStats {
  int multi_code_sentences_excluded = 0;
  int empty_alpha_skipped = 0;
  int truncated_records = 0;
};

// One record per focus sentence carrying exactly one distinct code.
// Sentences annotated with more than one distinct code emit no record (the
// report itself stays in end-to-end evaluation). A token's target is 1 iff
// its span overlaps any annotated span with the record's code. Records
// longer than max_tokens are truncated.
std::vector<ClassifierRecord> build_classifier_dataset(const Corpus& corpus,
                                                       const std::vector<int>& report_indices,
                                                       int max_tokens,
                                                       ClassifierDatasetStats* stats,
                                                       DatasetWarnings* warnings);

}  // namespace hicd::data
