#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "data/datasets.hpp"
#include "num/tensor.hpp"
#include "text/embeddings.hpp"

namespace hicd::baseline {

// Uni- to tri-grams with document-frequency pruning, built from the
// training split only. Ids are dense in lexicographic n-gram order.
struct NgramVocabulary {
  std::vector<std::string> ngrams;
  std::map<std::string, int> ids;
  int min_df = 2;

  int id_of(const std::string& g) const {
    auto it = ids.find(g);
    return it == ids.end() ? -1 : it->second;
  }
  int size() const { return static_cast<int>(ngrams.size()); }
};

// Token streams for one report: one per sentence, plus the r4v tokens
// when enabled. N-grams do not cross stream boundaries.
std::vector<std::vector<std::string>> report_token_streams(const data::Report& report,
                                                           bool include_r4v);

std::vector<std::string> ngrams_of(const std::vector<std::string>& tokens);

NgramVocabulary build_ngram_vocab(const std::vector<std::vector<std::vector<std::string>>>& docs,
                                  int min_df);

// Sorted unique present-feature ids; unseen n-grams drop out.
std::vector<int> extract_ngrams(const std::vector<std::vector<std::string>>& streams,
                                const NgramVocabulary& vocab);

// One independent one-vs-rest logistic classifier per label over binary
// presence features.
struct BrModel {
  data::LabelSpace labels;
  NgramVocabulary vocab;
  num::Matrix w;  // labels x features
  num::Matrix b;  // labels x 1
  double threshold = 0.5;
  bool include_r4v = true;
  std::vector<std::string> warnings;
};

struct BrTrainOptions {
  int epochs = 200;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int min_df = 2;
  bool include_r4v = true;
};

BrModel train_br(const data::Corpus& corpus, const std::vector<int>& train_indices,
                 const data::LabelSpace& labels, const BrTrainOptions& opts);

// All labels with sigmoid score >= threshold; an empty set is allowed.
std::set<std::string> predict_br(const data::Report& report, const BrModel& model);

}  // namespace hicd::baseline
