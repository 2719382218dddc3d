#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "data/corpus.hpp"

namespace hicd::metrics {

// Per-instance predicted vs gold codesets. Codesets are singletons for the
// multi-class classifier, arbitrary sets end-to-end.
struct PredictionSet {
  struct Item {
    std::set<std::string> predicted;
    std::set<std::string> gold;
  };
  std::vector<Item> items;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

enum class Average { micro, macro, weighted };

// Standard set-based precision/recall/F1. Per-class zero denominators
// score 0. The class list is the union of predicted and gold codes.
Prf prf(const PredictionSet& preds, Average mode);

// Exact-match ratio.
double subset_accuracy(const PredictionSet& preds);

// Per-label P/R/F1 averaged with support weighting — the paper's reading
// of "instance-based". Numerically identical to Average::weighted; kept as
// its own entry point because reports name it separately.
Prf instance_prf(const PredictionSet& preds);

// The conventional per-sample average, offered under an explicit name for
// anyone expecting the standard definition.
Prf samples_prf(const PredictionSet& preds);

// Fraction of instances whose predicted set equals the gold set restricted
// in one direction; used by property tests.
double fraction_gold_subset_of_pred(const PredictionSet& preds);
double fraction_pred_subset_of_gold(const PredictionSet& preds);

// ---- annotation agreement ----------------------------------------------

struct DocAnnotations {
  std::string doc_id;
  std::vector<data::SpanAnnotation> items;
};
using AnnotationSet = std::vector<DocAnnotations>;

// Cohen's kappa over binary (document, code) decisions, restricted to
// codes either coder used anywhere. Both sets must cover the same
// documents.
double cohens_kappa(const AnnotationSet& a, const AnnotationSet& b);

struct MergeResult {
  AnnotationSet merged;
  std::vector<std::string> escalated_doc_ids;   // resolved by the senior coder
  std::vector<std::string> unresolved_doc_ids;  // escalated, no senior annotation
};

// Two-coder merge: same-code overlapping spans unite; any unmatched
// annotation escalates the document to the senior coder's version.
MergeResult merge_annotations(const AnnotationSet& a, const AnnotationSet& b,
                              const AnnotationSet* senior);

// ---- report emission -----------------------------------------------------

// Stable key names:
//   multiclass: accuracy, micro/macro/weighted -> {precision, recall, f1}
//   multilabel: subset_accuracy, micro/instance -> {precision, recall, f1}
nlohmann::json multiclass_report(const PredictionSet& preds);
nlohmann::json multilabel_report(const PredictionSet& preds);

}  // namespace hicd::metrics
