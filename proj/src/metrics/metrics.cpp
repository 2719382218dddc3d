#include "metrics/metrics.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <tuple>

namespace hicd::metrics {

namespace {

struct ClassCounts {
  long long tp = 0, fp = 0, fn = 0;
  long long support() const { return tp + fn; }
};

std::map<std::string, ClassCounts> count_per_class(const PredictionSet& preds) {
  std::map<std::string, ClassCounts> counts;
  for (const auto& item : preds.items) {
    for (const std::string& c : item.predicted) {
      if (item.gold.count(c))
        counts[c].tp++;
      else
        counts[c].fp++;
    }
    for (const std::string& c : item.gold)
      if (!item.predicted.count(c)) counts[c].fn++;
  }
  return counts;
}

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

Prf prf_from(double tp, double fp, double fn) {
  Prf r;
  r.precision = safe_div(tp, tp + fp);
  r.recall = safe_div(tp, tp + fn);
  r.f1 = safe_div(2.0 * r.precision * r.recall, r.precision + r.recall);
  return r;
}

void require_non_empty(const PredictionSet& preds) {
  if (preds.items.empty()) throw std::invalid_argument("empty prediction set");
}

}  // namespace

Prf prf(const PredictionSet& preds, Average mode) {
  require_non_empty(preds);
  auto counts = count_per_class(preds);

  if (mode == Average::micro) {
    double tp = 0, fp = 0, fn = 0;
    for (const auto& [code, c] : counts) {
      tp += static_cast<double>(c.tp);
      fp += static_cast<double>(c.fp);
      fn += static_cast<double>(c.fn);
    }
    return prf_from(tp, fp, fn);
  }

  double sum_p = 0, sum_r = 0, sum_f = 0, weight_total = 0;
  for (const auto& [code, c] : counts) {
    Prf per = prf_from(static_cast<double>(c.tp), static_cast<double>(c.fp),
                       static_cast<double>(c.fn));
    double w = (mode == Average::macro) ? 1.0 : static_cast<double>(c.support());
    sum_p += w * per.precision;
    sum_r += w * per.recall;
    sum_f += w * per.f1;
    weight_total += w;
  }
  Prf r;
  r.precision = safe_div(sum_p, weight_total);
  r.recall = safe_div(sum_r, weight_total);
  r.f1 = safe_div(sum_f, weight_total);
  return r;
}

double subset_accuracy(const PredictionSet& preds) {
  require_non_empty(preds);
  long long exact = 0;
  for (const auto& item : preds.items)
    if (item.predicted == item.gold) exact++;
  return static_cast<double>(exact) / static_cast<double>(preds.items.size());
}

Prf instance_prf(const PredictionSet& preds) { return prf(preds, Average::weighted); }

Prf samples_prf(const PredictionSet& preds) {
  require_non_empty(preds);
  double sum_p = 0, sum_r = 0, sum_f = 0;
  for (const auto& item : preds.items) {
    long long inter = 0;
    for (const std::string& c : item.predicted) inter += item.gold.count(c) ? 1 : 0;
    double p = safe_div(static_cast<double>(inter), static_cast<double>(item.predicted.size()));
    double r = safe_div(static_cast<double>(inter), static_cast<double>(item.gold.size()));
    sum_p += p;
    sum_r += r;
    sum_f += safe_div(2.0 * p * r, p + r);
  }
  double n = static_cast<double>(preds.items.size());
  return Prf{sum_p / n, sum_r / n, sum_f / n};
}

double fraction_gold_subset_of_pred(const PredictionSet& preds) {
  require_non_empty(preds);
  long long ok = 0;
  for (const auto& item : preds.items)
    if (std::includes(item.predicted.begin(), item.predicted.end(), item.gold.begin(),
                      item.gold.end()))
      ok++;
  return static_cast<double>(ok) / static_cast<double>(preds.items.size());
}

double fraction_pred_subset_of_gold(const PredictionSet& preds) {
  require_non_empty(preds);
  long long ok = 0;
  for (const auto& item : preds.items)
    if (std::includes(item.gold.begin(), item.gold.end(), item.predicted.begin(),
                      item.predicted.end()))
      ok++;
  return static_cast<double>(ok) / static_cast<double>(preds.items.size());
}

// ---- kappa ---------------------------------------------------------------

double cohens_kappa(const AnnotationSet& a, const AnnotationSet& b) {
  std::map<std::string, std::set<std::string>> a_codes, b_codes;
  std::set<std::string> docs_a, docs_b;
  for (const DocAnnotations& d : a) {
    docs_a.insert(d.doc_id);
    for (const auto& ann : d.items) a_codes[d.doc_id].insert(ann.code);
  }
  for (const DocAnnotations& d : b) {
    docs_b.insert(d.doc_id);
    for (const auto& ann : d.items) b_codes[d.doc_id].insert(ann.code);
  }
  if (docs_a != docs_b)
    throw std::invalid_argument("cohens_kappa: annotation sets cover different documents");
  if (docs_a.empty()) throw std::invalid_argument("cohens_kappa: no documents");

  std::set<std::string> code_universe;
  for (const auto& [doc, codes] : a_codes) code_universe.insert(codes.begin(), codes.end());
  for (const auto& [doc, codes] : b_codes) code_universe.insert(codes.begin(), codes.end());
  if (code_universe.empty())
    throw std::invalid_argument("cohens_kappa: neither coder used any code");

  // Binary decision per (document, candidate code).
  long long yes_yes = 0, yes_no = 0, no_yes = 0, no_no = 0;
  for (const std::string& doc : docs_a) {
    const auto& ca = a_codes[doc];
    const auto& cb = b_codes[doc];
    for (const std::string& code : code_universe) {
      bool ya = ca.count(code) > 0;
      bool yb = cb.count(code) > 0;
      if (ya && yb)
        yes_yes++;
      else if (ya && !yb)
        yes_no++;
      else if (!ya && yb)
        no_yes++;
      else
        no_no++;
    }
  }
  double n = static_cast<double>(yes_yes + yes_no + no_yes + no_no);
  double po = (static_cast<double>(yes_yes) + static_cast<double>(no_no)) / n;
  double pa_yes = static_cast<double>(yes_yes + yes_no) / n;
  double pb_yes = static_cast<double>(yes_yes + no_yes) / n;
  double pe = pa_yes * pb_yes + (1.0 - pa_yes) * (1.0 - pb_yes);
  if (pe == 1.0) return 1.0;  // both coders fully deterministic and identical
  return (po - pe) / (1.0 - pe);
}

// ---- merge ----------------------------------------------------------------

namespace {

bool overlap(const data::SpanAnnotation& x, const data::SpanAnnotation& y) {
  return x.start < y.end && y.start < x.end && x.code == y.code;
}

}  // namespace

MergeResult merge_annotations(const AnnotationSet& a, const AnnotationSet& b,
                              const AnnotationSet* senior) {
  std::map<std::string, const DocAnnotations*> by_id_b, by_id_senior;
  for (const DocAnnotations& d : b) by_id_b[d.doc_id] = &d;
  if (senior)
    for (const DocAnnotations& d : *senior) by_id_senior[d.doc_id] = &d;

  MergeResult result;
  for (const DocAnnotations& da : a) {
    auto itb = by_id_b.find(da.doc_id);
    if (itb == by_id_b.end())
      throw std::invalid_argument("merge_annotations: document '" + da.doc_id +
                                  "' missing from the second coder");
    const DocAnnotations& db = *itb->second;

    // Union-by-overlap on same-code spans: each connected component of
    // overlapping spans collapses to its covering span.
    std::vector<data::SpanAnnotation> pool;
    std::vector<int> owner;  // 0 = coder a, 1 = coder b
    for (const auto& ann : da.items) {
      pool.push_back(ann);
      owner.push_back(0);
    }
    for (const auto& ann : db.items) {
      pool.push_back(ann);
      owner.push_back(1);
    }

    std::vector<int> component(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) component[i] = static_cast<int>(i);
    // Tiny union-find over the pool.
    std::function<int(int)> find = [&](int x) {
      while (component[x] != x) x = component[x] = component[component[x]];
      return x;
    };
    for (size_t i = 0; i < pool.size(); ++i)
      for (size_t j = i + 1; j < pool.size(); ++j)
        if (overlap(pool[i], pool[j])) component[find(static_cast<int>(i))] =
            find(static_cast<int>(j));

    // A document is clean when every annotation from either coder overlaps
    // at least one from the other coder.
    bool clean = true;
    std::map<int, std::pair<bool, bool>> sides;  // component -> saw (a, b)
    for (size_t i = 0; i < pool.size(); ++i) {
      auto& s = sides[find(static_cast<int>(i))];
      if (owner[i] == 0) s.first = true;
      else s.second = true;
    }
    for (const auto& [root, s] : sides)
      if (!(s.first && s.second)) clean = false;
    if (pool.empty()) clean = true;

    if (clean) {
      std::map<int, data::SpanAnnotation> merged;
      for (size_t i = 0; i < pool.size(); ++i) {
        int root = find(static_cast<int>(i));
        auto it = merged.find(root);
        if (it == merged.end()) {
          merged[root] = pool[i];
        } else {
          it->second.start = std::min(it->second.start, pool[i].start);
          it->second.end = std::max(it->second.end, pool[i].end);
        }
      }
      DocAnnotations out;
      out.doc_id = da.doc_id;
      for (auto& [root, ann] : merged) out.items.push_back(ann);
      std::sort(out.items.begin(), out.items.end(),
                [](const data::SpanAnnotation& x, const data::SpanAnnotation& y) {
                  return std::tie(x.start, x.end, x.code) < std::tie(y.start, y.end, y.code);
                });
      result.merged.push_back(std::move(out));
      continue;
    }

    auto its = by_id_senior.find(da.doc_id);
    if (its != by_id_senior.end()) {
      result.escalated_doc_ids.push_back(da.doc_id);
      result.merged.push_back(*its->second);
    } else {
      result.unresolved_doc_ids.push_back(da.doc_id);
    }
  }
  return result;
}

// ---- reports ---------------------------------------------------------------

namespace {

nlohmann::json prf_json(const Prf& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

}  // namespace

nlohmann::json multiclass_report(const PredictionSet& preds) {
  Prf micro = prf(preds, Average::micro);
  nlohmann::json j;
  j["accuracy"] = micro.f1;  // singleton sets: micro P = R = F1 = accuracy
  j["micro"] = prf_json(micro);
  j["macro"] = prf_json(prf(preds, Average::macro));
  j["weighted"] = prf_json(prf(preds, Average::weighted));
  return j;
}

nlohmann::json multilabel_report(const PredictionSet& preds) {
  nlohmann::json j;
  j["subset_accuracy"] = subset_accuracy(preds);
  j["micro"] = prf_json(prf(preds, Average::micro));
  j["instance"] = prf_json(instance_prf(preds));
  return j;
}

}  // namespace hicd::metrics
