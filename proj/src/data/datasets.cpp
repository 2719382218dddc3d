#include "data/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "common/error.hpp"
#include "num/tensor.hpp"

namespace hicd::data {

LabelSpace::LabelSpace(std::vector<std::string> codes) : codes_(std::move(codes)) {
  for (size_t i = 0; i < codes_.size(); ++i) {
    auto [it, inserted] = ids_.emplace(codes_[i], static_cast<int>(i));
    if (!inserted) throw std::invalid_argument("duplicate code in label space: " + codes_[i]);
  }
}

int LabelSpace::id_of(const std::string& code) const {
  auto it = ids_.find(code);
  return it == ids_.end() ? -1 : it->second;
}

Split split_corpus(const Corpus& corpus, const std::array<double, 3>& ratios, uint64_t seed) {
  double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("split ratios must sum to 1");

  std::vector<int> order(corpus.reports.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  num::Rng rng(seed);
  rng.shuffle(order);

  const auto n = static_cast<long long>(order.size());
  long long n_train = std::llround(ratios[0] * static_cast<double>(n));
  long long n_val = std::llround(ratios[1] * static_cast<double>(n));
  n_train = std::clamp<long long>(n_train, 0, n);
  n_val = std::clamp<long long>(n_val, 0, n - n_train);

  Split s;
  s.train.assign(order.begin(), order.begin() + n_train);
  s.validation.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  s.test.assign(order.begin() + n_train + n_val, order.end());
  return s;
}

LabelSpace filter_labels(Corpus& corpus, Split& split, int min_count,
                         LabelFilterReport* report) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");

  std::map<std::string, int> counts;
  for (int idx : split.train)
    for (const std::string& c : corpus.reports[idx].codes) counts[c]++;

  std::vector<std::string> kept;
  LabelFilterReport local;
  for (const auto& [code, count] : counts) {
    if (count >= min_count) {
      kept.push_back(code);
      local.kept_counts[code] = count;
    } else {
      local.dropped_counts[code] = count;
    }
  }
  LabelSpace space(kept);

  std::set<int> removed;
  for (size_t i = 0; i < corpus.reports.size(); ++i) {
    Report& r = corpus.reports[i];
    auto out_of_space = [&](const std::string& c) { return space.id_of(c) < 0; };
    bool had_codes = !r.codes.empty();
    std::erase_if(r.annotations,
                  [&](const SpanAnnotation& a) { return out_of_space(a.code); });
    std::erase_if(r.codes, out_of_space);
    if (had_codes && r.codes.empty()) {
      removed.insert(static_cast<int>(i));
      local.removed_report_ids.push_back(r.id);
    }
  }
  auto prune = [&](std::vector<int>& ids) {
    std::erase_if(ids, [&](int i) { return removed.count(i) > 0; });
  };
  prune(split.train);
  prune(split.validation);
  prune(split.test);

  if (report) *report = std::move(local);
  return space;
}

namespace {

bool spans_overlap(int64_t a_start, int64_t a_end, int64_t b_start, int64_t b_end) {
  return a_start < b_end && b_start < a_end;
}

}  // namespace

std::vector<TaggerExample> build_tagger_dataset(const Corpus& corpus,
                                                const std::vector<int>& report_indices,
                                                DatasetWarnings* warnings) {
  std::vector<TaggerExample> out;
  out.reserve(report_indices.size());
  for (int idx : report_indices) {
    const Report& r = corpus.reports[idx];
    TaggerExample ex;
    ex.report_id = r.id;
    ex.sentences = text::split_sentences(r.text);
    ex.r4v_tokens = text::token_strings(r.r4v);
    ex.focus.assign(ex.sentences.size(), 0);
    for (const text::Sentence& s : ex.sentences)
      ex.sentence_tokens.push_back(text::token_strings(s.text));

    for (const SpanAnnotation& a : r.annotations) {
      int hit = 0;
      for (size_t si = 0; si < ex.sentences.size(); ++si) {
        const text::Span& sp = ex.sentences[si].span;
        if (spans_overlap(a.start, a.end, sp.start, sp.end)) {
          ex.focus[si] = 1;
          hit++;
        }
      }
      if (warnings && hit > 1)
        warnings->messages.push_back("report '" + r.id + "': annotation [" +
                                     std::to_string(a.start) + ", " + std::to_string(a.end) +
                                     ") crosses a sentence boundary; labeling all " +
                                     std::to_string(hit) + " sentences focus");
      if (warnings && hit == 0)
        warnings->messages.push_back("report '" + r.id + "': annotation [" +
                                     std::to_string(a.start) + ", " + std::to_string(a.end) +
                                     ") overlaps no sentence");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<ClassifierRecord> build_classifier_dataset(const Corpus& corpus,
                                                       const std::vector<int>& report_indices,
                                                       int max_tokens,
                                                       ClassifierDatasetStats* stats,
                                                       DatasetWarnings* warnings) {
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
  ClassifierDatasetStats local;
  std::vector<ClassifierRecord> out;

  for (int idx : report_indices) {
    const Report& r = corpus.reports[idx];
    std::vector<text::Sentence> sentences = text::split_sentences(r.text);
    std::vector<std::string> r4v_tokens = text::token_strings(r.r4v);

    for (size_t si = 0; si < sentences.size(); ++si) {
      const text::Span& sp = sentences[si].span;
      std::vector<const SpanAnnotation*> here;
      std::set<std::string> distinct;
      for (const SpanAnnotation& a : r.annotations) {
        if (spans_overlap(a.start, a.end, sp.start, sp.end)) {
          here.push_back(&a);
          distinct.insert(a.code);
        }
      }
      if (here.empty()) continue;  // not a focus sentence
      if (distinct.size() > 1) {
        local.multi_code_sentences_excluded++;
        continue;
      }

      ClassifierRecord rec;
      rec.report_id = r.id;
      rec.sentence_index = static_cast<int>(si);
      rec.code = *distinct.begin();
      rec.r4v_tokens = r4v_tokens;

      std::vector<text::Token> tokens = text::tokenize(sentences[si].text);
      rec.tokens.reserve(tokens.size());
      rec.alpha.reserve(tokens.size());
      for (const text::Token& t : tokens) {
        // Token spans are sentence-relative; annotations are document
        // offsets.
        int64_t t_start = sp.start + t.span.start;
        int64_t t_end = sp.start + t.span.end;
        double a = 0.0;
        for (const SpanAnnotation* ann : here)
          if (spans_overlap(ann->start, ann->end, t_start, t_end)) a = 1.0;
        rec.tokens.push_back(t.surface);
        rec.alpha.push_back(a);
      }

      if (static_cast<int>(rec.tokens.size()) > max_tokens) {
        rec.tokens.resize(max_tokens);
        rec.alpha.resize(max_tokens);
        local.truncated_records++;
        if (warnings)
          warnings->messages.push_back("report '" + r.id + "' sentence " + std::to_string(si) +
                                       ": truncated to " + std::to_string(max_tokens) +
                                       " tokens");
      }

      bool any = false;
      for (double a : rec.alpha) any = any || a > 0.0;
      if (!any || rec.tokens.empty()) {
        local.empty_alpha_skipped++;
        if (warnings)
          warnings->messages.push_back("report '" + r.id + "' sentence " + std::to_string(si) +
                                       ": annotation covers no token; record skipped");
        continue;
      }
      out.push_back(std::move(rec));
    }
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace hicd::data
