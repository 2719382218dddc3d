#include "baseline/binary_relevance.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "num/layers.hpp"
#include "text/segment.hpp"

namespace hicd::baseline {

std::vector<std::vector<std::string>> report_token_streams(const data::Report& report,
                                                           bool include_r4v) {
  std::vector<std::vector<std::string>> streams;
  for (const text::Sentence& s : text::split_sentences(report.text))
    streams.push_back(text::token_strings(s.text));
  if (include_r4v) {
    std::vector<std::string> r4v = text::token_strings(report.r4v);
    if (!r4v.empty()) streams.push_back(std::move(r4v));
  }
  return streams;
}

std::vector<std::string> ngrams_of(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  const size_t n = tokens.size();
  for (size_t i = 0; i < n; ++i) {
    out.push_back(tokens[i]);
    if (i + 1 < n) out.push_back(tokens[i] + " " + tokens[i + 1]);
    if (i + 2 < n) out.push_back(tokens[i] + " " + tokens[i + 1] + " " + tokens[i + 2]);
  }
  return out;
}

NgramVocabulary build_ngram_vocab(const std::vector<std::vector<std::vector<std::string>>>& docs,
                                  int min_df) {
  std::map<std::string, int> df;
  for (const auto& streams : docs) {
    std::set<std::string> present;
    for (const auto& tokens : streams)
      for (std::string& g : ngrams_of(tokens)) present.insert(std::move(g));
    for (const std::string& g : present) df[g]++;
  }
  NgramVocabulary vocab;
  vocab.min_df = min_df;
  for (const auto& [g, count] : df)
    if (count >= min_df) {
      vocab.ids.emplace(g, static_cast<int>(vocab.ngrams.size()));
      vocab.ngrams.push_back(g);
    }
  return vocab;
}

std::vector<int> extract_ngrams(const std::vector<std::vector<std::string>>& streams,
                                const NgramVocabulary& vocab) {
  std::set<int> present;
  for (const auto& tokens : streams)
    for (const std::string& g : ngrams_of(tokens)) {
      int id = vocab.id_of(g);
      if (id >= 0) present.insert(id);
    }
  return std::vector<int>(present.begin(), present.end());
}

namespace {

double dot_sparse(const num::Matrix& w, int row, const std::vector<int>& features) {
  double acc = 0.0;
  for (int f : features) acc += w(row, f);
  return acc;
}

}  // namespace

BrModel train_br(const data::Corpus& corpus, const std::vector<int>& train_indices,
                 const data::LabelSpace& labels, const BrTrainOptions& opts) {
  if (train_indices.empty()) throw ConfigError("train_br: empty training set");

  std::vector<std::vector<std::vector<std::string>>> docs;
  docs.reserve(train_indices.size());
  for (int idx : train_indices)
    docs.push_back(report_token_streams(corpus.reports[idx], opts.include_r4v));

  BrModel model;
  model.labels = labels;
  model.include_r4v = opts.include_r4v;
  model.vocab = build_ngram_vocab(docs, opts.min_df);

  const int L = labels.size();
  const int V = model.vocab.size();
  model.w = num::Matrix(L, V);
  model.b = num::Matrix(L, 1);

  std::vector<std::vector<int>> features(docs.size());
  for (size_t i = 0; i < docs.size(); ++i) features[i] = extract_ngrams(docs[i], model.vocab);

  std::vector<std::vector<char>> y(static_cast<size_t>(L),
                                   std::vector<char>(docs.size(), 0));
  std::vector<long long> positives(L, 0);
  for (size_t i = 0; i < docs.size(); ++i)
    for (const std::string& c : corpus.reports[train_indices[i]].codes) {
      int id = labels.id_of(c);
      if (id >= 0) {
        y[id][i] = 1;
        positives[id]++;
      }
    }

  const double n_inv = 1.0 / static_cast<double>(docs.size());

  // Independent convex problems; plain full-batch gradient descent from a
  // zero start keeps each label's solution a function of its own targets
  // only.
  for (int l = 0; l < L; ++l) {
    if (positives[l] == 0) {
      model.warnings.push_back("label '" + labels.code_of(l) +
                               "' absent from training data; predicting negative always");
      model.b(l, 0) = -10.0;
      continue;
    }
    std::vector<double> wl(V, 0.0);
    double bl = 0.0;
    std::vector<double> grad(V);
    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double gb = 0.0;
      for (size_t i = 0; i < docs.size(); ++i) {
        double z = bl;
        for (int f : features[i]) z += wl[f];
        double err = (num::sigmoid(z) - (y[l][i] ? 1.0 : 0.0)) * n_inv;
        for (int f : features[i]) grad[f] += err;
        gb += err;
      }
      for (int f = 0; f < V; ++f)
        wl[f] -= opts.learning_rate * (grad[f] + opts.l2 * wl[f]);
      bl -= opts.learning_rate * gb;
    }
    for (int f = 0; f < V; ++f) model.w(l, f) = wl[f];
    model.b(l, 0) = bl;
  }
  return model;
}

std::set<std::string> predict_br(const data::Report& report, const BrModel& model) {
  std::vector<int> features =
      extract_ngrams(report_token_streams(report, model.include_r4v), model.vocab);
  std::set<std::string> codes;
  for (int l = 0; l < model.labels.size(); ++l) {
    double z = model.b(l, 0) + dot_sparse(model.w, l, features);
    if (num::sigmoid(z) >= model.threshold) codes.insert(model.labels.code_of(l));
  }
  return codes;
}

}  // namespace hicd::baseline
