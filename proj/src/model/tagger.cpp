#include "model/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "common/error.hpp"
#include "model/checkpoint.hpp"

namespace hicd::model {

using num::Vec;

void TaggerParams::init(int input_dim, int hidden, num::Rng& rng) {
  lstm.init(input_dim, hidden, rng);
  w_out = num::Matrix(2, hidden);
  b_out = num::Matrix(2, 1);
  num::init_uniform(w_out, hidden, rng);
}

std::vector<num::ParamRef> TaggerParams::refs() {
  auto r = lstm.refs("lstm");
  r.push_back({"w_out", &w_out});
  r.push_back({"b_out", &b_out});
  return r;
}

void TaggerGrads::init_like(const TaggerParams& p) {
  lstm.init_like(p.lstm);
  w_out = num::Matrix(p.w_out.rows, p.w_out.cols);
  b_out = num::Matrix(p.b_out.rows, p.b_out.cols);
}

void TaggerGrads::zero() {
  lstm.zero();
  w_out.zero();
  b_out.zero();
}

std::vector<num::ParamRef> TaggerGrads::refs() {
  auto r = lstm.refs("lstm");
  r.push_back({"w_out", &w_out});
  r.push_back({"b_out", &b_out});
  return r;
}

Vec encode_sentence(const std::vector<std::string>& sentence_tokens,
                    const std::vector<std::string>& r4v_tokens,
                    const text::EmbeddingTable& table) {
  return num::concat(text::mean_embedding(sentence_tokens, table),
                     text::mean_embedding(r4v_tokens, table));
}

namespace {

struct TaggerForward {
  std::vector<Vec> inputs;
  num::LstmTrace trace;
  std::vector<std::array<double, 2>> log_probs;
  std::vector<Vec> probs;
};

TaggerForward tagger_forward(const std::vector<std::vector<std::string>>& sentence_tokens,
                             const std::vector<std::string>& r4v_tokens,
                             const TaggerParams& params, const text::EmbeddingTable& table) {
  if (sentence_tokens.empty())
    throw std::invalid_argument("tag_report: report has no sentences");
  TaggerForward fwd;
  fwd.inputs.reserve(sentence_tokens.size());
  for (const auto& toks : sentence_tokens)
    fwd.inputs.push_back(encode_sentence(toks, r4v_tokens, table));
  if (static_cast<int>(fwd.inputs[0].size()) != params.input_dim())
    throw std::invalid_argument("tag_report: embedding dimension does not match parameters");
  fwd.trace = num::lstm_run(params.lstm, fwd.inputs);
  for (const Vec& h : fwd.trace.h) {
    Vec logits = num::linear(params.w_out, h, params.b_out);
    Vec lp = num::log_softmax(logits);
    fwd.log_probs.push_back({lp[0], lp[1]});
    fwd.probs.push_back(num::softmax(logits));
  }
  return fwd;
}

}  // namespace

TagResult tag_report(const std::vector<std::vector<std::string>>& sentence_tokens,
                     const std::vector<std::string>& r4v_tokens, const TaggerParams& params,
                     const text::EmbeddingTable& table) {
  TaggerForward fwd = tagger_forward(sentence_tokens, r4v_tokens, params, table);
  TagResult out;
  for (size_t i = 0; i < fwd.log_probs.size(); ++i) {
    out.log_probs.push_back(fwd.log_probs[i]);
    out.focus_prob.push_back(fwd.probs[i][1]);
    // Ties break toward class 0.
    out.tags.push_back(fwd.log_probs[i][1] > fwd.log_probs[i][0] ? 1 : 0);
  }
  return out;
}

double tagger_loss(const std::vector<std::array<double, 2>>& log_probs,
                   const std::vector<int>& gold, double w0, double w1) {
  if (log_probs.size() != gold.size())
    throw std::invalid_argument("tagger_loss: length mismatch");
  if (log_probs.empty()) throw std::invalid_argument("tagger_loss: empty input");
  double total = 0.0, weight = 0.0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] != 0 && gold[i] != 1)
      throw std::invalid_argument("tagger_loss: gold tag outside {0,1}");
    double w = gold[i] == 0 ? w0 : w1;
    total += -w * log_probs[i][gold[i]];
    weight += w;
  }
  return total / weight;
}

TaggerExampleLoss tagger_example_grads(const data::TaggerExample& example,
                                       const TaggerParams& params,
                                       const text::EmbeddingTable& table, double w0, double w1,
                                       TaggerGrads& grads, num::Matrix* emb_grads) {
  TaggerForward fwd = tagger_forward(example.sentence_tokens, example.r4v_tokens, params, table);
  const size_t M = fwd.inputs.size();
  if (example.focus.size() != M)
    throw std::invalid_argument("tagger_example_grads: focus labels do not match sentences");

  TaggerExampleLoss result;
  std::vector<Vec> dh(M);
  for (size_t i = 0; i < M; ++i) {
    int y = example.focus[i];
    if (y != 0 && y != 1)
      throw std::invalid_argument("tagger_example_grads: gold tag outside {0,1}");
    double w = y == 0 ? w0 : w1;
    result.weighted_nll += -w * fwd.log_probs[i][y];
    result.weight += w;

    // d(-w log p_y)/dlogits = w (p - onehot(y))
    Vec dlogits(2);
    dlogits[0] = w * (fwd.probs[i][0] - (y == 0 ? 1.0 : 0.0));
    dlogits[1] = w * (fwd.probs[i][1] - (y == 1 ? 1.0 : 0.0));
    dh[i] = num::linear_backward(params.w_out, fwd.trace.h[i], dlogits, grads.w_out,
                                 grads.b_out);
  }

  std::vector<Vec> dinputs;
  num::lstm_backward(params.lstm, fwd.trace, dh, grads.lstm,
                     emb_grads ? &dinputs : nullptr);

  if (emb_grads) {
    const int d = table.dim();
    for (size_t i = 0; i < M; ++i) {
      const auto& toks = example.sentence_tokens[i];
      if (!toks.empty()) {
        double inv = 1.0 / static_cast<double>(toks.size());
        for (const std::string& tok : toks) {
          int id = table.lookup_id(tok);
          for (int c = 0; c < d; ++c) (*emb_grads)(id, c) += inv * dinputs[i][c];
        }
      }
      if (!example.r4v_tokens.empty()) {
        double inv = 1.0 / static_cast<double>(example.r4v_tokens.size());
        for (const std::string& tok : example.r4v_tokens) {
          int id = table.lookup_id(tok);
          for (int c = 0; c < d; ++c) (*emb_grads)(id, c) += inv * dinputs[i][d + c];
        }
      }
    }
  }
  return result;
}

double tagger_validation_macro_f1(const std::vector<data::TaggerExample>& examples,
                                  const TaggerParams& params,
                                  const text::EmbeddingTable& table) {
  // Binary per-class F1 averaged over {0, 1}.
  long long tp[2] = {0, 0}, fp[2] = {0, 0}, fn[2] = {0, 0};
  for (const auto& ex : examples) {
    if (ex.sentence_tokens.empty()) continue;
    TagResult tags = tag_report(ex.sentence_tokens, ex.r4v_tokens, params, table);
    for (size_t i = 0; i < ex.focus.size(); ++i) {
      int y = ex.focus[i], p = tags.tags[i];
      if (p == y) {
        tp[y]++;
      } else {
        fp[p]++;
        fn[y]++;
      }
    }
  }
  double macro = 0.0;
  for (int c = 0; c < 2; ++c) {
    double precision = tp[c] + fp[c] == 0 ? 0.0
                                          : static_cast<double>(tp[c]) /
                                                static_cast<double>(tp[c] + fp[c]);
    double recall = tp[c] + fn[c] == 0
                        ? 0.0
                        : static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fn[c]);
    double f1 = precision + recall == 0 ? 0.0
                                        : 2.0 * precision * recall / (precision + recall);
    macro += f1;
  }
  return macro / 2.0;
}

TrainedTagger train_tagger(const std::vector<data::TaggerExample>& train,
                           const std::vector<data::TaggerExample>& validation,
                           const text::EmbeddingTable& table, const TaggerTrainOptions& opts) {
  if (train.empty()) throw ConfigError("train_tagger: empty training set");

  long long n_focus = 0, n_other = 0;
  for (const auto& ex : train)
    for (int y : ex.focus) (y == 1 ? n_focus : n_other)++;
  if (n_focus == 0)
    throw ConfigError("train_tagger: training set has no focus sentences");

  double w0 = opts.class_weight_0, w1 = opts.class_weight_1;
  if (w0 < 0.0 || w1 < 0.0) {
    // Inverse class frequency, normalized to mean 1.
    double total = static_cast<double>(n_focus + n_other);
    double raw0 = total / (2.0 * static_cast<double>(std::max<long long>(1, n_other)));
    double raw1 = total / (2.0 * static_cast<double>(std::max<long long>(1, n_focus)));
    double mean = (raw0 + raw1) / 2.0;
    w0 = raw0 / mean;
    w1 = raw1 / mean;
  }

  TrainedTagger out;
  out.table = table;
  out.w0 = w0;
  out.w1 = w1;

  num::Rng rng(opts.seed);
  out.params.init(2 * table.dim(), opts.hidden, rng);

  TaggerGrads grads;
  grads.init_like(out.params);
  num::Matrix emb_grads;
  if (opts.finetune_embeddings) {
    out.table.set_frozen(false);
    emb_grads = num::Matrix(out.table.vectors().rows, out.table.vectors().cols);
  }

  auto param_refs = out.params.refs();
  auto grad_refs = grads.refs();
  if (opts.finetune_embeddings) {
    param_refs.push_back({"embeddings", &out.table.vectors()});
    grad_refs.push_back({"embeddings", &emb_grads});
  }
  num::AdamState adam;
  adam.init(param_refs, {opts.learning_rate, 0.9, 0.999, 1e-8});

  TaggerParams best = out.params;
  text::EmbeddingTable best_table = out.table;
  double best_metric = -1.0;
  int best_epoch = 0;

  std::vector<int> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_nll = 0.0, epoch_weight = 0.0;
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(opts.batch_size)) {
      size_t end = std::min(order.size(), start + static_cast<size_t>(opts.batch_size));
      grads.zero();
      if (opts.finetune_embeddings) emb_grads.zero();
      double batch_weight = 0.0;
      for (size_t k = start; k < end; ++k) {
        const auto& ex = train[order[k]];
        if (ex.sentence_tokens.empty()) continue;
        TaggerExampleLoss l = tagger_example_grads(
            ex, out.params, out.table, w0, w1, grads,
            opts.finetune_embeddings ? &emb_grads : nullptr);
        epoch_nll += l.weighted_nll;
        epoch_weight += l.weight;
        batch_weight += l.weight;
      }
      if (batch_weight == 0.0) continue;
      for (const num::ParamRef& g : grad_refs)
        for (double& v : g.value->a) v /= batch_weight;
      num::adam_step(param_refs, grad_refs, adam);
    }

    double val_metric =
        validation.empty() ? 0.0
                           : tagger_validation_macro_f1(validation, out.params, out.table);
    out.trace.push_back({epoch, epoch_weight == 0.0 ? 0.0 : epoch_nll / epoch_weight,
                         val_metric});
    if (val_metric > best_metric) {
      best_metric = val_metric;
      best_epoch = epoch;
      best = out.params;
      best_table = out.table;
    }
  }

  out.params = best;
  out.table = best_table;
  out.best_epoch = best_epoch;
  // Round through f32 so the in-memory model matches its checkpoint, then
  // report metrics for exactly what will be saved.
  quantize_f32(out.params.refs());
  quantize_f32(out.table.vectors());
  out.best_val_macro_f1 =
      validation.empty() ? 0.0
                         : tagger_validation_macro_f1(validation, out.params, out.table);
  return out;
}

}  // namespace hicd::model
