#include "model/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "common/error.hpp"
#include "model/checkpoint.hpp"

namespace hicd::model {

using num::Vec;

AttentionVariant variant_from_string(const std::string& s) {
  if (s == "pooling") return AttentionVariant::pooling;
  if (s == "vanilla-attention") return AttentionVariant::vanilla;
  if (s == "supervised-attention") return AttentionVariant::supervised;
  throw ConfigError("unknown variant '" + s +
                    "' (expected pooling, vanilla-attention or supervised-attention)");
}

std::string variant_to_string(AttentionVariant v) {
  switch (v) {
    case AttentionVariant::pooling: return "pooling";
    case AttentionVariant::vanilla: return "vanilla-attention";
    case AttentionVariant::supervised: return "supervised-attention";
  }
  return "?";
}

int ClassifierParams::context_dim() const {
  int fs = cfg.variant == AttentionVariant::pooling ? 2 * cfg.hidden : cfg.hidden;
  return fs + (cfg.use_r4v ? cfg.hidden : 0);
}

void ClassifierParams::init(int d, int labels, const ClassifierConfig& c, num::Rng& rng) {
  if (labels < 2) throw ConfigError("classifier needs a label space of size >= 2");
  cfg = c;
  label_count = labels;
  embed_dim = d;
  lstm_fs.init(d, c.hidden, rng);
  if (c.use_r4v) lstm_r4v.init(d, c.hidden, rng);
  if (c.variant != AttentionVariant::pooling) {
    w_att = num::Matrix(c.attention, c.hidden);
    b_att = num::Matrix(c.attention, 1);
    num::init_uniform(w_att, c.hidden, rng);
  }
  w_cls = num::Matrix(labels, context_dim());
  b_cls = num::Matrix(labels, 1);
  num::init_uniform(w_cls, context_dim(), rng);
}

std::vector<num::ParamRef> ClassifierParams::refs() {
  std::vector<num::ParamRef> r = lstm_fs.refs("lstm_fs");
  if (cfg.use_r4v) {
    auto rr = lstm_r4v.refs("lstm_r4v");
    r.insert(r.end(), rr.begin(), rr.end());
  }
  if (cfg.variant != AttentionVariant::pooling) {
    r.push_back({"w_att", &w_att});
    r.push_back({"b_att", &b_att});
  }
  r.push_back({"w_cls", &w_cls});
  r.push_back({"b_cls", &b_cls});
  return r;
}

void ClassifierGrads::init_like(const ClassifierParams& p) {
  lstm_fs.init_like(p.lstm_fs);
  if (p.cfg.use_r4v) lstm_r4v.init_like(p.lstm_r4v);
  if (p.cfg.variant != AttentionVariant::pooling) {
    w_att = num::Matrix(p.w_att.rows, p.w_att.cols);
    b_att = num::Matrix(p.b_att.rows, p.b_att.cols);
  }
  w_cls = num::Matrix(p.w_cls.rows, p.w_cls.cols);
  b_cls = num::Matrix(p.b_cls.rows, p.b_cls.cols);
}

void ClassifierGrads::zero() {
  lstm_fs.zero();
  if (lstm_r4v.w_ih.size() != 0) lstm_r4v.zero();
  if (w_att.size() != 0) {
    w_att.zero();
    b_att.zero();
  }
  w_cls.zero();
  b_cls.zero();
}

std::vector<num::ParamRef> ClassifierGrads::refs(const ClassifierParams& p) {
  std::vector<num::ParamRef> r = lstm_fs.refs("lstm_fs");
  if (p.cfg.use_r4v) {
    auto rr = lstm_r4v.refs("lstm_r4v");
    r.insert(r.end(), rr.begin(), rr.end());
  }
  if (p.cfg.variant != AttentionVariant::pooling) {
    r.push_back({"w_att", &w_att});
    r.push_back({"b_att", &b_att});
  }
  r.push_back({"w_cls", &w_cls});
  r.push_back({"b_cls", &b_cls});
  return r;
}

Vec attend(const std::vector<Vec>& hidden, const num::Matrix& w_att,
           const num::Matrix& b_att) {
  if (hidden.empty()) throw std::invalid_argument("attend: empty hidden sequence");
  const Vec& query = hidden.back();
  Vec scores(hidden.size());
  for (size_t t = 0; t < hidden.size(); ++t) {
    Vec u = num::tanh_vec(num::linear(w_att, hidden[t], b_att));
    double z = 0.0;
    for (size_t i = 0; i < u.size(); ++i) z += u[i] * query[i];
    scores[t] = z;
  }
  return num::softmax(scores);
}

double attention_loss(const Vec& alpha_hat, const Vec& alpha) {
  if (alpha_hat.size() != alpha.size())
    throw std::invalid_argument("attention_loss: length mismatch");
  double s = 0.0;
  for (size_t t = 0; t < alpha.size(); ++t) {
    double d = alpha_hat[t] - alpha[t];
    s += d * d;
  }
  return s;
}

Vec mean_max_pool(const std::vector<Vec>& hidden) {
  if (hidden.empty()) throw std::invalid_argument("mean_max_pool: empty hidden sequence");
  const size_t h = hidden[0].size();
  Vec out(2 * h, 0.0);
  for (size_t c = 0; c < h; ++c) {
    double acc = 0.0, mx = hidden[0][c];
    for (const Vec& v : hidden) {
      acc += v[c];
      mx = std::max(mx, v[c]);
    }
    out[c] = acc / static_cast<double>(hidden.size());
    out[h + c] = mx;
  }
  return out;
}

double joint_loss(double j_c, double j_a, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("joint_loss: negative lambda");
  return j_c + lambda * j_a;
}

Vec encode_r4v(const std::vector<std::string>& tokens, const num::LstmCellParams& params,
               const text::EmbeddingTable& table) {
  if (tokens.empty()) return Vec(params.hidden_size, 0.0);
  std::vector<Vec> inputs;
  inputs.reserve(tokens.size());
  for (const std::string& t : tokens) inputs.push_back(table.vector_for(t));
  num::LstmTrace trace = num::lstm_run(params, inputs);
  return trace.h.back();
}

namespace {

// Everything the backward pass needs from one record's forward run.
struct ClassifierForward {
  std::vector<Vec> x_fs;        // token embeddings (possibly truncated)
  num::LstmTrace trace_fs;
  std::vector<Vec> u;           // tanh projections, attention variants
  Vec alpha;                    // attention weights, empty for pooling
  std::vector<int> max_index;   // argmax per coordinate, pooling only
  std::vector<Vec> x_r4v;
  num::LstmTrace trace_r4v;     // run only when use_r4v and r4v non-empty
  Vec e_fs, e_r4v, ctx;
  Vec probs;
};

ClassifierForward classifier_forward(const std::vector<std::string>& tokens_in,
                                     const std::vector<std::string>& r4v_tokens,
                                     const ClassifierParams& p,
                                     const text::EmbeddingTable& table) {
  if (tokens_in.empty())
    throw std::invalid_argument("classify: empty focus sentence");
  std::vector<std::string> tokens = tokens_in;
  if (static_cast<int>(tokens.size()) > p.cfg.max_tokens)
    tokens.resize(p.cfg.max_tokens);

  ClassifierForward f;
  f.x_fs.reserve(tokens.size());
  for (const std::string& t : tokens) f.x_fs.push_back(table.vector_for(t));
  f.trace_fs = num::lstm_run(p.lstm_fs, f.x_fs);
  const std::vector<Vec>& h = f.trace_fs.h;
  const int hd = p.cfg.hidden;

  if (p.cfg.variant == AttentionVariant::pooling) {
    f.e_fs = mean_max_pool(h);
    f.max_index.assign(hd, 0);
    for (int c = 0; c < hd; ++c) {
      int arg = 0;
      for (size_t t = 1; t < h.size(); ++t)
        if (h[t][c] > h[arg][c]) arg = static_cast<int>(t);
      f.max_index[c] = arg;
    }
  } else {
    const Vec& query = h.back();
    Vec scores(h.size());
    f.u.resize(h.size());
    for (size_t t = 0; t < h.size(); ++t) {
      f.u[t] = num::tanh_vec(num::linear(p.w_att, h[t], p.b_att));
      double z = 0.0;
      for (size_t i = 0; i < f.u[t].size(); ++i) z += f.u[t][i] * query[i];
      scores[t] = z;
    }
    f.alpha = num::softmax(scores);
    f.e_fs = num::weighted_sum(h, f.alpha);
  }

  if (p.cfg.use_r4v) {
    if (!r4v_tokens.empty()) {
      f.x_r4v.reserve(r4v_tokens.size());
      for (const std::string& t : r4v_tokens) f.x_r4v.push_back(table.vector_for(t));
      f.trace_r4v = num::lstm_run(p.lstm_r4v, f.x_r4v);
      f.e_r4v = f.trace_r4v.h.back();
    } else {
      f.e_r4v = Vec(hd, 0.0);
    }
    f.ctx = num::concat(f.e_fs, f.e_r4v);
  } else {
    f.ctx = f.e_fs;
  }

  f.probs = num::softmax(num::linear(p.w_cls, f.ctx, p.b_cls));
  return f;
}

Vec alpha_target(const data::ClassifierRecord& record, size_t length, bool normalize) {
  Vec target(record.alpha.begin(), record.alpha.end());
  target.resize(length, 0.0);  // truncation-safe
  if (normalize) {
    double sum = 0.0;
    for (double v : target) sum += v;
    if (sum > 0.0)
      for (double& v : target) v /= sum;
  }
  return target;
}

}  // namespace

ClassifyResult classify(const std::vector<std::string>& tokens,
                        const std::vector<std::string>& r4v_tokens,
                        const ClassifierParams& params, const text::EmbeddingTable& table) {
  ClassifierForward f = classifier_forward(tokens, r4v_tokens, params, table);
  return {f.probs, f.alpha};
}

ClassifierExampleLoss classifier_example_grads(const data::ClassifierRecord& record,
                                               const ClassifierParams& p,
                                               const text::EmbeddingTable& table,
                                               ClassifierGrads& grads, num::Matrix* emb_grads) {
  if (record.label_id < 0 || record.label_id >= p.label_count)
    throw std::invalid_argument("classifier_example_grads: label id out of range");
  ClassifierForward f = classifier_forward(record.tokens, record.r4v_tokens, p, table);
  const std::vector<Vec>& h = f.trace_fs.h;
  const size_t T = h.size();
  const int hd = p.cfg.hidden;

  ClassifierExampleLoss loss;
  loss.j_c = -std::log(std::max(f.probs[record.label_id], 1e-300));

  Vec target;
  if (p.cfg.variant != AttentionVariant::pooling) {
    target = alpha_target(record, T, p.cfg.normalize_alpha);
    loss.j_a = attention_loss(f.alpha, target);
  }

  // d(J_c)/dlogits = p - onehot(y)
  Vec dlogits = f.probs;
  dlogits[record.label_id] -= 1.0;
  Vec dctx = num::linear_backward(p.w_cls, f.ctx, dlogits, grads.w_cls, grads.b_cls);

  const int fs_dim = p.cfg.variant == AttentionVariant::pooling ? 2 * hd : hd;
  Vec de_fs(dctx.begin(), dctx.begin() + fs_dim);
  Vec de_r4v;
  if (p.cfg.use_r4v) de_r4v.assign(dctx.begin() + fs_dim, dctx.end());

  std::vector<Vec> dh(T, Vec(hd, 0.0));

  if (p.cfg.variant == AttentionVariant::pooling) {
    double invT = 1.0 / static_cast<double>(T);
    for (size_t t = 0; t < T; ++t)
      for (int c = 0; c < hd; ++c) dh[t][c] += de_fs[c] * invT;
    for (int c = 0; c < hd; ++c) dh[f.max_index[c]][c] += de_fs[hd + c];
  } else {
    // e_fs = sum_t alpha_t h_t
    Vec dalpha(T, 0.0);
    for (size_t t = 0; t < T; ++t) {
      double acc = 0.0;
      for (int c = 0; c < hd; ++c) {
        acc += de_fs[c] * h[t][c];
        dh[t][c] += f.alpha[t] * de_fs[c];
      }
      dalpha[t] = acc;
    }
    // Attention supervision: d(lambda * sum (a - t)^2)/da = 2 lambda (a - t)
    if (p.cfg.variant == AttentionVariant::supervised) {
      for (size_t t = 0; t < T; ++t)
        dalpha[t] += 2.0 * p.cfg.lambda * (f.alpha[t] - target[t]);
    }
    Vec dz = num::softmax_backward(f.alpha, dalpha);
    // z_t = u_t . h_T
    Vec dquery(hd, 0.0);
    for (size_t t = 0; t < T; ++t) {
      Vec du(f.u[t].size());
      for (size_t i = 0; i < du.size(); ++i) {
        du[i] = dz[t] * h[T - 1][i];
        dquery[i] += dz[t] * f.u[t][i];
      }
      Vec da = num::tanh_backward(f.u[t], du);
      Vec dht = num::linear_backward(p.w_att, h[t], da, grads.w_att, grads.b_att);
      for (int c = 0; c < hd; ++c) dh[t][c] += dht[c];
    }
    for (int c = 0; c < hd; ++c) dh[T - 1][c] += dquery[c];
  }

  std::vector<Vec> dx_fs;
  num::lstm_backward(p.lstm_fs, f.trace_fs, dh, grads.lstm_fs,
                     emb_grads ? &dx_fs : nullptr);

  if (p.cfg.use_r4v && !f.x_r4v.empty()) {
    std::vector<Vec> dh_r4v(f.x_r4v.size());
    dh_r4v.back() = de_r4v;
    std::vector<Vec> dx_r4v;
    num::lstm_backward(p.lstm_r4v, f.trace_r4v, dh_r4v, grads.lstm_r4v,
                       emb_grads ? &dx_r4v : nullptr);
    if (emb_grads)
      for (size_t t = 0; t < record.r4v_tokens.size() && t < dx_r4v.size(); ++t) {
        int id = table.lookup_id(record.r4v_tokens[t]);
        for (int c = 0; c < table.dim(); ++c) (*emb_grads)(id, c) += dx_r4v[t][c];
      }
  }
  if (emb_grads)
    for (size_t t = 0; t < dx_fs.size(); ++t) {
      int id = table.lookup_id(record.tokens[t]);
      for (int c = 0; c < table.dim(); ++c) (*emb_grads)(id, c) += dx_fs[t][c];
    }

  return loss;
}

double classifier_accuracy(const std::vector<data::ClassifierRecord>& records,
                           const ClassifierParams& params, const text::EmbeddingTable& table,
                           const data::LabelSpace& labels) {
  if (records.empty()) return 0.0;
  long long correct = 0;
  for (const auto& rec : records) {
    ClassifyResult r = classify(rec.tokens, rec.r4v_tokens, params, table);
    int arg = 0;
    for (size_t i = 1; i < r.label_probs.size(); ++i)
      if (r.label_probs[i] > r.label_probs[arg]) arg = static_cast<int>(i);
    int gold = rec.label_id >= 0 ? rec.label_id : labels.id_of(rec.code);
    if (arg == gold) correct++;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

double classifier_mean_attention_loss(const std::vector<data::ClassifierRecord>& records,
                                      const ClassifierParams& params,
                                      const text::EmbeddingTable& table) {
  if (params.cfg.variant == AttentionVariant::pooling)
    throw std::invalid_argument("attention loss undefined for the pooling variant");
  if (records.empty()) return 0.0;
  double total = 0.0;
  for (const auto& rec : records) {
    ClassifyResult r = classify(rec.tokens, rec.r4v_tokens, params, table);
    Vec target = alpha_target(rec, r.alpha.size(), params.cfg.normalize_alpha);
    total += attention_loss(r.alpha, target);
  }
  return total / static_cast<double>(records.size());
}

TrainedClassifier train_classifier(const std::vector<data::ClassifierRecord>& train,
                                   const std::vector<data::ClassifierRecord>& validation,
                                   const data::LabelSpace& labels,
                                   const text::EmbeddingTable& table,
                                   const ClassifierConfig& cfg,
                                   const ClassifierTrainOptions& opts) {
  if (train.empty()) throw ConfigError("train_classifier: empty training set");
  if (cfg.lambda < 0.0) throw ConfigError("train_classifier: negative lambda");

  // Resolve label ids; reject unknown labels with the offending rows.
  auto resolve = [&](std::vector<data::ClassifierRecord> recs, const char* which) {
    std::string bad;
    int bad_count = 0;
    for (auto& r : recs) {
      r.label_id = labels.id_of(r.code);
      if (r.label_id < 0) {
        if (bad_count < 8)
          bad += (bad.empty() ? "" : ", ") + r.report_id + "#" +
                 std::to_string(r.sentence_index) + " ('" + r.code + "')";
        bad_count++;
      }
    }
    if (bad_count > 0)
      throw DataError(std::string(which) + " records with labels outside the label space: " +
                      bad + (bad_count > 8 ? ", ..." : ""));
    return recs;
  };
  std::vector<data::ClassifierRecord> train_r = resolve(train, "training");
  std::vector<data::ClassifierRecord> val_r = resolve(validation, "validation");

  if (cfg.variant == AttentionVariant::supervised)
    for (const auto& r : train_r)
      if (r.alpha.size() != r.tokens.size())
        throw DataError("supervised attention requires an alpha target per token (report '" +
                        r.report_id + "')");

  TrainedClassifier out;
  out.table = table;
  out.labels = labels;

  num::Rng rng(opts.seed);
  out.params.init(table.dim(), labels.size(), cfg, rng);

  ClassifierGrads grads;
  grads.init_like(out.params);
  num::Matrix emb_grads;
  if (opts.finetune_embeddings) {
    out.table.set_frozen(false);
    emb_grads = num::Matrix(out.table.vectors().rows, out.table.vectors().cols);
  }

  auto param_refs = out.params.refs();
  auto grad_refs = grads.refs(out.params);
  if (opts.finetune_embeddings) {
    param_refs.push_back({"embeddings", &out.table.vectors()});
    grad_refs.push_back({"embeddings", &emb_grads});
  }
  num::AdamState adam;
  adam.init(param_refs, {opts.learning_rate, 0.9, 0.999, 1e-8});

  ClassifierParams best = out.params;
  text::EmbeddingTable best_table = out.table;
  double best_metric = -1.0;
  int best_epoch = 0;

  std::vector<int> order(train_r.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    rng.shuffle(order);
    double sum_jc = 0.0, sum_ja = 0.0;
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(opts.batch_size)) {
      size_t end = std::min(order.size(), start + static_cast<size_t>(opts.batch_size));
      grads.zero();
      if (opts.finetune_embeddings) emb_grads.zero();
      for (size_t k = start; k < end; ++k) {
        ClassifierExampleLoss l =
            classifier_example_grads(train_r[order[k]], out.params, out.table, grads,
                                     opts.finetune_embeddings ? &emb_grads : nullptr);
        sum_jc += l.j_c;
        sum_ja += l.j_a;
      }
      double inv = 1.0 / static_cast<double>(end - start);
      for (const num::ParamRef& g : grad_refs)
        for (double& v : g.value->a) v *= inv;
      num::adam_step(param_refs, grad_refs, adam);
    }

    double val_acc = val_r.empty()
                         ? 0.0
                         : classifier_accuracy(val_r, out.params, out.table, labels);
    double n = static_cast<double>(train_r.size());
    ClassifierEpochStats stats;
    stats.epoch = epoch;
    stats.loss_cls = sum_jc / n;
    stats.loss_att = sum_ja / n;
    stats.loss = stats.loss_cls + cfg.lambda * stats.loss_att;
    stats.val_accuracy = val_acc;
    out.trace.push_back(stats);

    if (val_acc > best_metric) {
      best_metric = val_acc;
      best_epoch = epoch;
      best = out.params;
      best_table = out.table;
    }
  }

  out.params = best;
  out.table = best_table;
  out.best_epoch = best_epoch;
  quantize_f32(out.params.refs());
  quantize_f32(out.table.vectors());
  out.best_val_accuracy =
      val_r.empty() ? 0.0 : classifier_accuracy(val_r, out.params, out.table, labels);
  return out;
}

}  // namespace hicd::model
