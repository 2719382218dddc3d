#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "data/datasets.hpp"
#include "num/layers.hpp"
#include "text/embeddings.hpp"

namespace hicd::model {

enum class AttentionVariant { pooling, vanilla, supervised };

AttentionVariant variant_from_string(const std::string& s);  // ConfigError on unknown
std::string variant_to_string(AttentionVariant v);

struct ClassifierConfig {
  AttentionVariant variant = AttentionVariant::supervised;
  bool use_r4v = true;
  double lambda = 100.0;
  bool normalize_alpha = false;  // divide the binary target by its sum
  int hidden = 256;
  int attention = 128;
  int max_tokens = 128;
};

// Level two: token LSTM over the focus sentence, word attention scored
// against the final hidden state (or mean-max pooling), optional second
// LSTM over the reason for visit, softmax classification over the label
// space.
struct ClassifierParams {
  ClassifierConfig cfg;
  int label_count = 0;
  int embed_dim = 0;
  num::LstmCellParams lstm_fs;
  num::LstmCellParams lstm_r4v;  // allocated only with use_r4v
  num::Matrix w_att, b_att;      // attention variants only
  num::Matrix w_cls, b_cls;

  void init(int embed_dim, int label_count, const ClassifierConfig& cfg, num::Rng& rng);
  std::vector<num::ParamRef> refs();  // live arrays only
  int context_dim() const;
};

struct ClassifierGrads {
  num::LstmCellGrads lstm_fs, lstm_r4v;
  num::Matrix w_att, b_att, w_cls, b_cls;
  void init_like(const ClassifierParams& p);
  void zero();
  std::vector<num::ParamRef> refs(const ClassifierParams& p);
};

// Attention scores per Eq-style additive scoring: u_t = tanh(W h_t + b),
// alpha = softmax_t(u_t . h_T). Throws on an empty sequence.
num::Vec attend(const std::vector<num::Vec>& hidden, const num::Matrix& w_att,
                const num::Matrix& b_att);

// Sum of squared differences; the target is used raw.
double attention_loss(const num::Vec& alpha_hat, const num::Vec& alpha);

// [coordinate-wise mean, coordinate-wise max]; length 2h.
num::Vec mean_max_pool(const std::vector<num::Vec>& hidden);

// J = J_c + lambda * J_a (per record).
double joint_loss(double j_c, double j_a, double lambda);

// Last hidden state of the r4v LSTM; zero vector for empty input.
num::Vec encode_r4v(const std::vector<std::string>& tokens, const num::LstmCellParams& params,
                    const text::EmbeddingTable& table);

struct ClassifyResult {
  num::Vec label_probs;
  num::Vec alpha;  // empty for the pooling variant
};

ClassifyResult classify(const std::vector<std::string>& tokens,
                        const std::vector<std::string>& r4v_tokens,
                        const ClassifierParams& params, const text::EmbeddingTable& table);

// Forward + backward of the per-record joint objective. Adds gradients of
// (J_c + lambda * J_a) for the supervised variant, J_c otherwise. J_a is
// reported for any attention variant regardless.
struct ClassifierExampleLoss {
  double j_c = 0.0;
  double j_a = 0.0;
};
ClassifierExampleLoss classifier_example_grads(const data::ClassifierRecord& record,
                                               const ClassifierParams& params,
                                               const text::EmbeddingTable& table,
                                               ClassifierGrads& grads, num::Matrix* emb_grads);

struct ClassifierTrainOptions {
  double learning_rate = 1e-3;
  int batch_size = 32;
  int epochs = 30;
  uint64_t seed = 7;
  bool finetune_embeddings = false;
};

struct ClassifierEpochStats {
  int epoch = 0;
  double loss = 0.0;
  double loss_cls = 0.0;
  double loss_att = 0.0;
  double val_accuracy = 0.0;
};

struct TrainedClassifier {
  ClassifierParams params;
  text::EmbeddingTable table;
  data::LabelSpace labels;
  std::vector<ClassifierEpochStats> trace;
  int best_epoch = 0;
  double best_val_accuracy = 0.0;
};

TrainedClassifier train_classifier(const std::vector<data::ClassifierRecord>& train,
                                   const std::vector<data::ClassifierRecord>& validation,
                                   const data::LabelSpace& labels,
                                   const text::EmbeddingTable& table,
                                   const ClassifierConfig& cfg,
                                   const ClassifierTrainOptions& opts);

double classifier_accuracy(const std::vector<data::ClassifierRecord>& records,
                           const ClassifierParams& params, const text::EmbeddingTable& table,
                           const data::LabelSpace& labels);

// Mean held-out attention loss (supervision quality under Eq-7 distance).
double classifier_mean_attention_loss(const std::vector<data::ClassifierRecord>& records,
                                      const ClassifierParams& params,
                                      const text::EmbeddingTable& table);

}  // namespace hicd::model
