#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "data/datasets.hpp"
#include "num/adam.hpp"
#include "num/layers.hpp"
#include "text/embeddings.hpp"

namespace hicd::model {

// Level one: mean word embedding of the sentence concatenated with the
// mean embedding of the reason for visit, an LSTM across the report's
// sentence sequence, and a 2-way log-softmax per sentence.
struct TaggerParams {
  num::LstmCellParams lstm;  // input 2d, hidden h
  num::Matrix w_out;         // 2 x h
  num::Matrix b_out;         // 2 x 1

  void init(int input_dim, int hidden, num::Rng& rng);
  std::vector<num::ParamRef> refs();
  int hidden() const { return lstm.hidden_size; }
  int input_dim() const { return lstm.input_size; }
};

struct TaggerGrads {
  num::LstmCellGrads lstm;
  num::Matrix w_out, b_out;

  void init_like(const TaggerParams& p);
  void zero();
  std::vector<num::ParamRef> refs();
};

// [mean(sentence tokens), mean(r4v tokens)]; either half zero when empty.
num::Vec encode_sentence(const std::vector<std::string>& sentence_tokens,
                         const std::vector<std::string>& r4v_tokens,
                         const text::EmbeddingTable& table);

struct TagResult {
  std::vector<int> tags;                          // argmax, ties toward 0
  std::vector<double> focus_prob;                 // P(tag = 1)
  std::vector<std::array<double, 2>> log_probs;   // per-sentence log-softmax
};

TagResult tag_report(const std::vector<std::vector<std::string>>& sentence_tokens,
                     const std::vector<std::string>& r4v_tokens, const TaggerParams& params,
                     const text::EmbeddingTable& table);

// -sum_i w_{y_i} log P(y_i), divided by sum_i w_{y_i}.
double tagger_loss(const std::vector<std::array<double, 2>>& log_probs,
                   const std::vector<int>& gold, double w0, double w1);

// Forward + backward for one report. Accumulates the gradient of the
// UN-normalized weighted NLL sum into `grads` (and into `emb_grads` when
// fine-tuning); returns that sum and the total class weight, so a batch
// can normalize by its own weight total.
struct TaggerExampleLoss {
  double weighted_nll = 0.0;
  double weight = 0.0;
};
TaggerExampleLoss tagger_example_grads(const data::TaggerExample& example,
                                       const TaggerParams& params,
                                       const text::EmbeddingTable& table, double w0, double w1,
                                       TaggerGrads& grads, num::Matrix* emb_grads);

struct TaggerTrainOptions {
  int hidden = 256;
  double learning_rate = 1e-3;
  int batch_size = 32;
  int epochs = 100;
  uint64_t seed = 7;
  // Negative values mean "derive from inverse class frequency, normalized
  // to mean 1, on the training set".
  double class_weight_0 = -1.0;
  double class_weight_1 = -1.0;
  bool finetune_embeddings = false;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_metric = 0.0;  // macro-F1 here, accuracy for the classifier
};

struct TrainedTagger {
  TaggerParams params;
  text::EmbeddingTable table;  // possibly fine-tuned; quantized to f32
  std::vector<EpochStats> trace;
  int best_epoch = 0;
  double best_val_macro_f1 = 0.0;
  double w0 = 1.0, w1 = 1.0;  // resolved class weights
};

// Minibatch Adam; deterministic given the seed; returns the parameters of
// the best validation macro-F1 epoch, rounded through 32-bit so a saved
// and reloaded model reproduces identical metrics.
TrainedTagger train_tagger(const std::vector<data::TaggerExample>& train,
                           const std::vector<data::TaggerExample>& validation,
                           const text::EmbeddingTable& table, const TaggerTrainOptions& opts);

double tagger_validation_macro_f1(const std::vector<data::TaggerExample>& examples,
                                  const TaggerParams& params,
                                  const text::EmbeddingTable& table);

}  // namespace hicd::model
