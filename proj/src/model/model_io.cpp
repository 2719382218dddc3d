#include "model/model_io.hpp"

#include <cstdio>

#include "common/error.hpp"
#include "common/hash.hpp"
#include "model/checkpoint.hpp"

namespace hicd::model {

using nlohmann::json;

std::string hash_hex(uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

uint64_t vocab_hash(const text::EmbeddingTable& table) {
  Fnv1a h;
  h.update_u32(static_cast<uint32_t>(table.dim()));
  for (const std::string& w : table.words()) {
    h.update(w);
    h.update("\n");
  }
  return h.digest();
}

json embedding_manifest(const text::EmbeddingTable& table) {
  return {{"words", table.words()},
          {"embed_dim", table.dim()},
          {"frozen", table.frozen()},
          {"vocab_hash", hash_hex(vocab_hash(table))},
          {"embedding_hash", hash_hex(table.fingerprint())}};
}

text::EmbeddingTable table_from_checkpoint(const Checkpoint& ckpt) {
  std::vector<std::string> words =
      ckpt.manifest.at("words").get<std::vector<std::string>>();
  int dim = ckpt.manifest.at("embed_dim").get<int>();
  text::EmbeddingTable table(words, dim);
  const num::Matrix& emb = ckpt.array("embeddings");
  if (emb.rows != static_cast<int>(words.size()) + 1 || emb.cols != dim)
    throw DataError("checkpoint embedding matrix has unexpected shape");
  table.vectors() = emb;
  table.set_frozen(ckpt.manifest.value("frozen", true));
  return table;
}

void require_kind(const json& manifest, const std::string& kind) {
  std::string actual = manifest.value("kind", "?");
  if (actual != kind)
    throw ConfigError("checkpoint kind mismatch: expected '" + kind + "', found '" + actual +
                      "'");
}

num::LstmCellParams lstm_from(const Checkpoint& ckpt, const std::string& prefix) {
  num::LstmCellParams p;
  p.w_ih = ckpt.array(prefix + ".w_ih");
  p.w_hh = ckpt.array(prefix + ".w_hh");
  p.b = ckpt.array(prefix + ".b");
  p.hidden_size = p.w_hh.cols;
  p.input_size = p.w_ih.cols;
  if (p.w_ih.rows != 4 * p.hidden_size || p.b.rows != 4 * p.hidden_size)
    throw DataError("checkpoint LSTM arrays have inconsistent shapes for '" + prefix + "'");
  return p;
}

}  // namespace

void save_tagger(const std::string& path, const TrainedTagger& trained,
                 const json& run_config) {
  json manifest = embedding_manifest(trained.table);
  manifest["schema_version"] = 1;
  manifest["kind"] = "tagger";
  manifest["hidden"] = trained.params.hidden();
  manifest["class_weights"] = {trained.w0, trained.w1};
  manifest["best_epoch"] = trained.best_epoch;
  manifest["config"] = run_config;

  auto refs = const_cast<TaggerParams&>(trained.params).refs();
  refs.push_back({"embeddings", &const_cast<TrainedTagger&>(trained).table.vectors()});
  write_checkpoint(path, manifest, refs);
}

TaggerModel load_tagger(const std::string& path) {
  Checkpoint ckpt = read_checkpoint(path);
  require_kind(ckpt.manifest, "tagger");
  TaggerModel m;
  m.manifest = ckpt.manifest;
  m.table = table_from_checkpoint(ckpt);
  m.params.lstm = lstm_from(ckpt, "lstm");
  m.params.w_out = ckpt.array("w_out");
  m.params.b_out = ckpt.array("b_out");
  const json& w = ckpt.manifest.at("class_weights");
  m.w0 = w.at(0).get<double>();
  m.w1 = w.at(1).get<double>();
  m.embedding_hash = m.table.fingerprint();
  return m;
}

void save_classifier(const std::string& path, const TrainedClassifier& trained,
                     const json& run_config) {
  json manifest = embedding_manifest(trained.table);
  manifest["schema_version"] = 1;
  manifest["kind"] = "classifier";
  const ClassifierConfig& cfg = trained.params.cfg;
  manifest["hidden"] = cfg.hidden;
  manifest["attention"] = cfg.attention;
  manifest["variant"] = variant_to_string(cfg.variant);
  manifest["lambda"] = cfg.lambda;
  manifest["use_r4v"] = cfg.use_r4v;
  manifest["normalize_alpha"] = cfg.normalize_alpha;
  manifest["max_tokens"] = cfg.max_tokens;
  manifest["labels"] = trained.labels.codes();
  manifest["best_epoch"] = trained.best_epoch;
  manifest["config"] = run_config;

  auto refs = const_cast<ClassifierParams&>(trained.params).refs();
  refs.push_back({"embeddings", &const_cast<TrainedClassifier&>(trained).table.vectors()});
  write_checkpoint(path, manifest, refs);
}

ClassifierModel load_classifier(const std::string& path) {
  Checkpoint ckpt = read_checkpoint(path);
  require_kind(ckpt.manifest, "classifier");
  ClassifierModel m;
  m.manifest = ckpt.manifest;
  m.table = table_from_checkpoint(ckpt);
  m.labels = data::LabelSpace(ckpt.manifest.at("labels").get<std::vector<std::string>>());

  ClassifierConfig cfg;
  cfg.hidden = ckpt.manifest.at("hidden").get<int>();
  cfg.attention = ckpt.manifest.at("attention").get<int>();
  cfg.variant = variant_from_string(ckpt.manifest.at("variant").get<std::string>());
  cfg.lambda = ckpt.manifest.at("lambda").get<double>();
  cfg.use_r4v = ckpt.manifest.at("use_r4v").get<bool>();
  cfg.normalize_alpha = ckpt.manifest.value("normalize_alpha", false);
  cfg.max_tokens = ckpt.manifest.value("max_tokens", 128);

  m.params.cfg = cfg;
  m.params.embed_dim = m.table.dim();
  m.params.label_count = m.labels.size();
  m.params.lstm_fs = lstm_from(ckpt, "lstm_fs");
  if (cfg.use_r4v) m.params.lstm_r4v = lstm_from(ckpt, "lstm_r4v");
  if (cfg.variant != AttentionVariant::pooling) {
    m.params.w_att = ckpt.array("w_att");
    m.params.b_att = ckpt.array("b_att");
  }
  m.params.w_cls = ckpt.array("w_cls");
  m.params.b_cls = ckpt.array("b_cls");
  m.embedding_hash = m.table.fingerprint();
  return m;
}

void save_baseline(const std::string& path, const baseline::BrModel& model,
                   const json& run_config) {
  json manifest;
  manifest["schema_version"] = 1;
  manifest["kind"] = "binary-relevance";
  manifest["labels"] = model.labels.codes();
  manifest["ngrams"] = model.vocab.ngrams;
  manifest["min_df"] = model.vocab.min_df;
  manifest["threshold"] = model.threshold;
  manifest["include_r4v"] = model.include_r4v;
  manifest["config"] = run_config;

  std::vector<num::ParamRef> refs = {
      {"w", &const_cast<baseline::BrModel&>(model).w},
      {"b", &const_cast<baseline::BrModel&>(model).b}};
  write_checkpoint(path, manifest, refs);
}

BaselineModel load_baseline(const std::string& path) {
  Checkpoint ckpt = read_checkpoint(path);
  require_kind(ckpt.manifest, "binary-relevance");
  BaselineModel out;
  out.manifest = ckpt.manifest;
  out.model.labels =
      data::LabelSpace(ckpt.manifest.at("labels").get<std::vector<std::string>>());
  out.model.vocab.ngrams = ckpt.manifest.at("ngrams").get<std::vector<std::string>>();
  out.model.vocab.min_df = ckpt.manifest.value("min_df", 2);
  for (size_t i = 0; i < out.model.vocab.ngrams.size(); ++i)
    out.model.vocab.ids.emplace(out.model.vocab.ngrams[i], static_cast<int>(i));
  out.model.threshold = ckpt.manifest.value("threshold", 0.5);
  out.model.include_r4v = ckpt.manifest.value("include_r4v", true);
  out.model.w = ckpt.array("w");
  out.model.b = ckpt.array("b");
  return out;
}

json checkpoint_manifest(const std::string& path) { return read_checkpoint(path).manifest; }

}  // namespace hicd::model
