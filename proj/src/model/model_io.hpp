#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "baseline/binary_relevance.hpp"
#include "model/classifier.hpp"
#include "model/tagger.hpp"

namespace hicd::model {

// Loaded-from-disk bundles used by inference.
struct TaggerModel {
  TaggerParams params;
  text::EmbeddingTable table;
  double w0 = 1.0, w1 = 1.0;
  uint64_t embedding_hash = 0;
  nlohmann::json manifest;
};

struct ClassifierModel {
  ClassifierParams params;
  text::EmbeddingTable table;
  data::LabelSpace labels;
  uint64_t embedding_hash = 0;
  nlohmann::json manifest;
};

struct BaselineModel {
  baseline::BrModel model;
  nlohmann::json manifest;
};

std::string hash_hex(uint64_t h);

// `run_config` is the resolved configuration echoed into the manifest.
void save_tagger(const std::string& path, const TrainedTagger& trained,
                 const nlohmann::json& run_config);
void save_classifier(const std::string& path, const TrainedClassifier& trained,
                     const nlohmann::json& run_config);
void save_baseline(const std::string& path, const baseline::BrModel& model,
                   const nlohmann::json& run_config);

// Loaders check the manifest kind and throw ConfigError on a mismatch.
TaggerModel load_tagger(const std::string& path);
ClassifierModel load_classifier(const std::string& path);
BaselineModel load_baseline(const std::string& path);

// Peek at the manifest without materializing a model.
nlohmann::json checkpoint_manifest(const std::string& path);

}  // namespace hicd::model
