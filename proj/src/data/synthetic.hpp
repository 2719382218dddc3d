#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "data/corpus.hpp"

namespace hicd::data {

// Benchmark corpus with planted evidence. Every focus sentence carries
// exactly one label's trigger bigram (annotated at its span). With
// probability `distractor_rate` a focus sentence also contains an
// unannotated trigger of a label absent from the report, so the sentence
// alone under-determines the code and the reason-for-visit token is what
// disambiguates — the property the ablations measure.
struct SyntheticConfig {
  int schema_version = 1;
  int vocab_size = 200;  // filler alphabet size
  int label_count = 12;
  int triggers_per_label = 2;
  std::array<int, 2> sentences_per_report{3, 10};
  std::array<int, 2> focus_per_report{1, 3};
  int report_count = 2800;
  double noise_rate = 0.05;       // planted r4v token replaced by a random word
  double r4v_rate = 0.8;          // planted label contributes its r4v token
  double distractor_rate = 0.25;  // focus sentence carries a foreign trigger
  uint64_t seed = 7;
  // Optional explicit trigger bigrams, one list per label; generated when
  // empty. Duplicated bigrams across labels are a configuration error.
  std::vector<std::vector<std::string>> triggers;

  void validate() const;  // throws ConfigError
};

SyntheticConfig synthetic_config_from_json(const nlohmann::json& j);
nlohmann::json synthetic_config_to_json(const SyntheticConfig& cfg);

std::string synthetic_label_code(int index);

// Deterministic in the config (seed included).
Corpus gen_synthetic(const SyntheticConfig& cfg);

}  // namespace hicd::data
