#include "data/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "common/error.hpp"
#include "num/tensor.hpp"

namespace hicd::data {

using nlohmann::json;

void SyntheticConfig::validate() const {
  auto bad = [](const std::string& msg) { throw ConfigError("synthetic config: " + msg); };
  if (schema_version != 1) bad("unsupported schema_version");
  if (vocab_size < 10) bad("vocab_size must be >= 10");
  if (label_count < 2) bad("label_count must be >= 2");
  if (triggers_per_label < 1) bad("triggers_per_label must be >= 1");
  if (report_count < 1) bad("report_count must be >= 1");
  if (sentences_per_report[0] < 1 || sentences_per_report[0] > sentences_per_report[1])
    bad("sentences_per_report range invalid");
  if (focus_per_report[0] < 1 || focus_per_report[0] > focus_per_report[1])
    bad("focus_per_report range invalid");
  if (focus_per_report[1] > label_count)
    bad("focus_per_report upper bound exceeds label_count");
  for (double rate : {noise_rate, r4v_rate, distractor_rate})
    if (rate < 0.0 || rate > 1.0) bad("rates must lie in [0, 1]");
  if (!triggers.empty()) {
    if (static_cast<int>(triggers.size()) != label_count)
      bad("triggers must list one entry per label");
    std::set<std::string> seen;
    for (const auto& per_label : triggers) {
      if (static_cast<int>(per_label.size()) != triggers_per_label)
        bad("each label needs exactly triggers_per_label bigrams");
      for (const std::string& bigram : per_label) {
        if (bigram.empty()) bad("empty trigger bigram");
        if (!seen.insert(bigram).second)
          bad("trigger collision: '" + bigram + "' is assigned to more than one label");
      }
    }
  }
}

SyntheticConfig synthetic_config_from_json(const json& j) {
  SyntheticConfig cfg;
  if (!j.is_object()) throw ConfigError("synthetic config must be a JSON object");
  static const std::set<std::string> known = {
      "schema_version",  "vocab_size",        "label_count",     "triggers_per_label",
      "sentences_per_report", "focus_per_report", "report_count", "noise_rate",
      "r4v_rate",        "distractor_rate",   "seed",            "triggers"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("synthetic config: unknown key '" + it.key() + "'");
  try {
    cfg.schema_version = j.value("schema_version", cfg.schema_version);
    cfg.vocab_size = j.value("vocab_size", cfg.vocab_size);
    cfg.label_count = j.value("label_count", cfg.label_count);
    cfg.triggers_per_label = j.value("triggers_per_label", cfg.triggers_per_label);
    if (j.contains("sentences_per_report"))
      cfg.sentences_per_report = {j["sentences_per_report"].at(0).get<int>(),
                                  j["sentences_per_report"].at(1).get<int>()};
    if (j.contains("focus_per_report"))
      cfg.focus_per_report = {j["focus_per_report"].at(0).get<int>(),
                              j["focus_per_report"].at(1).get<int>()};
    cfg.report_count = j.value("report_count", cfg.report_count);
    cfg.noise_rate = j.value("noise_rate", cfg.noise_rate);
    cfg.r4v_rate = j.value("r4v_rate", cfg.r4v_rate);
    cfg.distractor_rate = j.value("distractor_rate", cfg.distractor_rate);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("triggers"))
      cfg.triggers = j["triggers"].get<std::vector<std::vector<std::string>>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synthetic config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json synthetic_config_to_json(const SyntheticConfig& cfg) {
  json j = {{"schema_version", cfg.schema_version},
            {"vocab_size", cfg.vocab_size},
            {"label_count", cfg.label_count},
            {"triggers_per_label", cfg.triggers_per_label},
            {"sentences_per_report", {cfg.sentences_per_report[0], cfg.sentences_per_report[1]}},
            {"focus_per_report", {cfg.focus_per_report[0], cfg.focus_per_report[1]}},
            {"report_count", cfg.report_count},
            {"noise_rate", cfg.noise_rate},
            {"r4v_rate", cfg.r4v_rate},
            {"distractor_rate", cfg.distractor_rate},
            {"seed", cfg.seed}};
  if (!cfg.triggers.empty()) j["triggers"] = cfg.triggers;
  return j;
}

std::string synthetic_label_code(int index) {
  static const char letters[] = "CDEJKLMNRSTZ";
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%02d.%d", letters[index % 12], index % 100, index / 100);
  return buf;
}

namespace {

std::string word_of(const char* prefix, int i) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
  return buf;
}

struct TriggerSet {
  // triggers[label][j] = {word_a, word_b}
  std::vector<std::vector<std::array<std::string, 2>>> triggers;
};

TriggerSet make_triggers(const SyntheticConfig& cfg) {
  TriggerSet ts;
  ts.triggers.resize(cfg.label_count);
  if (!cfg.triggers.empty()) {
    for (int l = 0; l < cfg.label_count; ++l) {
      for (const std::string& bigram : cfg.triggers[l]) {
        auto space = bigram.find(' ');
        if (space == std::string::npos || space == 0 || space + 1 >= bigram.size())
          throw ConfigError("trigger bigram must be two space-separated words: '" + bigram +
                            "'");
        ts.triggers[l].push_back({bigram.substr(0, space), bigram.substr(space + 1)});
      }
    }
    return ts;
  }
  for (int l = 0; l < cfg.label_count; ++l)
    for (int t = 0; t < cfg.triggers_per_label; ++t) {
      int k = l * cfg.triggers_per_label + t;
      ts.triggers[l].push_back({word_of("trg", k) + "a", word_of("trg", k) + "b"});
    }
  return ts;
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 0x20);
  return s;
}

// Skewed focus-count distribution within [lo, hi]: small codesets dominate.
int sample_focus_count(num::Rng& rng, int lo, int hi) {
  double u = rng.uniform();
  double weight = 1.0, total = 0.0;
  std::vector<double> w;
  for (int k = lo; k <= hi; ++k) {
    w.push_back(weight);
    total += weight;
    weight *= 0.45;
  }
  double acc = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    acc += w[i] / total;
    if (u < acc) return lo + static_cast<int>(i);
  }
  return hi;
}

}  // namespace

Corpus gen_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  TriggerSet ts = make_triggers(cfg);
  num::Rng rng(cfg.seed);

  Corpus corpus;
  corpus.reports.reserve(cfg.report_count);

  for (int rep = 0; rep < cfg.report_count; ++rep) {
    Report report;
    char idbuf[24];
    std::snprintf(idbuf, sizeof(idbuf), "syn-%05d", rep);
    report.id = idbuf;

    int k = sample_focus_count(rng, cfg.focus_per_report[0], cfg.focus_per_report[1]);
    int m = rng.uniform_int(cfg.sentences_per_report[0], cfg.sentences_per_report[1]);
    m = std::max(m, k);

    // k distinct labels for this report.
    std::vector<int> label_pool(cfg.label_count);
    for (int i = 0; i < cfg.label_count; ++i) label_pool[i] = i;
    rng.shuffle(label_pool);
    std::vector<int> planted(label_pool.begin(), label_pool.begin() + k);
    std::set<int> planted_set(planted.begin(), planted.end());

    // Which sentences carry them.
    std::vector<int> positions(m);
    for (int i = 0; i < m; ++i) positions[i] = i;
    rng.shuffle(positions);
    std::map<int, int> focus_label;  // sentence index -> label
    for (int i = 0; i < k; ++i) focus_label[positions[i]] = planted[i];

    std::string doc;
    int64_t cursor = 0;
    for (int si = 0; si < m; ++si) {
      int filler_len = rng.uniform_int(6, 12);
      std::vector<std::string> tokens;
      for (int t = 0; t < filler_len; ++t)
        tokens.push_back(word_of("w", rng.uniform_int(0, cfg.vocab_size - 1)));

      int genuine_at = -1;
      auto it = focus_label.find(si);
      if (it != focus_label.end()) {
        int label = it->second;
        const auto& bigram =
            ts.triggers[label][rng.uniform_int(0, static_cast<int>(ts.triggers[label].size()) - 1)];

        bool with_distractor = rng.bernoulli(cfg.distractor_rate) && cfg.label_count > k;
        int d_label = -1;
        if (with_distractor) {
          do {
            d_label = rng.uniform_int(0, cfg.label_count - 1);
          } while (planted_set.count(d_label));
        }

        // Two distinct insertion slots, never sentence-initial (the first
        // word gets capitalized and the annotated surface must stay
        // verbatim), so the bigrams never interleave.
        int slot_a = rng.uniform_int(1, filler_len);
        int slot_b = slot_a;
        if (with_distractor) {
          while (slot_b == slot_a) slot_b = rng.uniform_int(1, filler_len);
        }
        if (with_distractor && slot_b > slot_a) {
          const auto& db =
              ts.triggers[d_label]
                         [rng.uniform_int(0, static_cast<int>(ts.triggers[d_label].size()) - 1)];
          tokens.insert(tokens.begin() + slot_b, {db[0], db[1]});
          tokens.insert(tokens.begin() + slot_a, {bigram[0], bigram[1]});
          genuine_at = slot_a;
        } else if (with_distractor) {  // slot_b < slot_a
          tokens.insert(tokens.begin() + slot_a, {bigram[0], bigram[1]});
          const auto& db =
              ts.triggers[d_label]
                         [rng.uniform_int(0, static_cast<int>(ts.triggers[d_label].size()) - 1)];
          tokens.insert(tokens.begin() + slot_b, {db[0], db[1]});
          genuine_at = slot_a + 2;
        } else {
          tokens.insert(tokens.begin() + slot_a, {bigram[0], bigram[1]});
          genuine_at = slot_a;
        }
      }

      // Assemble the sentence and the document.
      if (si > 0) {
        doc += " ";
        cursor += 1;
      }
      int64_t sentence_start = cursor;
      for (size_t t = 0; t < tokens.size(); ++t) {
        std::string w = (t == 0) ? capitalize(tokens[t]) : tokens[t];
        if (t > 0) {
          doc += " ";
          cursor += 1;
        }
        if (genuine_at >= 0 && static_cast<int>(t) == genuine_at) {
          int64_t start = cursor;
          int64_t end = start + static_cast<int64_t>(tokens[t].size()) + 1 +
                        static_cast<int64_t>(tokens[t + 1].size());
          report.annotations.push_back(
              {start, end, synthetic_label_code(focus_label.at(si))});
        }
        doc += w;
        cursor += static_cast<int64_t>(w.size());
      }
      doc += ".";
      cursor += 1;
      (void)sentence_start;
    }
    report.text = doc;

    // Reason for visit: one token per planted label (usually), noise
    // replaces it with a random filler word.
    std::vector<std::string> r4v;
    for (int label : planted) {
      if (!rng.bernoulli(cfg.r4v_rate)) continue;
      if (rng.bernoulli(cfg.noise_rate))
        r4v.push_back(word_of("w", rng.uniform_int(0, cfg.vocab_size - 1)));
      else
        r4v.push_back(word_of("rv", label));
    }
    std::string r4v_text;
    for (size_t i = 0; i < r4v.size(); ++i) {
      if (i) r4v_text += " ";
      r4v_text += r4v[i];
    }
    report.r4v = r4v_text;

    refresh_codes(report);
    validate_report(report);
    corpus.reports.push_back(std::move(report));
  }
  return corpus;
}

}  // namespace hicd::data
