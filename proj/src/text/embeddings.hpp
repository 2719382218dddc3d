#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "num/tensor.hpp"

namespace hicd::text {

// Word-vector table shared by both models. Row i holds the vector for
// words[i]; unknown words map to the dedicated UNK vector (zeros unless
// fine-tuned). Frozen by default.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> words, int dim);

  int dim() const { return dim_; }
  size_t word_count() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  bool frozen() const { return frozen_; }
  void set_frozen(bool f) { frozen_ = f; }

  // -1 when absent.
  int word_id(const std::string& word) const;
  // UNK row (id == word_count) when the word is absent.
  int lookup_id(const std::string& word) const;
  num::Vec vector_for(const std::string& word) const;
  num::Vec vector_for_id(int id) const;

  void set_vector(const std::string& word, const num::Vec& v);

  // Vectors matrix: word_count + 1 rows (last row is UNK).
  num::Matrix& vectors() { return vectors_; }
  const num::Matrix& vectors() const { return vectors_; }

  // Fingerprint over dimension, words and 32-bit-rounded values. Two
  // checkpoints interoperate only when these match.
  uint64_t fingerprint() const;

  static EmbeddingTable random(std::vector<std::string> words, int dim, uint64_t seed);

 private:
  int dim_ = 0;
  std::vector<std::string> words_;
  std::map<std::string, int> ids_;
  num::Matrix vectors_;  // (word_count + 1) x dim
  bool frozen_ = true;
};

// Plain-text word-vector file: optional "<count> <dim>" header, then one
// line per word: token then `dim` decimal floats, space separated. Parse
// errors carry 1-based line numbers.
EmbeddingTable load_embeddings(const std::string& path);

// Coordinate-wise mean of the tokens' vectors (UNK for misses); empty
// token list yields the zero vector.
num::Vec mean_embedding(const std::vector<std::string>& tokens, const EmbeddingTable& table);

}  // namespace hicd::text
