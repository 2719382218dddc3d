#include "text/embeddings.hpp"

#include <fstream>
#include <sstream>

#include "common/error.hpp"
#include "common/hash.hpp"

namespace hicd::text {

EmbeddingTable::EmbeddingTable(std::vector<std::string> words, int dim)
    : dim_(dim), words_(std::move(words)) {
  if (dim <= 0) throw std::invalid_argument("embedding dimension must be positive");
  for (size_t i = 0; i < words_.size(); ++i) {
    auto [it, inserted] = ids_.emplace(words_[i], static_cast<int>(i));
    if (!inserted) throw DataError("duplicate word in embedding table: '" + words_[i] + "'");
  }
  vectors_ = num::Matrix(static_cast<int>(words_.size()) + 1, dim);
}

int EmbeddingTable::word_id(const std::string& word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? -1 : it->second;
}

int EmbeddingTable::lookup_id(const std::string& word) const {
  int id = word_id(word);
  return id < 0 ? static_cast<int>(words_.size()) : id;
}

num::Vec EmbeddingTable::vector_for_id(int id) const {
  num::Vec v(dim_);
  for (int c = 0; c < dim_; ++c) v[c] = vectors_(id, c);
  return v;
}

num::Vec EmbeddingTable::vector_for(const std::string& word) const {
  return vector_for_id(lookup_id(word));
}

void EmbeddingTable::set_vector(const std::string& word, const num::Vec& v) {
  if (static_cast<int>(v.size()) != dim_)
    throw std::invalid_argument("embedding vector has wrong dimension");
  int id = word_id(word);
  if (id < 0) throw std::invalid_argument("unknown word '" + word + "'");
  for (int c = 0; c < dim_; ++c) vectors_(id, c) = v[c];
}

uint64_t EmbeddingTable::fingerprint() const {
  Fnv1a h;
  h.update_u32(static_cast<uint32_t>(dim_));
  h.update_u32(static_cast<uint32_t>(words_.size()));
  for (const std::string& w : words_) {
    h.update(w);
    h.update("\n");
  }
  for (double d : vectors_.a) {
    float f = static_cast<float>(d);
    uint32_t bits;
    static_assert(sizeof(bits) == sizeof(f));
    __builtin_memcpy(&bits, &f, 4);
    h.update_u32(bits);
  }
  return h.digest();
}

EmbeddingTable EmbeddingTable::random(std::vector<std::string> words, int dim, uint64_t seed) {
  EmbeddingTable t(std::move(words), dim);
  num::Rng rng(seed);
  num::init_uniform(t.vectors_, dim, rng);
  // UNK stays zero.
  for (int c = 0; c < dim; ++c) t.vectors_(static_cast<int>(t.words_.size()), c) = 0.0;
  return t;
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path);

  std::string line;
  int lineno = 0;
  int dim = -1;
  std::vector<std::string> words;
  std::vector<num::Vec> rows;

  auto parse_row = [&](const std::string& l, int no) {
    std::istringstream ss(l);
    std::string word;
    if (!(ss >> word)) return;  // blank line: skip
    num::Vec v;
    double x;
    while (ss >> x) v.push_back(x);
    if (!ss.eof())
      throw DataError("embedding file line " + std::to_string(no) + ": non-numeric value");
    if (dim < 0) dim = static_cast<int>(v.size());
    if (static_cast<int>(v.size()) != dim || v.empty())
      throw DataError("embedding file line " + std::to_string(no) + ": expected " +
                      std::to_string(dim) + " values, got " + std::to_string(v.size()));
    words.push_back(word);
    rows.push_back(std::move(v));
  };

  bool first = true;
  while (std::getline(in, line)) {
    lineno++;
    if (first) {
      first = false;
      // Optional "<count> <dim>" header: exactly two integer fields.
      std::istringstream ss(line);
      long long a, b;
      std::string rest;
      if ((ss >> a >> b) && !(ss >> rest)) {
        if (a >= 0 && b > 0) {
          dim = static_cast<int>(b);
          continue;
        }
      }
    }
    parse_row(line, lineno);
  }
  if (words.empty()) throw DataError("embedding file has no word vectors: " + path);

  EmbeddingTable t(std::move(words), dim);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < dim; ++c) t.vectors()(static_cast<int>(i), c) = rows[i][c];
  return t;
}

num::Vec mean_embedding(const std::vector<std::string>& tokens, const EmbeddingTable& table) {
  num::Vec m(table.dim(), 0.0);
  if (tokens.empty()) return m;
  for (const std::string& tok : tokens) {
    int id = table.lookup_id(tok);
    for (int c = 0; c < table.dim(); ++c) m[c] += table.vectors()(id, c);
  }
  for (double& v : m) v /= static_cast<double>(tokens.size());
  return m;
}

}  // namespace hicd::text
