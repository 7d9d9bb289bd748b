#include "art/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "art/rng.hpp"
#include "art/text.hpp"

namespace art {

double entropy(const BeamLogits& logits) {
  logits.validate();
  const int beams = logits.beam_count;
  const int length = logits.length;
  const int vocab = logits.vocab_size;

  double total = 0.0;
  for (int m = 0; m < beams; ++m) {
    for (int l = 0; l < length; ++l) {
      // Max-subtracted softmax keeps exp() in range for large logits.
      double max_logit = logits.at(m, l, 0);
      for (int v = 1; v < vocab; ++v) {
        max_logit = std::max(max_logit, logits.at(m, l, v));
      }
      double norm = 0.0;
      for (int v = 0; v < vocab; ++v) {
        norm += std::exp(logits.at(m, l, v) - max_logit);
      }
      const double log_norm = std::log(norm);
      double slice_entropy = 0.0;
      for (int v = 0; v < vocab; ++v) {
        const double log_p = logits.at(m, l, v) - max_logit - log_norm;
        slice_entropy -= std::exp(log_p) * log_p;
      }
      total += slice_entropy;
    }
  }
  const double h = total / (static_cast<double>(beams) * length);
  return std::max(h, 0.0);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine: dimension mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("cosine: zero vector");
  }
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double similarity(const std::string& predicted_phrase,
                  const std::string& ground_truth_phrase,
                  const EmbeddingProvider& provider) {
  if (normalize_phrase(predicted_phrase).empty() ||
      normalize_phrase(ground_truth_phrase).empty()) {
    throw std::invalid_argument("similarity: empty phrase");
  }
  const auto a = provider.embed(predicted_phrase);
  const auto b = provider.embed(ground_truth_phrase);
  return cosine(a, b);
}

namespace {

void normalize_in_place(std::vector<double>& v, const std::string& what) {
  double norm_sq = 0.0;
  for (double x : v) norm_sq += x * x;
  if (norm_sq <= 0.0) {
    throw std::invalid_argument(what + ": zero embedding vector");
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& x : v) x *= inv;
}

class BuiltinProvider final : public EmbeddingProvider {
 public:
  BuiltinProvider(int dimension, std::uint64_t seed)
      : dimension_(dimension), seed_(seed) {
    if (dimension < 8) {
      throw std::invalid_argument("builtin provider: dimension must be >= 8");
    }
  }

  int dimension() const override { return dimension_; }

  std::vector<double> embed(const std::string& phrase) const override {
    const auto tokens = tokenize(normalize_phrase(phrase));
    if (tokens.empty()) {
      throw std::invalid_argument("builtin provider: empty phrase");
    }
    std::vector<double> v(dimension_, 0.0);
    for (const auto& token : tokens) {
      const std::uint64_t slot = derive_seed(seed_, token) % dimension_;
      v[slot] += 1.0;
    }
    normalize_in_place(v, "builtin provider");
    return v;
  }

 private:
  int dimension_;
  std::uint64_t seed_;
};

class ExternalProvider final : public EmbeddingProvider {
 public:
  explicit ExternalProvider(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error("embedding table: cannot open '" + path + "'");
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw std::runtime_error("embedding table line " + std::to_string(line_no) +
                                 ": missing tab separator");
      }
      const std::string phrase = normalize_phrase(line.substr(0, tab));
      std::istringstream rest(line.substr(tab + 1));
      std::vector<double> v;
      double x;
      while (rest >> x) v.push_back(x);
      if (v.empty()) {
        throw std::runtime_error("embedding table line " + std::to_string(line_no) +
                                 ": no vector values");
      }
      if (dimension_ == 0) {
        dimension_ = static_cast<int>(v.size());
      } else if (static_cast<int>(v.size()) != dimension_) {
        throw std::runtime_error("embedding table line " + std::to_string(line_no) +
                                 ": dimension mismatch");
      }
      normalize_in_place(v, "embedding table line " + std::to_string(line_no));
      table_[phrase] = std::move(v);
    }
    if (table_.empty()) {
      throw std::runtime_error("embedding table '" + path + "' is empty");
    }
  }

  int dimension() const override { return dimension_; }

  std::vector<double> embed(const std::string& phrase) const override {
    const auto it = table_.find(normalize_phrase(phrase));
    if (it == table_.end()) {
      throw std::out_of_range("embedding table: missing phrase '" +
                              normalize_phrase(phrase) + "'");
    }
    return it->second;
  }

 private:
  int dimension_ = 0;
  std::map<std::string, std::vector<double>> table_;
};

}  // namespace

std::unique_ptr<EmbeddingProvider> builtin_provider(int dimension,
                                                    std::uint64_t seed) {
  return std::make_unique<BuiltinProvider>(dimension, seed);
}

std::unique_ptr<EmbeddingProvider> external_provider(const std::string& path) {
  return std::make_unique<ExternalProvider>(path);
}

}  // namespace art
