#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "art/types.hpp"

namespace art {

// Maps a phrase to a unit vector. Implementations must be deterministic and
// must never return a zero vector (silent zeros mask provider bugs).
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dimension() const = 0;
  virtual std::vector<double> embed(const std::string& phrase) const = 0;
};

// Mean token-distribution entropy over all beams and positions, in nats:
//   H = -(1/(M*L)) * sum_{m,l,v} P_mlv log P_mlv,  P = softmax over v.
// Result lies in [0, ln V]. Throws on non-finite logits.
double entropy(const BeamLogits& logits);

double cosine(std::span<const double> a, std::span<const double> b);

// Cosine similarity of the provider embeddings of two phrases. Phrases are
// full triplet phrases "<s> <p> <o>" so that a predicate change moves the
// whole-phrase vector. Throws on empty phrases.
double similarity(const std::string& predicted_phrase,
                  const std::string& ground_truth_phrase,
                  const EmbeddingProvider& provider);

// Bag-of-tokens embedding: each whitespace token hashes (seeded) to a unit
// basis direction; a phrase embeds as the normalized token sum, so shared
// tokens mean higher cosine. Deterministic stand-in for a sentence encoder.
std::unique_ptr<EmbeddingProvider> builtin_provider(int dimension,
                                                    std::uint64_t seed);

// Lookup provider over a phrase -> vector table file: one line per phrase,
// tab-separated phrase then space-separated reals. Vectors are re-normalized
// on load; zero vectors and dimension mismatches are load errors. Querying a
// phrase absent from the table throws, naming the phrase.
std::unique_ptr<EmbeddingProvider> external_provider(const std::string& path);

}  // namespace art
