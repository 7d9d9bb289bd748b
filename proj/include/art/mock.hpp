#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "art/types.hpp"

namespace art {

// Deterministic synthetic predictor standing in for the external model.
// accuracy + negative_rate <= 1 per predicate; the rest of the probability
// mass goes to the confusion substitute. learning_tau > 0 makes the
// effective accuracy rise with the number of already-trained samples of the
// predicate, so selection strategies become distinguishable in closed-loop
// runs; 0 keeps the model static.
struct MockModelSpec {
  std::map<std::string, double> accuracy;
  std::map<std::string, std::string> confusion;
  std::map<std::string, double> negative_rate;
  double sharpness = 4.0;
  int beam_count = 2;
  int length = 4;
  int vocab_size = 16;
  std::uint64_t seed = 0;
  double learning_tau = 0.0;

  void validate(const PredicateVocabulary& vocab) const;
};

// Deterministic triplets with placeholder subjects and objects; exactly
// frequencies[p] triplets per predicate. id_prefix keeps pools generated for
// different purposes (training vs held-out) disjoint.
std::vector<RelationTriplet> synthesize_pool(
    const PredicateVocabulary& vocab,
    const std::map<std::string, int>& predicate_frequencies, std::uint64_t seed,
    const std::string& id_prefix = "syn");

// One record per instance. The per-instance draw picks correct / negative /
// confused output; logits put a single sharp value on the emitted token so
// entropy falls monotonically as sharpness grows. train_counts feeds the
// learning curve when spec.learning_tau > 0.
std::vector<PredictionRecord> predict(
    const std::vector<InstructionInstance>& instances, const MockModelSpec& spec,
    const std::map<std::string, int>& train_counts = {});

}  // namespace art
