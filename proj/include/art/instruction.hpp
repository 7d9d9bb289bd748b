#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "art/types.hpp"

namespace art {

// Which high-level categories may serve as negatives for a positive one.
// Default map: spatial -> {possessive}; possessive -> {spatial, semantic};
// semantic -> {possessive}. A category never maps to itself.
struct CounterNegativeMap {
  std::map<RelationCategory, std::vector<RelationCategory>> allowed;

  static CounterNegativeMap defaults();
  void validate() const;
};

enum class NegativeMode { counter, random, none };

const char* to_string(NegativeMode mode);

struct GenerationConfig {
  int negatives_per_sample = 1;
  NegativeMode mode = NegativeMode::counter;
  std::uint64_t seed = 0;
};

RelationCategory categorize(const std::string& predicate,
                            const PredicateVocabulary& vocab);

// "Is there a prominent <r> relation between <s> (subject) and <o> (object)
// in the image?" with <r> the category name.
std::string render_question(const RelationTriplet& triplet,
                            RelationCategory category);

// "Yes, <s> <p> <o>." with the specific predicate phrase.
std::string render_positive(const RelationTriplet& triplet);

// "No, there is no prominent <nr> relation between <s> and <o>."
std::string render_negative(const RelationTriplet& triplet,
                            RelationCategory negative_category);

// Draws negatives_per_sample (category, rendered response) pairs. Counter
// mode draws without replacement from the map's allowed set, random mode
// from all categories other than the positive one; when the request exceeds
// the set size, categories repeat round-robin. The draw is seeded from
// (cfg.seed, triplet.id) so per-triplet output is order-independent.
std::vector<std::pair<RelationCategory, std::string>> mine_negatives(
    const RelationTriplet& triplet, RelationCategory category,
    const CounterNegativeMap& map, const GenerationConfig& cfg);

// One instance per triplet; pure function of (triplets, vocab, map, cfg).
std::vector<InstructionInstance> generate(
    const std::vector<RelationTriplet>& triplets,
    const PredicateVocabulary& vocab, const CounterNegativeMap& map,
    const GenerationConfig& cfg);

// Template dissection, used to recover entities from rendered instances and
// predicted responses.

// Subject and object from a rendered question, or nullopt when the text does
// not follow the question template.
std::optional<std::pair<std::string, std::string>> parse_question_entities(
    const std::string& question);

// Normalized response body with the leading yes/no marker and trailing
// punctuation removed: "Yes, girl has hair." -> "girl has hair".
std::string strip_response_core(const std::string& response);

// The predicate phrase between a known subject prefix and object suffix of a
// stripped response core; nullopt when the core does not fit "<s> <p> <o>".
// subject and object must be normalized.
std::optional<std::string> extract_predicate_phrase(const std::string& core,
                                                    const std::string& subject,
                                                    const std::string& object);

}  // namespace art
