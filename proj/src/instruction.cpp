#include "art/instruction.hpp"

#include <algorithm>
#include <stdexcept>

#include "art/rng.hpp"
#include "art/text.hpp"

namespace art {

CounterNegativeMap CounterNegativeMap::defaults() {
  CounterNegativeMap map;
  map.allowed[RelationCategory::spatial] = {RelationCategory::possessive};
  map.allowed[RelationCategory::possessive] = {RelationCategory::spatial,
                                               RelationCategory::semantic};
  map.allowed[RelationCategory::semantic] = {RelationCategory::possessive};
  return map;
}

void CounterNegativeMap::validate() const {
  for (const auto category : kAllCategories) {
    const auto it = allowed.find(category);
    if (it == allowed.end() || it->second.empty()) {
      throw std::invalid_argument(std::string("counter-negative map: no negatives for ") +
                                  to_string(category));
    }
    for (const auto negative : it->second) {
      if (negative == category) {
        throw std::invalid_argument(std::string("counter-negative map: ") +
                                    to_string(category) + " maps to itself");
      }
    }
  }
}

const char* to_string(NegativeMode mode) {
  switch (mode) {
    case NegativeMode::counter:
      return "counter";
    case NegativeMode::random:
      return "random";
    case NegativeMode::none:
      return "none";
  }
  throw std::logic_error("unreachable negative mode");
}

RelationCategory categorize(const std::string& predicate,
                            const PredicateVocabulary& vocab) {
  return vocab.category(predicate);
}

std::string render_question(const RelationTriplet& triplet,
                            RelationCategory category) {
  std::string out = "Is there a prominent ";
  out += to_string(category);
  out += " relation between ";
  out += triplet.subject;
  out += " (subject) and ";
  out += triplet.object;
  out += " (object) in the image?";
  return out;
}

std::string render_positive(const RelationTriplet& triplet) {
  std::string out = "Yes, ";
  out += triplet.subject;
  out += ' ';
  out += triplet.predicate;
  out += ' ';
  out += triplet.object;
  out += '.';
  return out;
}

std::string render_negative(const RelationTriplet& triplet,
                            RelationCategory negative_category) {
  std::string out = "No, there is no prominent ";
  out += to_string(negative_category);
  out += " relation between ";
  out += triplet.subject;
  out += " and ";
  out += triplet.object;
  out += '.';
  return out;
}

std::vector<std::pair<RelationCategory, std::string>> mine_negatives(
    const RelationTriplet& triplet, RelationCategory category,
    const CounterNegativeMap& map, const GenerationConfig& cfg) {
  const int count = cfg.mode == NegativeMode::none ? 0 : cfg.negatives_per_sample;
  if (count <= 0) return {};

  std::vector<RelationCategory> candidates;
  if (cfg.mode == NegativeMode::counter) {
    map.validate();
    candidates = map.allowed.at(category);
  } else {
    for (const auto c : kAllCategories) {
      if (c != category) candidates.push_back(c);
    }
  }

  Rng rng(derive_seed(cfg.seed, "negatives/" + triplet.id));
  rng.shuffle(candidates);

  std::vector<std::pair<RelationCategory, std::string>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const auto negative = candidates[i % candidates.size()];
    out.emplace_back(negative, render_negative(triplet, negative));
  }
  return out;
}

std::vector<InstructionInstance> generate(
    const std::vector<RelationTriplet>& triplets,
    const PredicateVocabulary& vocab, const CounterNegativeMap& map,
    const GenerationConfig& cfg) {
  std::vector<InstructionInstance> instances;
  instances.reserve(triplets.size());
  for (const auto& triplet : triplets) {
    const auto category = categorize(triplet.predicate, vocab);
    InstructionInstance instance;
    instance.instance_id = triplet.id;
    instance.triplet_id = triplet.id;
    instance.question = render_question(triplet, category);
    instance.positive_response = render_positive(triplet);
    instance.positive_category = category;
    for (auto& [negative_category, response] :
         mine_negatives(triplet, category, map, cfg)) {
      instance.negative_categories.push_back(negative_category);
      instance.negative_responses.push_back(std::move(response));
    }
    instance.subject = triplet.subject;
    instance.object = triplet.object;
    instance.predicate = triplet.predicate;
    instances.push_back(std::move(instance));
  }
  return instances;
}

std::optional<std::pair<std::string, std::string>> parse_question_entities(
    const std::string& question) {
  const std::string q = normalize_phrase(question);
  const std::string between = " relation between ";
  const std::string subject_mark = " (subject) and ";
  const std::string object_mark = " (object) in the image?";

  const auto b = q.find(between);
  if (b == std::string::npos) return std::nullopt;
  const auto s_end = q.find(subject_mark, b + between.size());
  if (s_end == std::string::npos) return std::nullopt;
  const auto o_end = q.find(object_mark, s_end + subject_mark.size());
  if (o_end == std::string::npos) return std::nullopt;

  std::string subject = q.substr(b + between.size(), s_end - b - between.size());
  std::string object =
      q.substr(s_end + subject_mark.size(), o_end - s_end - subject_mark.size());
  if (subject.empty() || object.empty()) return std::nullopt;
  return std::make_pair(std::move(subject), std::move(object));
}

std::string strip_response_core(const std::string& response) {
  std::string core = normalize_phrase(response);
  while (!core.empty() &&
         (core.back() == '.' || core.back() == '!' || core.back() == '?')) {
    core.pop_back();
  }
  // Drop a leading yes/no marker token, with its comma if present.
  std::size_t i = 0;
  while (i < core.size() && core[i] != ' ' && core[i] != ',') ++i;
  const std::string first = core.substr(0, i);
  if (first == "yes" || first == "no") {
    core.erase(0, i);
    while (!core.empty() && (core.front() == ',' || core.front() == ' ')) {
      core.erase(core.begin());
    }
  }
  while (!core.empty() && core.back() == ' ') core.pop_back();
  return core;
}

std::optional<std::string> extract_predicate_phrase(const std::string& core,
                                                    const std::string& subject,
                                                    const std::string& object) {
  if (subject.empty() || object.empty()) return std::nullopt;
  const std::string prefix = subject + ' ';
  const std::string suffix = ' ' + object;
  if (core.size() <= prefix.size() + suffix.size()) return std::nullopt;
  if (!starts_with(core, prefix) || !ends_with(core, suffix)) return std::nullopt;
  std::string predicate =
      core.substr(prefix.size(), core.size() - prefix.size() - suffix.size());
  if (predicate.empty()) return std::nullopt;
  return predicate;
}

}  // namespace art
