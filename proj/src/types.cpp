#include "art/types.hpp"

#include <cmath>

#include "art/text.hpp"

namespace art {

const char* to_string(RelationCategory category) {
  switch (category) {
    case RelationCategory::spatial:
      return "spatial";
    case RelationCategory::possessive:
      return "possessive";
    case RelationCategory::semantic:
      return "semantic";
  }
  throw std::logic_error("unreachable relation category");
}

std::optional<RelationCategory> category_from_string(const std::string& name) {
  const std::string n = normalize_phrase(name);
  if (n == "spatial") return RelationCategory::spatial;
  if (n == "possessive") return RelationCategory::possessive;
  if (n == "semantic") return RelationCategory::semantic;
  return std::nullopt;
}

void PredicateVocabulary::add(const std::string& predicate,
                              RelationCategory category) {
  const std::string name = normalize_phrase(predicate);
  if (name.empty()) {
    throw std::invalid_argument("vocabulary: empty predicate name");
  }
  if (category_of_.count(name)) {
    throw std::invalid_argument("vocabulary: duplicate predicate '" + name + "'");
  }
  predicates_.push_back(name);
  category_of_.emplace(name, category);
}

bool PredicateVocabulary::contains(const std::string& predicate) const {
  return category_of_.count(normalize_phrase(predicate)) > 0;
}

RelationCategory PredicateVocabulary::category(const std::string& predicate) const {
  const auto it = category_of_.find(normalize_phrase(predicate));
  if (it == category_of_.end()) {
    throw std::out_of_range("unknown predicate '" + normalize_phrase(predicate) + "'");
  }
  return it->second;
}

bool box_is_degenerate(const std::array<double, 4>& box) {
  return !(box[0] < box[2]) || !(box[1] < box[3]);
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::unclassified:
      return "unclassified";
    case Outcome::tp:
      return "TP";
    case Outcome::fp:
      return "FP";
    case Outcome::fn:
      return "FN";
  }
  throw std::logic_error("unreachable outcome");
}

void BeamLogits::validate() const {
  if (beam_count < 1 || length < 1 || vocab_size < 1) {
    throw std::invalid_argument("beam logits: all dims must be >= 1");
  }
  const std::size_t expected = static_cast<std::size_t>(beam_count) * length * vocab_size;
  if (values.size() != expected) {
    throw std::invalid_argument("beam logits: value count does not match dims");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("beam logits: non-finite value");
    }
  }
}

std::map<std::string, int> DatasetPartition::recount_availability() const {
  std::map<std::string, int> counts;
  for (const auto& id : pool_ids) {
    const auto it = predicate_of.find(id);
    if (it == predicate_of.end()) {
      throw std::logic_error("partition: pool id '" + id + "' has no predicate");
    }
    ++counts[it->second];
  }
  return counts;
}

void DatasetPartition::check_invariants() const {
  for (const auto& id : train_ids) {
    if (pool_ids.count(id) || val_ids.count(id)) {
      throw std::logic_error("partition: id '" + id + "' appears in two sets");
    }
  }
  for (const auto& id : pool_ids) {
    if (val_ids.count(id)) {
      throw std::logic_error("partition: id '" + id + "' appears in two sets");
    }
  }
  for (const auto* ids : {&train_ids, &pool_ids, &val_ids}) {
    for (const auto& id : *ids) {
      if (!predicate_of.count(id)) {
        throw std::logic_error("partition: id '" + id + "' has no predicate");
      }
    }
  }
  const auto counts = recount_availability();
  if (counts != availability) {
    throw std::logic_error("partition: availability does not match pool recount");
  }
}

void DatasetPartition::move_to_train(const std::vector<std::string>& ids) {
  for (const auto& id : ids) {
    if (!pool_ids.erase(id)) {
      throw std::invalid_argument("partition: id '" + id + "' is not in the pool");
    }
    train_ids.insert(id);
    const auto& predicate = predicate_of.at(id);
    if (--availability[predicate] == 0) availability.erase(predicate);
  }
}

}  // namespace art
