#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace art {

enum class RelationCategory { spatial, possessive, semantic };

inline constexpr std::array<RelationCategory, 3> kAllCategories = {
    RelationCategory::spatial, RelationCategory::possessive,
    RelationCategory::semantic};

const char* to_string(RelationCategory category);
std::optional<RelationCategory> category_from_string(const std::string& name);

// Ordered predicate list with a total predicate -> category map.
class PredicateVocabulary {
 public:
  // Normalizes the name; rejects empty names and duplicates.
  void add(const std::string& predicate, RelationCategory category);

  bool contains(const std::string& predicate) const;
  RelationCategory category(const std::string& predicate) const;  // throws on unknown

  const std::vector<std::string>& predicates() const { return predicates_; }
  std::size_t size() const { return predicates_.size(); }

 private:
  std::vector<std::string> predicates_;
  std::map<std::string, RelationCategory> category_of_;
};

// One annotated <subject, predicate, object> fact with region boxes
// (x_min, y_min, x_max, y_max in pixels).
struct RelationTriplet {
  std::string id;
  std::string image_id;
  std::string subject;
  std::string object;
  std::string predicate;
  std::array<double, 4> subject_box{0, 0, 0, 0};
  std::array<double, 4> object_box{0, 0, 0, 0};
};

bool box_is_degenerate(const std::array<double, 4>& box);

// Question / positive / negatives bundle generated from one triplet.
// subject, object and predicate are resolved context, not part of the wire
// format; loaders reconstruct them from the rendered templates.
struct InstructionInstance {
  std::string instance_id;
  std::string triplet_id;
  std::string question;
  std::string positive_response;
  std::vector<std::string> negative_responses;
  RelationCategory positive_category = RelationCategory::spatial;
  std::vector<RelationCategory> negative_categories;

  std::string subject;
  std::string object;
  std::string predicate;
};

// Raw beam-search logits, M beams x L positions x V vocabulary entries.
struct BeamLogits {
  int beam_count = 0;
  int length = 0;
  int vocab_size = 0;
  std::vector<double> values;  // flattened, beam-major then position

  double at(int m, int l, int v) const {
    return values[(static_cast<std::size_t>(m) * length + l) * vocab_size + v];
  }
  double& at(int m, int l, int v) {
    return values[(static_cast<std::size_t>(m) * length + l) * vocab_size + v];
  }
  void validate() const;  // dims >= 1, size match, finite values
};

enum class Outcome { unclassified, tp, fp, fn };

const char* to_string(Outcome outcome);

// One external-model inference result on one instance. predicate is the
// ground-truth predicate of the instance, filled during classification.
// similarity is kept only for FP records: it is trivially 1 for TPs and
// undefined for FNs.
struct PredictionRecord {
  std::string instance_id;
  std::string predicate;
  std::string predicted_text;
  bool is_negative_prediction = false;
  double entropy = 0.0;  // nats
  std::optional<double> similarity;
  std::optional<double> confidence;  // sequence mean log-probability, nats
  Outcome outcome = Outcome::unclassified;

  std::optional<BeamLogits> logits;
  std::optional<std::vector<double>> embedding;  // predicted-phrase embedding
};

// Disjoint train / pool / val id sets plus per-predicate pool availability.
// predicate_of covers every id and makes availability recomputable.
struct DatasetPartition {
  std::set<std::string> train_ids;
  std::set<std::string> pool_ids;
  std::set<std::string> val_ids;
  std::map<std::string, std::string> predicate_of;
  std::map<std::string, int> availability;

  std::size_t total_ids() const {
    return train_ids.size() + pool_ids.size() + val_ids.size();
  }

  std::map<std::string, int> recount_availability() const;
  void refresh_availability() { availability = recount_availability(); }

  // Throws if the sets overlap, predicate_of is not total, or availability
  // does not match a recount.
  void check_invariants() const;

  // Moves ids pool -> train and decrements availability. Throws if an id is
  // not in the pool.
  void move_to_train(const std::vector<std::string>& ids);
};

}  // namespace art
