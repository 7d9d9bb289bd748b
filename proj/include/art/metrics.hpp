#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "art/scoring.hpp"
#include "art/types.hpp"

namespace art {

enum class RankingKey { confidence, neg_entropy };

const char* to_string(RankingKey key);

struct EvalConfig {
  std::vector<int> k_values = {20, 50};
  double similarity_threshold = 0.95;
  RankingKey ranking_key = RankingKey::confidence;

  void validate() const;
};

// One prediction joined with its ground-truth triplet, ready for ranking.
// All phrases are normalized.
struct EvalRecord {
  std::string record_id;
  std::string image_id;
  std::string subject;
  std::string object;
  std::string gt_predicate;
  std::optional<std::string> predicted_predicate;  // absent when nonconforming
  std::string predicted_core;  // stripped predicted text, similarity fallback
  bool is_negative = false;
  std::optional<double> confidence;
  double entropy = 0.0;
};

// Joins records to triplets. Without instances the instance id is taken to
// be the triplet id (the generator emits them that way); with instances the
// join goes through triplet_id. Throws when a record resolves to no triplet.
std::vector<EvalRecord> resolve_eval_records(
    const std::vector<PredictionRecord>& records,
    const std::vector<RelationTriplet>& triplets,
    const std::map<std::string, InstructionInstance>* instances = nullptr);

// Fraction of ground-truth triplets recovered by a top-k prediction of the
// same image matching subject, object and predicate exactly. Negative
// responses never enter the ranking.
std::map<int, double> recall_at_k(const std::vector<EvalRecord>& records,
                                  const std::vector<RelationTriplet>& ground_truth,
                                  const EvalConfig& cfg);

// Unweighted mean of per-predicate recall over predicates with >= 1 GT.
std::map<int, double> mean_recall_at_k(
    const std::vector<EvalRecord>& records,
    const std::vector<RelationTriplet>& ground_truth, const EvalConfig& cfg);

struct GeneralizedRecall {
  std::map<int, double> recall;       // gR@k
  std::map<int, double> mean_recall;  // gmR@k
};

// Like recall / mean recall, except a prediction also recovers a GT triplet
// when subject and object match and the full-triplet-phrase similarity is
// >= cfg.similarity_threshold.
GeneralizedRecall generalized_recall_at_k(
    const std::vector<EvalRecord>& records,
    const std::vector<RelationTriplet>& ground_truth, const EvalConfig& cfg,
    const EmbeddingProvider& provider);

// (distinct predicate phrases predicted, distinct predicted predicates
// absent from the training predicate vocabulary).
std::pair<int, int> prediction_diversity(
    const std::vector<EvalRecord>& records,
    const std::set<std::string>& train_predicates);

struct MetricsReport {
  struct AtK {
    double recall = 0;
    double mean_recall = 0;
    double g_recall = 0;
    double g_mean_recall = 0;
  };
  std::map<int, AtK> at_k;
  // predicate -> k -> exact recall
  std::map<std::string, std::map<int, double>> per_predicate;
  int unique_predictions = 0;
  int unseen_predictions = 0;
};

MetricsReport evaluate(const std::vector<EvalRecord>& records,
                       const std::vector<RelationTriplet>& ground_truth,
                       const EvalConfig& cfg, const EmbeddingProvider& provider,
                       const std::set<std::string>& train_predicates);

}  // namespace art
