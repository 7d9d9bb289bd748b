#pragma once

#include <map>
#include <string>
#include <vector>

#include "art/adaptive.hpp"
#include "art/types.hpp"

namespace art {

// Line-delimited JSON annotation format:
//   {"id", "image_id", "subject", "object", "predicate",
//    "subject_box": [4 reals], "object_box": [4 reals]}
// Errors name the offending line, predicate or triplet id.
std::vector<RelationTriplet> load_annotations(const std::string& path,
                                              const PredicateVocabulary& vocab);
// Without a vocabulary the predicate check is skipped; used for evaluation
// ground truth, which is its own reference.
std::vector<RelationTriplet> load_annotations(const std::string& path);
void save_annotations(const std::string& path,
                      const std::vector<RelationTriplet>& triplets);

// Vocabulary file: one "predicate<TAB>category" line per predicate.
PredicateVocabulary load_vocabulary(const std::string& path);
void save_vocabulary(const std::string& path, const PredicateVocabulary& vocab);

// Instance wire format (one JSON object per line):
//   {"instance_id", "triplet_id", "question", "positive_response",
//    "negative_responses": [...], "positive_category",
//    "negative_categories": [...]}
// Loading re-derives subject, object and predicate from the rendered
// templates and fails naming the instance when they do not parse.
std::vector<InstructionInstance> load_instances(const std::string& path);
void save_instances(const std::string& path,
                    const std::vector<InstructionInstance>& instances);

std::map<std::string, InstructionInstance> index_instances(
    const std::vector<InstructionInstance>& instances);

// Prediction-record wire format (one JSON object per line):
//   {"instance_id", "predicted_text", "is_negative_prediction",
//    "confidence", one of "logits" (M x L x V nested arrays) / "entropy",
//    optional "embedding" / "similarity"}
// Entropy is computed from logits when not given explicitly.
std::vector<PredictionRecord> load_records(const std::string& path);
void save_records(const std::string& path,
                  const std::vector<PredictionRecord>& records,
                  bool with_logits = true);

// Partition file: JSON with the three id arrays plus the id -> predicate
// map that makes availability recomputable on load.
DatasetPartition load_partition(const std::string& path);
void save_partition(const std::string& path, const DatasetPartition& partition);

// Validation recall file: one JSON object {predicate: recall}.
std::map<std::string, double> load_recalls(const std::string& path);
void save_recalls(const std::string& path,
                  const std::map<std::string, double>& recalls);

// Iteration report, one JSON object per predicate per line.
void save_report(const std::string& path,
                 const std::vector<PredicateReport>& report,
                 const std::string& mode);

void save_selected_ids(const std::string& path,
                       const std::vector<std::string>& ids);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace art
