#include "art/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "art/instruction.hpp"
#include "art/text.hpp"

namespace art {

const char* to_string(RankingKey key) {
  switch (key) {
    case RankingKey::confidence:
      return "confidence";
    case RankingKey::neg_entropy:
      return "neg_entropy";
  }
  throw std::logic_error("unreachable ranking key");
}

void EvalConfig::validate() const {
  if (k_values.empty()) {
    throw std::invalid_argument("eval config: k_values must not be empty");
  }
  for (int k : k_values) {
    if (k <= 0) throw std::invalid_argument("eval config: k values must be positive");
  }
  if (!(similarity_threshold > 0.0) || !(similarity_threshold <= 1.0)) {
    throw std::invalid_argument("eval config: similarity_threshold outside (0, 1]");
  }
}

std::vector<EvalRecord> resolve_eval_records(
    const std::vector<PredictionRecord>& records,
    const std::vector<RelationTriplet>& triplets,
    const std::map<std::string, InstructionInstance>* instances) {
  std::map<std::string, const RelationTriplet*> triplet_by_id;
  for (const auto& t : triplets) triplet_by_id[t.id] = &t;

  std::vector<EvalRecord> out;
  out.reserve(records.size());
  for (const auto& record : records) {
    std::string triplet_id = record.instance_id;
    if (instances) {
      const auto it = instances->find(record.instance_id);
      if (it == instances->end()) {
        throw std::invalid_argument("eval: unknown instance id '" +
                                    record.instance_id + "'");
      }
      triplet_id = it->second.triplet_id;
    }
    const auto it = triplet_by_id.find(triplet_id);
    if (it == triplet_by_id.end()) {
      throw std::invalid_argument("eval: record '" + record.instance_id +
                                  "' resolves to no ground-truth triplet");
    }
    const auto& triplet = *it->second;

    EvalRecord r;
    r.record_id = record.instance_id;
    r.image_id = triplet.image_id;
    r.subject = normalize_phrase(triplet.subject);
    r.object = normalize_phrase(triplet.object);
    r.gt_predicate = normalize_phrase(triplet.predicate);
    r.is_negative = record.is_negative_prediction;
    r.confidence = record.confidence;
    r.entropy = record.entropy;
    if (!r.is_negative) {
      r.predicted_core = strip_response_core(record.predicted_text);
      r.predicted_predicate =
          extract_predicate_phrase(r.predicted_core, r.subject, r.object);
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

struct GtTriplet {
  std::string subject, object, predicate;
};

struct ImageEval {
  std::vector<const EvalRecord*> ranked;  // positives, best first
  std::vector<GtTriplet> gt;
};

double ranking_value(const EvalRecord& r, RankingKey key) {
  if (key == RankingKey::confidence) {
    if (!r.confidence) {
      throw std::invalid_argument("eval: record '" + r.record_id +
                                  "' has no confidence for ranking");
    }
    return *r.confidence;
  }
  return -r.entropy;
}

std::map<std::string, ImageEval> group_by_image(
    const std::vector<EvalRecord>& records,
    const std::vector<RelationTriplet>& ground_truth, const EvalConfig& cfg) {
  std::map<std::string, ImageEval> images;
  for (const auto& t : ground_truth) {
    images[t.image_id].gt.push_back({normalize_phrase(t.subject),
                                     normalize_phrase(t.object),
                                     normalize_phrase(t.predicate)});
  }
  for (const auto& r : records) {
    if (r.is_negative) continue;  // a negative response asserts no relation
    ranking_value(r, cfg.ranking_key);  // validate before ranking
    images[r.image_id].ranked.push_back(&r);
  }
  for (auto& [image_id, image] : images) {
    std::sort(image.ranked.begin(), image.ranked.end(),
              [&cfg](const EvalRecord* a, const EvalRecord* b) {
                const double ka = ranking_value(*a, cfg.ranking_key);
                const double kb = ranking_value(*b, cfg.ranking_key);
                if (ka != kb) return ka > kb;
                return a->record_id < b->record_id;
              });
  }
  return images;
}

// Recovered / total counters, overall and per predicate, exact and
// generalized. provider == nullptr skips the generalized rule.
struct RecallCounts {
  long long gt_total = 0;
  std::map<int, long long> recovered;
  std::map<int, long long> g_recovered;
  std::map<std::string, long long> gt_per_predicate;
  std::map<std::string, std::map<int, long long>> recovered_per_predicate;
  std::map<std::string, std::map<int, long long>> g_recovered_per_predicate;
};

RecallCounts count_recovered(const std::vector<EvalRecord>& records,
                             const std::vector<RelationTriplet>& ground_truth,
                             const EvalConfig& cfg,
                             const EmbeddingProvider* provider) {
  cfg.validate();
  const auto images = group_by_image(records, ground_truth, cfg);

  RecallCounts counts;
  std::map<std::pair<std::string, std::string>, double> similarity_cache;
  const auto phrase_similarity = [&](const std::string& predicted,
                                     const std::string& truth) {
    const auto key = std::make_pair(predicted, truth);
    const auto it = similarity_cache.find(key);
    if (it != similarity_cache.end()) return it->second;
    const double s = similarity(predicted, truth, *provider);
    similarity_cache.emplace(key, s);
    return s;
  };

  for (const auto& [image_id, image] : images) {
    for (const auto& gt : image.gt) {
      ++counts.gt_total;
      ++counts.gt_per_predicate[gt.predicate];
      const std::string gt_phrase =
          gt.subject + ' ' + gt.predicate + ' ' + gt.object;

      for (const int k : cfg.k_values) {
        const std::size_t top =
            std::min(static_cast<std::size_t>(k), image.ranked.size());
        bool exact = false;
        bool generalized = false;
        for (std::size_t i = 0; i < top && !(exact && generalized); ++i) {
          const auto& pred = *image.ranked[i];
          if (pred.subject != gt.subject || pred.object != gt.object) continue;
          if (pred.predicted_predicate &&
              *pred.predicted_predicate == gt.predicate) {
            exact = true;
            generalized = true;
            break;
          }
          if (provider && !generalized) {
            const std::string predicted_phrase =
                pred.predicted_predicate
                    ? pred.subject + ' ' + *pred.predicted_predicate + ' ' +
                          pred.object
                    : pred.predicted_core;
            if (!predicted_phrase.empty() &&
                phrase_similarity(predicted_phrase, gt_phrase) >=
                    cfg.similarity_threshold) {
              generalized = true;
            }
          }
        }
        if (exact) {
          ++counts.recovered[k];
          ++counts.recovered_per_predicate[gt.predicate][k];
        }
        if (generalized) {
          ++counts.g_recovered[k];
          ++counts.g_recovered_per_predicate[gt.predicate][k];
        }
      }
    }
  }
  return counts;
}

std::map<int, double> micro_recall(const RecallCounts& counts,
                                   const std::map<int, long long>& recovered,
                                   const EvalConfig& cfg) {
  std::map<int, double> out;
  for (const int k : cfg.k_values) {
    const auto it = recovered.find(k);
    const long long r = it == recovered.end() ? 0 : it->second;
    out[k] = counts.gt_total == 0
                 ? 0.0
                 : static_cast<double>(r) / static_cast<double>(counts.gt_total);
  }
  return out;
}

std::map<int, double> macro_recall(
    const RecallCounts& counts,
    const std::map<std::string, std::map<int, long long>>& recovered,
    const EvalConfig& cfg) {
  std::map<int, double> out;
  for (const int k : cfg.k_values) {
    double sum = 0.0;
    int n = 0;
    for (const auto& [predicate, total] : counts.gt_per_predicate) {
      if (total == 0) continue;
      long long r = 0;
      const auto pit = recovered.find(predicate);
      if (pit != recovered.end()) {
        const auto kit = pit->second.find(k);
        if (kit != pit->second.end()) r = kit->second;
      }
      sum += static_cast<double>(r) / static_cast<double>(total);
      ++n;
    }
    out[k] = n == 0 ? 0.0 : sum / n;
  }
  return out;
}

}  // namespace

std::map<int, double> recall_at_k(const std::vector<EvalRecord>& records,
                                  const std::vector<RelationTriplet>& ground_truth,
                                  const EvalConfig& cfg) {
  const auto counts = count_recovered(records, ground_truth, cfg, nullptr);
  return micro_recall(counts, counts.recovered, cfg);
}

std::map<int, double> mean_recall_at_k(
    const std::vector<EvalRecord>& records,
    const std::vector<RelationTriplet>& ground_truth, const EvalConfig& cfg) {
  const auto counts = count_recovered(records, ground_truth, cfg, nullptr);
  return macro_recall(counts, counts.recovered_per_predicate, cfg);
}

GeneralizedRecall generalized_recall_at_k(
    const std::vector<EvalRecord>& records,
    const std::vector<RelationTriplet>& ground_truth, const EvalConfig& cfg,
    const EmbeddingProvider& provider) {
  const auto counts = count_recovered(records, ground_truth, cfg, &provider);
  GeneralizedRecall out;
  out.recall = micro_recall(counts, counts.g_recovered, cfg);
  out.mean_recall = macro_recall(counts, counts.g_recovered_per_predicate, cfg);
  return out;
}

std::pair<int, int> prediction_diversity(
    const std::vector<EvalRecord>& records,
    const std::set<std::string>& train_predicates) {
  std::set<std::string> seen_train;
  for (const auto& p : train_predicates) seen_train.insert(normalize_phrase(p));

  std::set<std::string> unique;
  std::set<std::string> unseen;
  for (const auto& r : records) {
    if (r.is_negative) continue;
    const std::string phrase =
        r.predicted_predicate ? *r.predicted_predicate : r.predicted_core;
    if (phrase.empty()) continue;
    unique.insert(phrase);
    if (!seen_train.count(phrase)) unseen.insert(phrase);
  }
  return {static_cast<int>(unique.size()), static_cast<int>(unseen.size())};
}

MetricsReport evaluate(const std::vector<EvalRecord>& records,
                       const std::vector<RelationTriplet>& ground_truth,
                       const EvalConfig& cfg, const EmbeddingProvider& provider,
                       const std::set<std::string>& train_predicates) {
  const auto counts = count_recovered(records, ground_truth, cfg, &provider);

  MetricsReport report;
  const auto recall = micro_recall(counts, counts.recovered, cfg);
  const auto mean = macro_recall(counts, counts.recovered_per_predicate, cfg);
  const auto g_recall = micro_recall(counts, counts.g_recovered, cfg);
  const auto g_mean = macro_recall(counts, counts.g_recovered_per_predicate, cfg);
  for (const int k : cfg.k_values) {
    report.at_k[k] = {recall.at(k), mean.at(k), g_recall.at(k), g_mean.at(k)};
  }
  for (const auto& [predicate, total] : counts.gt_per_predicate) {
    if (total == 0) continue;
    for (const int k : cfg.k_values) {
      long long r = 0;
      const auto pit = counts.recovered_per_predicate.find(predicate);
      if (pit != counts.recovered_per_predicate.end()) {
        const auto kit = pit->second.find(k);
        if (kit != pit->second.end()) r = kit->second;
      }
      report.per_predicate[predicate][k] =
          static_cast<double>(r) / static_cast<double>(total);
    }
  }
  const auto [unique, unseen] = prediction_diversity(records, train_predicates);
  report.unique_predictions = unique;
  report.unseen_predictions = unseen;
  return report;
}

}  // namespace art
