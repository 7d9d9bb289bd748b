#include "art/adaptive.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include "art/instruction.hpp"
#include "art/text.hpp"

namespace art {

namespace {

// Full triplet phrase "<s> <p> <o>"; similarity is computed over these so a
// predicate change moves the whole-phrase embedding.
std::string triplet_phrase(const std::string& subject, const std::string& predicate,
                           const std::string& object) {
  return normalize_phrase(subject + " " + predicate + " " + object);
}

double resolve_fp_similarity(const PredictionRecord& record,
                             const std::string& predicted_phrase,
                             const std::string& ground_truth_phrase,
                             const EmbeddingProvider& provider) {
  if (record.similarity) return *record.similarity;
  if (record.embedding) {
    auto predicted = *record.embedding;
    double norm_sq = 0.0;
    for (double x : predicted) norm_sq += x * x;
    if (norm_sq <= 0.0) {
      throw std::invalid_argument("record '" + record.instance_id +
                                  "': zero embedding vector");
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : predicted) x *= inv;
    return cosine(predicted, provider.embed(ground_truth_phrase));
  }
  return similarity(predicted_phrase, ground_truth_phrase, provider);
}

struct Stats {
  double mean = 0;
  double stddev = 0;
};

template <typename GetValue>
Stats population_stats(const std::vector<PredictionRecord>& records,
                       GetValue get_value) {
  if (records.empty()) return {};
  double sum = 0.0;
  for (const auto& r : records) sum += get_value(r);
  const double mean = sum / static_cast<double>(records.size());
  double var = 0.0;
  for (const auto& r : records) {
    const double d = get_value(r) - mean;
    var += d * d;
  }
  var /= static_cast<double>(records.size());
  return {mean, std::sqrt(std::max(var, 0.0))};
}

double record_entropy(const PredictionRecord& r) { return r.entropy; }
double record_similarity(const PredictionRecord& r) {
  if (!r.similarity) {
    throw std::logic_error("FP record '" + r.instance_id + "' has no similarity");
  }
  return *r.similarity;
}

enum class Criterion { tp_high, fn_high, fn_low, fp_low };

struct Candidate {
  const PredictionRecord* record;
  double key;  // entropy or similarity depending on the criterion
};

// Sorted candidate list for one criterion. ascending=false ranks larger keys
// as more informative.
std::vector<Candidate> ranked(const std::vector<const PredictionRecord*>& records,
                              bool use_similarity, bool ascending) {
  std::vector<Candidate> out;
  out.reserve(records.size());
  for (const auto* r : records) {
    out.push_back({r, use_similarity ? record_similarity(*r) : r->entropy});
  }
  std::sort(out.begin(), out.end(), [ascending](const Candidate& a, const Candidate& b) {
    if (a.key != b.key) return ascending ? a.key < b.key : a.key > b.key;
    return a.record->instance_id < b.record->instance_id;
  });
  return out;
}

struct CandidateSets {
  std::vector<const PredictionRecord*> tp_high, fn_high, fn_low, fp_low;

  std::size_t distinct() const {
    // Only FN records can appear in both bands (when t_fn > h_fn at
    // negative z), so the union size is cheap to correct.
    std::set<std::string> fn_ids;
    for (const auto* r : fn_high) fn_ids.insert(r->instance_id);
    std::size_t dup = 0;
    for (const auto* r : fn_low) {
      if (fn_ids.count(r->instance_id)) ++dup;
    }
    return tp_high.size() + fn_high.size() + fn_low.size() + fp_low.size() - dup;
  }
};

CandidateSets collect_candidates(const PredicatePools& pools,
                                 double h_tp, double h_fn, double t_fn,
                                 double t_fp) {
  CandidateSets sets;
  for (const auto& r : pools.tp) {
    if (r.entropy > h_tp) sets.tp_high.push_back(&r);
  }
  for (const auto& r : pools.fn) {
    if (r.entropy > h_fn) sets.fn_high.push_back(&r);
    if (r.entropy < t_fn) sets.fn_low.push_back(&r);
  }
  for (const auto& r : pools.fp) {
    if (record_similarity(r) < t_fp) sets.fp_low.push_back(&r);
  }
  return sets;
}

// How many records can qualify at any z. With sigma = 0 a threshold is
// pinned at mu, so records sitting exactly on mu never pass the strict
// comparison no matter how far z drops.
std::size_t eventually_qualifying(const PredicatePools& pools,
                                  const ThresholdSet& stats) {
  std::size_t n = 0;
  for (const auto& r : pools.tp) {
    if (stats.sigma_tp > 0 || r.entropy > stats.mu_tp) ++n;
  }
  for (const auto& r : pools.fn) {
    if (stats.sigma_fn > 0 || r.entropy != stats.mu_fn) ++n;
  }
  for (const auto& r : pools.fp) {
    if (stats.sigma_fp > 0 || record_similarity(r) < stats.mu_fp) ++n;
  }
  return n;
}

constexpr int kMaxRefinementSteps = 100000;

}  // namespace

OutcomePools classify_outcomes(
    std::vector<PredictionRecord> records,
    const std::map<std::string, InstructionInstance>& instances,
    const EmbeddingProvider& provider) {
  OutcomePools pools;
  for (auto& record : records) {
    const auto it = instances.find(record.instance_id);
    if (it == instances.end()) {
      throw std::invalid_argument("classify: unknown instance id '" +
                                  record.instance_id + "'");
    }
    const auto& instance = it->second;
    const std::string subject = normalize_phrase(instance.subject);
    const std::string object = normalize_phrase(instance.object);
    const std::string gt_predicate = normalize_phrase(instance.predicate);
    record.predicate = gt_predicate;

    if (record.is_negative_prediction) {
      record.outcome = Outcome::fn;
      record.similarity.reset();
      pools[gt_predicate].fn.push_back(std::move(record));
      continue;
    }

    const std::string core = strip_response_core(record.predicted_text);
    const auto predicted = extract_predicate_phrase(core, subject, object);
    if (predicted && *predicted == gt_predicate) {
      record.outcome = Outcome::tp;
      record.similarity.reset();
      pools[gt_predicate].tp.push_back(std::move(record));
      continue;
    }

    const std::string gt_phrase = triplet_phrase(subject, gt_predicate, object);
    const std::string predicted_phrase =
        predicted ? triplet_phrase(subject, *predicted, object) : core;
    record.outcome = Outcome::fp;
    record.similarity =
        resolve_fp_similarity(record, predicted_phrase, gt_phrase, provider);
    pools[gt_predicate].fp.push_back(std::move(record));
  }
  return pools;
}

ThresholdSet compute_thresholds(const PredicatePools& pools, double z) {
  const Stats tp = population_stats(pools.tp, record_entropy);
  const Stats fn = population_stats(pools.fn, record_entropy);
  const Stats fp = population_stats(pools.fp, record_similarity);

  ThresholdSet t;
  t.mu_tp = tp.mean;
  t.sigma_tp = tp.stddev;
  t.mu_fn = fn.mean;
  t.sigma_fn = fn.stddev;
  t.mu_fp = fp.mean;
  t.sigma_fp = fp.stddev;
  t.z = z;
  t.h_tp = t.mu_tp + z * t.sigma_tp;
  t.h_fn = t.mu_fn + z * t.sigma_fn;
  t.t_fn = t.mu_fn - z * t.sigma_fn;
  t.t_fp = t.mu_fp - z * t.sigma_fp;
  return t;
}

BudgetAllocation allocate_budget(const std::map<std::string, double>& recalls,
                                 const std::map<std::string, int>& availability,
                                 long long budget,
                                 std::map<std::string, double>* probabilities) {
  if (budget < 0) {
    throw std::invalid_argument("budget allocation: negative budget");
  }

  std::vector<std::string> predicates;
  for (const auto& [predicate, count] : availability) {
    if (count > 0) predicates.push_back(predicate);
  }

  BudgetAllocation allocation;
  allocation.total_budget = budget;
  if (probabilities) probabilities->clear();
  if (predicates.empty()) return allocation;

  double weight_sum = 0.0;
  std::map<std::string, double> weight;
  for (const auto& predicate : predicates) {
    const auto it = recalls.find(predicate);
    if (it == recalls.end()) {
      throw std::invalid_argument("budget allocation: no recall for predicate '" +
                                  predicate + "'");
    }
    if (!(it->second >= 0.0) || !(it->second <= 1.0)) {
      throw std::invalid_argument("budget allocation: recall for '" + predicate +
                                  "' outside [0, 1]");
    }
    weight[predicate] = 1.0 - it->second;
    weight_sum += weight[predicate];
  }

  struct Share {
    std::string predicate;
    double raw;
    int base;
    double frac;
  };
  std::vector<Share> shares;
  shares.reserve(predicates.size());
  long long floor_sum = 0;
  for (const auto& predicate : predicates) {
    // All recalls at 1 make every weight zero; fall back to uniform.
    const double p = weight_sum > 0.0
                         ? weight[predicate] / weight_sum
                         : 1.0 / static_cast<double>(predicates.size());
    if (probabilities) (*probabilities)[predicate] = p;
    const double raw = static_cast<double>(budget) * p;
    // The epsilon absorbs float dust on products that are integers on paper.
    const int floored = static_cast<int>(std::floor(raw + 1e-9));
    floor_sum += floored;
    shares.push_back(
        {predicate, raw, std::min(floored, availability.at(predicate)),
         raw - floored});
  }

  // Only the rounding loss is redistributed; budget lost to the
  // availability cap stays unspent.
  long long remainder = budget - floor_sum;

  std::sort(shares.begin(), shares.end(), [](const Share& a, const Share& b) {
    if (a.frac != b.frac) return a.frac > b.frac;
    return a.predicate < b.predicate;
  });
  for (auto& share : shares) {
    if (remainder == 0) break;
    if (share.base < availability.at(share.predicate)) {
      ++share.base;
      --remainder;
    }
  }

  for (const auto& share : shares) {
    allocation.per_predicate[share.predicate] = share.base;
  }
  return allocation;
}

SelectionDetail select_for_predicate(const PredicatePools& pools,
                                     long long budget,
                                     const AdaptiveConfig& cfg) {
  if (budget < 0) {
    throw std::invalid_argument("selection: negative budget");
  }
  if (budget > static_cast<long long>(pools.total())) {
    throw std::invalid_argument("selection: budget exceeds available records");
  }

  SelectionDetail detail;
  if (budget == 0) {
    detail.final_z = cfg.mode == ThresholdMode::adaptive ? cfg.z_init : 0.0;
    return detail;
  }

  CandidateSets sets;
  double final_z = 0.0;

  if (cfg.mode == ThresholdMode::adaptive) {
    const ThresholdSet stats = compute_thresholds(pools, cfg.z_init);
    const std::size_t reachable = eventually_qualifying(pools, stats);
    double z = cfg.z_init;
    for (int step = 0;; ++step) {
      const ThresholdSet t = compute_thresholds(pools, z);
      sets = collect_candidates(pools, t.h_tp, t.h_fn, t.t_fn, t.t_fp);
      const std::size_t count = sets.distinct();
      if (count >= static_cast<std::size_t>(budget) || count >= reachable ||
          step >= kMaxRefinementSteps) {
        break;
      }
      z -= cfg.z_step;
    }
    final_z = z;
  } else {
    sets = collect_candidates(pools, cfg.fixed.h_tp, cfg.fixed.h_fn,
                              cfg.fixed.t_fn, cfg.fixed.t_fp);
  }

  std::vector<const PredictionRecord*> tp_all, fn_all, fp_all;
  for (const auto& r : pools.tp) tp_all.push_back(&r);
  for (const auto& r : pools.fn) fn_all.push_back(&r);
  for (const auto& r : pools.fp) fp_all.push_back(&r);

  // Informativeness order per criterion; the round-robin interleaves them.
  std::array<std::vector<Candidate>, 4> lists = {
      ranked(sets.tp_high, false, false),   // entropy descending
      ranked(sets.fn_high, false, false),   // entropy descending
      ranked(sets.fn_low, false, true),     // entropy ascending
      ranked(sets.fp_low, true, true),      // similarity ascending
  };
  // Fixed mode tops up a shortfall from the full pools in the same order.
  const std::array<std::vector<Candidate>, 4> topup = {
      ranked(tp_all, false, false),
      ranked(fn_all, false, false),
      ranked(fn_all, false, true),
      ranked(fp_all, true, true),
  };

  std::set<std::string> taken;
  std::array<std::size_t, 4> cursor = {0, 0, 0, 0};
  std::array<int*, 4> tallies = {&detail.from_tp_high, &detail.from_fn_high,
                                 &detail.from_fn_low, &detail.from_fp_low};

  const auto drain = [&](const std::array<std::vector<Candidate>, 4>& source) {
    bool progressed = true;
    while (static_cast<long long>(taken.size()) < budget && progressed) {
      progressed = false;
      for (int c = 0; c < 4; ++c) {
        if (static_cast<long long>(taken.size()) >= budget) break;
        auto& i = cursor[c];
        while (i < source[c].size() &&
               taken.count(source[c][i].record->instance_id)) {
          ++i;
        }
        if (i == source[c].size()) continue;
        taken.insert(source[c][i].record->instance_id);
        ++(*tallies[c]);
        ++i;
        progressed = true;
      }
    }
  };

  drain(lists);
  if (cfg.mode == ThresholdMode::fixed &&
      static_cast<long long>(taken.size()) < budget) {
    cursor = {0, 0, 0, 0};
    drain(topup);
  }

  detail.ids.assign(taken.begin(), taken.end());
  detail.final_z = final_z;
  detail.budget_met = static_cast<long long>(taken.size()) == budget;
  return detail;
}

IterationResult run_iteration(const DatasetPartition& partition,
                              const std::vector<PredictionRecord>& records,
                              const std::map<std::string, double>& recalls,
                              const AdaptiveConfig& cfg,
                              [[maybe_unused]] std::uint64_t seed) {
  partition.check_invariants();

  OutcomePools pools;
  std::set<std::string> covered;
  for (const auto& record : records) {
    const auto& id = record.instance_id;
    if (!partition.pool_ids.count(id)) {
      if (partition.train_ids.count(id) || partition.val_ids.count(id)) {
        continue;  // records for already-trained or validation ids
      }
      throw std::invalid_argument("iteration: record for unknown id '" + id + "'");
    }
    if (record.outcome == Outcome::unclassified) {
      throw std::invalid_argument("iteration: record '" + id + "' is unclassified");
    }
    const auto& expected = partition.predicate_of.at(id);
    if (record.predicate != expected) {
      throw std::invalid_argument("iteration: record '" + id + "' filed under '" +
                                  record.predicate + "', partition says '" +
                                  expected + "'");
    }
    if (!covered.insert(id).second) {
      throw std::invalid_argument("iteration: duplicate record for id '" + id + "'");
    }
    auto& pool = pools[record.predicate];
    switch (record.outcome) {
      case Outcome::tp:
        pool.tp.push_back(record);
        break;
      case Outcome::fn:
        pool.fn.push_back(record);
        break;
      case Outcome::fp:
        pool.fp.push_back(record);
        break;
      default:
        break;
    }
  }
  for (const auto& id : partition.pool_ids) {
    if (!covered.count(id)) {
      throw std::invalid_argument("iteration: no prediction record for pool id '" +
                                  id + "'");
    }
  }

  // N_p counts all pool prediction records of p, whatever the outcome.
  std::map<std::string, int> counts;
  for (const auto& [predicate, pool] : pools) {
    counts[predicate] = static_cast<int>(pool.total());
  }

  std::map<std::string, double> probabilities;
  const BudgetAllocation allocation =
      allocate_budget(recalls, counts, cfg.budget, &probabilities);

  IterationResult result;
  result.partition = partition;
  std::vector<std::string> all_selected;
  for (const auto& [predicate, pool] : pools) {
    const auto it = allocation.per_predicate.find(predicate);
    const long long budget = it == allocation.per_predicate.end() ? 0 : it->second;
    const SelectionDetail detail = select_for_predicate(pool, budget, cfg);

    PredicateReport report;
    report.predicate = predicate;
    report.recall = recalls.count(predicate) ? recalls.at(predicate) : 0.0;
    report.probability =
        probabilities.count(predicate) ? probabilities.at(predicate) : 0.0;
    report.budget = budget;
    report.final_z = detail.final_z;
    report.selected_tp_high = detail.from_tp_high;
    report.selected_fn_high = detail.from_fn_high;
    report.selected_fn_low = detail.from_fn_low;
    report.selected_fp_low = detail.from_fp_low;
    report.selected_total = static_cast<int>(detail.ids.size());
    report.pool_tp = static_cast<int>(pool.tp.size());
    report.pool_fn = static_cast<int>(pool.fn.size());
    report.pool_fp = static_cast<int>(pool.fp.size());
    report.budget_met = detail.budget_met;
    result.report.push_back(std::move(report));

    if (!detail.ids.empty()) {
      result.selections[predicate] = detail.ids;
      all_selected.insert(all_selected.end(), detail.ids.begin(), detail.ids.end());
    }
  }

  result.partition.move_to_train(all_selected);
  result.partition.check_invariants();
  return result;
}

}  // namespace art
