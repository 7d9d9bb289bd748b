#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "art/balanced.hpp"
#include "art/scoring.hpp"
#include "art/types.hpp"

namespace art {

// Per-predicate prediction records split by outcome. Every record belongs to
// exactly one pool and carries the predicate it is filed under.
struct PredicatePools {
  std::vector<PredictionRecord> tp;
  std::vector<PredictionRecord> fn;
  std::vector<PredictionRecord> fp;

  std::size_t total() const { return tp.size() + fn.size() + fp.size(); }
};

using OutcomePools = std::map<std::string, PredicatePools>;

// Files each record under its instance's ground-truth predicate:
//   TP  positive prediction, predicted predicate equals the ground truth;
//   FN  negative prediction while an annotated relation exists;
//   FP  positive prediction with a mismatched predicate.
// FP similarity is taken from the record when precomputed, otherwise
// computed over full triplet phrases with the provider. TP similarity is
// trivially 1 and FN similarity undefined, so neither is stored.
// Throws on a record whose instance id is unknown.
OutcomePools classify_outcomes(
    std::vector<PredictionRecord> records,
    const std::map<std::string, InstructionInstance>& instances,
    const EmbeddingProvider& provider);

// Entropy stats over the TP and FN pools, similarity stats over the FP pool
// (population form), and the derived cutoffs at z:
//   h_tp = mu_tp + z*sigma_tp    h_fn = mu_fn + z*sigma_fn
//   t_fn = mu_fn - z*sigma_fn    t_fp = mu_fp - z*sigma_fp
struct ThresholdSet {
  double mu_tp = 0, sigma_tp = 0;
  double mu_fn = 0, sigma_fn = 0;
  double mu_fp = 0, sigma_fp = 0;
  double z = 0;
  double h_tp = 0, h_fn = 0, t_fn = 0, t_fp = 0;
};

ThresholdSet compute_thresholds(const PredicatePools& pools, double z);

enum class ThresholdMode { adaptive, fixed };

struct FixedThresholds {
  double t_fp = 0.95;
  double t_fn = 0.5;
  double h_fn = 0.5;
  double h_tp = 0.5;
};

struct AdaptiveConfig {
  double z_init = 1.96;
  double z_step = 0.1;
  ThresholdMode mode = ThresholdMode::adaptive;
  FixedThresholds fixed;
  long long budget = 0;
};

// Recall-weighted budget split: P_p = (1 - R_p) / sum_j (1 - R_j) over
// predicates with availability, B'_p = min(floor(B * P_p), N_p), with the
// floor remainder redistributed greedily to the largest fractional parts
// (still capped by N_p). All-equal recalls of 1 fall back to uniform.
// probabilities, when given, receives the P_p values for reporting.
BudgetAllocation allocate_budget(
    const std::map<std::string, double>& recalls,
    const std::map<std::string, int>& availability, long long budget,
    std::map<std::string, double>* probabilities = nullptr);

struct SelectionDetail {
  std::vector<std::string> ids;  // sorted instance ids
  double final_z = 0;
  int from_tp_high = 0;
  int from_fn_high = 0;
  int from_fn_low = 0;
  int from_fp_low = 0;
  bool budget_met = true;
};

// One predicate's selection loop: candidates at the current z are
//   {TP | H > h_tp} u {FN | H > h_fn} u {FN | H < t_fn} u {FP | S < t_fp};
// while the candidate count is short of the budget, adaptive mode lowers z
// by z_step, stopping once no further relaxation can admit new records.
// Overshoot is trimmed to the exact budget by informativeness: entropy
// descending for TP and high-band FN, entropy ascending for low-band FN,
// similarity ascending for FP, interleaved criterion round-robin with ties
// broken by record id. Fixed mode applies cfg.fixed once and tops up any
// shortfall from the remaining records in the same informativeness order.
SelectionDetail select_for_predicate(const PredicatePools& pools,
                                     long long budget,
                                     const AdaptiveConfig& cfg);

struct PredicateReport {
  std::string predicate;
  double recall = 0;
  double probability = 0;
  long long budget = 0;
  double final_z = 0;
  int selected_tp_high = 0;
  int selected_fn_high = 0;
  int selected_fn_low = 0;
  int selected_fp_low = 0;
  int selected_total = 0;
  int pool_tp = 0;
  int pool_fn = 0;
  int pool_fp = 0;
  bool budget_met = true;
};

struct IterationResult {
  DatasetPartition partition;
  std::map<std::string, std::vector<std::string>> selections;
  std::vector<PredicateReport> report;
};

// Full sampling iteration: allocate the budget over predicates from recalls
// and record counts, select per predicate, then move the selected ids
// pool -> train. Records must be classified and must cover the current pool.
IterationResult run_iteration(const DatasetPartition& partition,
                              const std::vector<PredictionRecord>& records,
                              const std::map<std::string, double>& recalls,
                              const AdaptiveConfig& cfg, std::uint64_t seed);

}  // namespace art
