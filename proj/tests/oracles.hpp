#pragma once

// Reference implementations for the test suite. Each one re-derives its
// answer with flat loops and explicit set handling, independent of the
// library code path it checks.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "art/adaptive.hpp"
#include "art/types.hpp"

namespace oracle {

// Direct triple sum with plain softmax, no max subtraction.
inline double entropy(const art::BeamLogits& logits) {
  double total = 0.0;
  for (int m = 0; m < logits.beam_count; ++m) {
    for (int l = 0; l < logits.length; ++l) {
      double norm = 0.0;
      for (int v = 0; v < logits.vocab_size; ++v) {
        norm += std::exp(logits.at(m, l, v));
      }
      for (int v = 0; v < logits.vocab_size; ++v) {
        const double p = std::exp(logits.at(m, l, v)) / norm;
        if (p > 0.0) total -= p * std::log(p);
      }
    }
  }
  return total / (static_cast<double>(logits.beam_count) * logits.length);
}

// Literal step-by-step simulation of the balanced round-robin: predicates
// sorted by descending frequency (ties by name), an index cycling one slot
// at a time, stopping when the budget or all availability is exhausted.
inline std::map<std::string, int> round_robin(
    const std::map<std::string, int>& availability, long long budget) {
  struct Entry {
    std::string predicate;
    int remaining;
    int granted = 0;
  };
  std::vector<Entry> entries;
  for (const auto& [predicate, count] : availability) {
    entries.push_back({predicate, count});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.remaining != b.remaining) return a.remaining > b.remaining;
    return a.predicate < b.predicate;
  });

  long long total_remaining = 0;
  for (const auto& e : entries) total_remaining += e.remaining;

  std::size_t i = 0;
  while (budget > 0 && total_remaining > 0 && !entries.empty()) {
    if (entries[i].remaining > 0) {
      ++entries[i].granted;
      --entries[i].remaining;
      --budget;
      --total_remaining;
    }
    i = (i + 1) % entries.size();
  }

  std::map<std::string, int> out;
  for (const auto& e : entries) out[e.predicate] = e.granted;
  return out;
}

struct NaiveSelection {
  std::set<std::string> ids;
  double final_z = 0.0;
};

// Literal re-execution of the adaptive selection loop for one predicate:
// per-pool mean/stddev computed once, thresholds recomputed at each z,
// candidate sets built by scanning, z lowered by z_step while the budget is
// unmet and further relaxation can still admit records, then the trim by
// criterion round-robin over informativeness-sorted lists.
inline NaiveSelection naive_select(const art::PredicatePools& pools,
                                   long long budget, double z_init,
                                   double z_step) {
  NaiveSelection result;
  result.final_z = z_init;
  if (budget <= 0) return result;

  const auto mean_of = [](const std::vector<double>& xs) {
    double s = 0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
  };
  const auto stddev_of = [&](const std::vector<double>& xs, double mu) {
    double s = 0;
    for (double x : xs) s += (x - mu) * (x - mu);
    return xs.empty() ? 0.0 : std::sqrt(s / static_cast<double>(xs.size()));
  };

  std::vector<double> tp_h, fn_h, fp_s;
  for (const auto& r : pools.tp) tp_h.push_back(r.entropy);
  for (const auto& r : pools.fn) fn_h.push_back(r.entropy);
  for (const auto& r : pools.fp) fp_s.push_back(*r.similarity);
  const double mu_tp = mean_of(tp_h), sigma_tp = stddev_of(tp_h, mu_tp);
  const double mu_fn = mean_of(fn_h), sigma_fn = stddev_of(fn_h, mu_fn);
  const double mu_fp = mean_of(fp_s), sigma_fp = stddev_of(fp_s, mu_fp);

  std::size_t reachable = 0;
  for (const auto& r : pools.tp) {
    if (sigma_tp > 0 || r.entropy > mu_tp) ++reachable;
  }
  for (const auto& r : pools.fn) {
    if (sigma_fn > 0 || r.entropy != mu_fn) ++reachable;
  }
  for (const auto& r : pools.fp) {
    if (sigma_fp > 0 || *r.similarity < mu_fp) ++reachable;
  }

  double z = z_init;
  std::vector<const art::PredictionRecord*> tp_high, fn_high, fn_low, fp_low;
  for (int step = 0;; ++step) {
    const double h_tp = mu_tp + z * sigma_tp;
    const double h_fn = mu_fn + z * sigma_fn;
    const double t_fn = mu_fn - z * sigma_fn;
    const double t_fp = mu_fp - z * sigma_fp;

    tp_high.clear();
    fn_high.clear();
    fn_low.clear();
    fp_low.clear();
    std::set<std::string> candidates;
    for (const auto& r : pools.tp) {
      if (r.entropy > h_tp) {
        tp_high.push_back(&r);
        candidates.insert(r.instance_id);
      }
    }
    for (const auto& r : pools.fn) {
      if (r.entropy > h_fn) {
        fn_high.push_back(&r);
        candidates.insert(r.instance_id);
      }
      if (r.entropy < t_fn) {
        fn_low.push_back(&r);
        candidates.insert(r.instance_id);
      }
    }
    for (const auto& r : pools.fp) {
      if (*r.similarity < t_fp) {
        fp_low.push_back(&r);
        candidates.insert(r.instance_id);
      }
    }

    if (candidates.size() >= static_cast<std::size_t>(budget) ||
        candidates.size() >= reachable || step >= 100000) {
      break;
    }
    z -= z_step;
  }
  result.final_z = z;

  const auto by_entropy_desc = [](const art::PredictionRecord* a,
                                  const art::PredictionRecord* b) {
    if (a->entropy != b->entropy) return a->entropy > b->entropy;
    return a->instance_id < b->instance_id;
  };
  const auto by_entropy_asc = [](const art::PredictionRecord* a,
                                 const art::PredictionRecord* b) {
    if (a->entropy != b->entropy) return a->entropy < b->entropy;
    return a->instance_id < b->instance_id;
  };
  const auto by_similarity_asc = [](const art::PredictionRecord* a,
                                    const art::PredictionRecord* b) {
    if (*a->similarity != *b->similarity) return *a->similarity < *b->similarity;
    return a->instance_id < b->instance_id;
  };
  std::sort(tp_high.begin(), tp_high.end(), by_entropy_desc);
  std::sort(fn_high.begin(), fn_high.end(), by_entropy_desc);
  std::sort(fn_low.begin(), fn_low.end(), by_entropy_asc);
  std::sort(fp_low.begin(), fp_low.end(), by_similarity_asc);

  const std::vector<std::vector<const art::PredictionRecord*>*> lists = {
      &tp_high, &fn_high, &fn_low, &fp_low};
  std::vector<std::size_t> cursor(4, 0);
  bool progressed = true;
  while (static_cast<long long>(result.ids.size()) < budget && progressed) {
    progressed = false;
    for (std::size_t c = 0; c < lists.size(); ++c) {
      if (static_cast<long long>(result.ids.size()) >= budget) break;
      auto& i = cursor[c];
      while (i < lists[c]->size() && result.ids.count((*lists[c])[i]->instance_id)) {
        ++i;
      }
      if (i == lists[c]->size()) continue;
      result.ids.insert((*lists[c])[i]->instance_id);
      ++i;
      progressed = true;
    }
  }
  return result;
}

}  // namespace oracle
