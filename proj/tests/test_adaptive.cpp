#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "art/adaptive.hpp"
#include "art/dataset.hpp"
#include "art/instruction.hpp"
#include "art/io.hpp"
#include "art/scoring.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace art;
using testutil::make_record;
using testutil::make_triplet;

namespace {

std::map<std::string, InstructionInstance> fixture_instances(
    std::vector<RelationTriplet>& triplets_out) {
  const auto vocab = testutil::fixture_vocab();
  triplets_out = {
      make_triplet("t1", "i1", "girl", "has", "hair"),
      make_triplet("t2", "i1", "bag", "on", "table"),
      make_triplet("t3", "i2", "man", "watching", "tv"),
  };
  GenerationConfig cfg;
  cfg.seed = 4;
  return index_instances(
      generate(triplets_out, vocab, CounterNegativeMap::defaults(), cfg));
}

PredictionRecord raw_record(const std::string& id, const std::string& text,
                            bool negative, double entropy_value) {
  PredictionRecord r;
  r.instance_id = id;
  r.predicted_text = text;
  r.is_negative_prediction = negative;
  r.entropy = entropy_value;
  r.confidence = -entropy_value;
  return r;
}

}  // namespace

TEST_CASE("outcome classification") {
  std::vector<RelationTriplet> triplets;
  const auto instances = fixture_instances(triplets);
  const auto provider = builtin_provider(2048, 3);

  SUBCASE("exact positive match is a TP without stored similarity") {
    const auto pools = classify_outcomes(
        {raw_record("t1", "Yes, girl has hair.", false, 0.4)}, instances, *provider);
    REQUIRE(pools.count("has") == 1);
    REQUIRE(pools.at("has").tp.size() == 1);
    CHECK(pools.at("has").tp[0].outcome == Outcome::tp);
    CHECK(!pools.at("has").tp[0].similarity.has_value());
  }

  SUBCASE("negative response on an annotated relation is an FN") {
    const auto pools = classify_outcomes(
        {raw_record("t1",
                    "No, there is no prominent spatial relation between girl and hair.",
                    true, 0.4)},
        instances, *provider);
    REQUIRE(pools.at("has").fn.size() == 1);
    CHECK(!pools.at("has").fn[0].similarity.has_value());
  }

  SUBCASE("mismatched predicate is an FP with provider similarity") {
    const auto pools = classify_outcomes(
        {raw_record("t2", "Yes, bag under table.", false, 0.2)}, instances, *provider);
    REQUIRE(pools.at("on").fp.size() == 1);
    const auto& fp = pools.at("on").fp[0];
    REQUIRE(fp.similarity.has_value());
    CHECK(*fp.similarity ==
          doctest::Approx(similarity("bag under table", "bag on table", *provider)));
  }

  SUBCASE("precomputed similarity is kept") {
    auto record = raw_record("t2", "Yes, bag under table.", false, 0.2);
    record.similarity = 0.42;
    const auto pools = classify_outcomes({record}, instances, *provider);
    CHECK(*pools.at("on").fp[0].similarity == 0.42);
  }

  SUBCASE("unknown instance id is rejected by name") {
    CHECK_THROWS_WITH_AS(
        classify_outcomes({raw_record("ghost", "Yes, a on b.", false, 0.1)},
                          instances, *provider),
        doctest::Contains("ghost"), std::invalid_argument);
  }

  SUBCASE("nonconforming positive text is an FP against the full phrase") {
    const auto pools = classify_outcomes(
        {raw_record("t3", "the tv is being watched", false, 0.9)}, instances,
        *provider);
    REQUIRE(pools.at("watching").fp.size() == 1);
    CHECK(pools.at("watching").fp[0].similarity.has_value());
  }
}

TEST_CASE("recall-weighted budget allocation") {
  SUBCASE("higher weight for lower recall") {
    const auto a = allocate_budget({{"a", 1.0}, {"b", 0.5}, {"c", 0.0}},
                                   {{"a", 100}, {"b", 100}, {"c", 100}}, 9);
    CHECK(a.per_predicate.at("a") == 0);
    CHECK(a.per_predicate.at("b") == 3);
    CHECK(a.per_predicate.at("c") == 6);
  }

  SUBCASE("equal recalls split uniformly up to the remainder rule") {
    const auto a = allocate_budget({{"a", 0.4}, {"b", 0.4}, {"c", 0.4}, {"d", 0.4}},
                                   {{"a", 50}, {"b", 50}, {"c", 50}, {"d", 50}}, 10);
    long long total = 0;
    for (const auto& [predicate, count] : a.per_predicate) {
      CHECK(count >= 2);
      CHECK(count <= 3);
      total += count;
    }
    CHECK(total == 10);
  }

  SUBCASE("all recalls at one fall back to uniform") {
    const auto a = allocate_budget({{"a", 1.0}, {"b", 1.0}},
                                   {{"a", 50}, {"b", 50}}, 8);
    CHECK(a.per_predicate.at("a") == 4);
    CHECK(a.per_predicate.at("b") == 4);
  }

  SUBCASE("availability caps the share and the excess stays unspent") {
    const auto a = allocate_budget({{"a", 0.0}, {"b", 1.0}}, {{"a", 3}, {"b", 100}}, 10);
    CHECK(a.per_predicate.at("a") == 3);  // wanted all 10, capped at N_p
    CHECK(a.per_predicate.at("b") == 0);
    CHECK(a.allocated() == 3);
  }

  SUBCASE("missing or out-of-range recalls are rejected") {
    CHECK_THROWS_WITH_AS(allocate_budget({{"a", 0.5}}, {{"a", 5}, {"b", 5}}, 4),
                         doctest::Contains("b"), std::invalid_argument);
    CHECK_THROWS_AS(allocate_budget({{"a", 1.5}}, {{"a", 5}}, 4),
                    std::invalid_argument);
  }

  SUBCASE("zero-availability predicates are excluded") {
    const auto a = allocate_budget({{"a", 0.0}}, {{"a", 4}, {"b", 0}}, 4);
    CHECK(a.per_predicate.count("b") == 0);
    CHECK(a.per_predicate.at("a") == 4);
  }
}

TEST_CASE("threshold computation uses population statistics") {
  SUBCASE("two-point pools by hand") {
    PredicatePools pools;
    pools.tp = {make_record("a", 0.2, Outcome::tp), make_record("b", 0.4, Outcome::tp)};
    const auto t = compute_thresholds(pools, 1.0);
    CHECK(t.mu_tp == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(t.sigma_tp == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(t.h_tp == doctest::Approx(0.4).epsilon(1e-12));
  }

  SUBCASE("z of zero collapses the band to the mean") {
    PredicatePools pools;
    pools.fn = {make_record("a", 0.1, Outcome::fn), make_record("b", 0.5, Outcome::fn)};
    pools.fp = {make_record("c", 0.0, Outcome::fp, 0.8)};
    const auto t = compute_thresholds(pools, 0.0);
    CHECK(t.h_fn == t.mu_fn);
    CHECK(t.t_fn == t.mu_fn);
    CHECK(t.t_fp == t.mu_fp);
  }

  SUBCASE("empty pools produce all-zero thresholds") {
    const auto t = compute_thresholds({}, 1.96);
    CHECK(t.mu_tp == 0.0);
    CHECK(t.sigma_fp == 0.0);
    CHECK(t.h_tp == 0.0);
    CHECK(t.t_fp == 0.0);
  }
}

TEST_CASE("per-predicate selection") {
  AdaptiveConfig cfg;

  SUBCASE("zero budget selects nothing") {
    const auto detail = select_for_predicate(testutil::random_pools(5, 10), 0, cfg);
    CHECK(detail.ids.empty());
    CHECK(detail.final_z == cfg.z_init);
  }

  SUBCASE("an extreme low-similarity FP is caught at the initial z") {
    PredicatePools pools;
    for (int i = 0; i < 9; ++i) {
      pools.fp.push_back(make_record("fp" + std::to_string(i), 0.5, Outcome::fp,
                                     0.90 + 0.01 * i));
    }
    pools.fp.push_back(make_record("outlier", 0.5, Outcome::fp, -0.9));
    const auto detail = select_for_predicate(pools, 1, cfg);
    REQUIRE(detail.ids.size() == 1);
    CHECK(detail.ids[0] == "outlier");
    CHECK(detail.final_z == cfg.z_init);  // no refinement needed
    CHECK(detail.from_fp_low == 1);
  }

  SUBCASE("budget above available records is rejected") {
    CHECK_THROWS_AS(select_for_predicate({}, 1, cfg), std::invalid_argument);
  }

  SUBCASE("matches the naive reference on random pools") {
    Rng rng(2025);
    for (int trial = 0; trial < 30; ++trial) {
      const auto pools = testutil::random_pools(rng.next(), 14);
      const long long budget =
          static_cast<long long>(rng.below(pools.total() + 1));
      const auto detail = select_for_predicate(pools, budget, cfg);
      const auto reference =
          oracle::naive_select(pools, budget, cfg.z_init, cfg.z_step);
      const std::set<std::string> got(detail.ids.begin(), detail.ids.end());
      CHECK(got == reference.ids);
      CHECK(detail.final_z == doctest::Approx(reference.final_z));
    }
  }

  SUBCASE("selected TP prefix beats every trimmed TP candidate") {
    PredicatePools pools;
    Rng rng(9);
    for (int i = 0; i < 30; ++i) {
      pools.tp.push_back(
          make_record("tp" + std::to_string(i), rng.unit(), Outcome::tp));
    }
    const auto detail = select_for_predicate(pools, 5, cfg);
    const std::set<std::string> selected(detail.ids.begin(), detail.ids.end());
    double min_selected = 1e9, max_unselected = -1e9;
    const auto thresholds = compute_thresholds(pools, detail.final_z);
    for (const auto& r : pools.tp) {
      if (selected.count(r.instance_id)) {
        min_selected = std::min(min_selected, r.entropy);
      } else if (r.entropy > thresholds.h_tp) {
        max_unselected = std::max(max_unselected, r.entropy);
      }
    }
    if (max_unselected > -1e9) CHECK(min_selected > max_unselected);
  }
}

TEST_CASE("candidate sets grow monotonically as z falls") {
  Rng rng(77);
  int evaluated = 0;
  while (evaluated < 200) {
    const auto pools = testutil::random_pools(rng.next(), 12);
    if (pools.total() == 0) continue;
    const double z = rng.unit() * 2.5 - 0.25;
    const auto collect = [&pools](double zz) {
      const auto t = compute_thresholds(pools, zz);
      std::set<std::string> ids;
      for (const auto& r : pools.tp) {
        if (r.entropy > t.h_tp) ids.insert(r.instance_id);
      }
      for (const auto& r : pools.fn) {
        if (r.entropy > t.h_fn || r.entropy < t.t_fn) ids.insert(r.instance_id);
      }
      for (const auto& r : pools.fp) {
        if (*r.similarity < t.t_fp) ids.insert(r.instance_id);
      }
      return ids;
    };
    const auto at_z = collect(z);
    const auto relaxed = collect(z - 0.1);
    for (const auto& id : at_z) CHECK(relaxed.count(id) == 1);
    ++evaluated;
  }
}

TEST_CASE("fixed-mode thresholds with deterministic top-up") {
  AdaptiveConfig cfg;
  cfg.mode = ThresholdMode::fixed;
  cfg.fixed = {0.95, 0.5, 0.5, 0.5};

  PredicatePools pools;
  pools.tp = {make_record("tp-low", 0.1, Outcome::tp),
              make_record("tp-high", 0.9, Outcome::tp)};
  pools.fp = {make_record("fp-close", 0.3, Outcome::fp, 0.99),
              make_record("fp-far", 0.3, Outcome::fp, 0.2)};

  SUBCASE("only threshold-qualified records are taken when they cover the budget") {
    const auto detail = select_for_predicate(pools, 2, cfg);
    const std::set<std::string> ids(detail.ids.begin(), detail.ids.end());
    CHECK(ids == std::set<std::string>{"tp-high", "fp-far"});
  }

  SUBCASE("a shortfall tops up in informativeness order") {
    const auto detail = select_for_predicate(pools, 4, cfg);
    CHECK(detail.ids.size() == 4);
    CHECK(detail.budget_met);
  }
}

TEST_CASE("iteration wiring") {
  const auto vocab = testutil::fixture_vocab();
  std::vector<RelationTriplet> triplets;
  for (int i = 0; i < 40; ++i) {
    const std::string predicate = i % 2 ? "on" : "has";
    triplets.push_back(make_triplet("t" + std::to_string(100 + i), "img",
                                    "a", predicate, "b"));
  }
  auto partition = make_partition(triplets, 5, 0.1);

  const auto provider = builtin_provider(512, 8);
  GenerationConfig gen_cfg;
  const auto instances =
      index_instances(generate(triplets, vocab, CounterNegativeMap::defaults(), gen_cfg));

  Rng rng(31);
  std::vector<PredictionRecord> raw;
  for (const auto& id : partition.pool_ids) {
    const auto& inst = instances.at(id);
    const double h = rng.unit() * 2.0;
    const int mode = static_cast<int>(rng.below(3));
    if (mode == 0) {
      raw.push_back(raw_record(id, inst.positive_response, false, h));
    } else if (mode == 1) {
      raw.push_back(raw_record(id, "No, there is no prominent x.", true, h));
    } else {
      raw.push_back(raw_record(id, "Yes, " + inst.subject + " floating on " +
                                       inst.object + ".", false, h));
    }
  }

  const auto pools = classify_outcomes(raw, instances, *provider);
  std::vector<PredictionRecord> classified;
  for (const auto& [predicate, pool] : pools) {
    classified.insert(classified.end(), pool.tp.begin(), pool.tp.end());
    classified.insert(classified.end(), pool.fn.begin(), pool.fn.end());
    classified.insert(classified.end(), pool.fp.begin(), pool.fp.end());
  }

  AdaptiveConfig cfg;
  cfg.budget = 6;
  const std::map<std::string, double> recalls = {{"on", 0.2}, {"has", 0.8}};

  SUBCASE("two consecutive iterations select disjoint ids") {
    const auto first = run_iteration(partition, classified, recalls, cfg, 1);
    CHECK(first.partition.train_ids.size() == 6);
    std::vector<PredictionRecord> remaining;
    for (const auto& r : classified) {
      if (first.partition.pool_ids.count(r.instance_id)) remaining.push_back(r);
    }
    const auto second = run_iteration(first.partition, remaining, recalls, cfg, 2);
    for (const auto& [predicate, ids] : second.selections) {
      for (const auto& id : ids) {
        CHECK(first.partition.train_ids.count(id) == 0);
        CHECK(partition.pool_ids.count(id) == 1);
      }
    }
    for (const auto& report : second.report) {
      CHECK(report.final_z <= cfg.z_init);
    }
  }

  SUBCASE("equal recalls trigger the uniform fallback") {
    const auto result = run_iteration(partition, classified,
                                      {{"on", 1.0}, {"has", 1.0}}, cfg, 1);
    long long total = 0;
    for (const auto& report : result.report) {
      CHECK(report.probability == doctest::Approx(0.5));
      total += report.selected_total;
    }
    CHECK(total == 6);
  }

  SUBCASE("a pool id without a record is rejected by name") {
    auto incomplete = classified;
    const std::string victim = incomplete.back().instance_id;
    incomplete.pop_back();
    CHECK_THROWS_WITH_AS(run_iteration(partition, incomplete, recalls, cfg, 1),
                         doctest::Contains(victim.c_str()), std::invalid_argument);
  }

  SUBCASE("duplicate and unknown records are rejected") {
    auto doubled = classified;
    doubled.push_back(doubled.front());
    CHECK_THROWS_AS(run_iteration(partition, doubled, recalls, cfg, 1),
                    std::invalid_argument);

    auto alien = classified;
    auto ghost = alien.front();
    ghost.instance_id = "ghost";
    alien.push_back(ghost);
    CHECK_THROWS_WITH_AS(run_iteration(partition, alien, recalls, cfg, 1),
                         doctest::Contains("ghost"), std::invalid_argument);
  }
}
