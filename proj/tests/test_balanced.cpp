#include <doctest.h>

#include <algorithm>

#include "art/balanced.hpp"
#include "art/dataset.hpp"
#include "art/rng.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace art;

TEST_CASE("round-robin allocation hand cases") {
  SUBCASE("uneven availability") {
    const auto a = allocate_round_robin({{"a", 5}, {"b", 2}, {"c", 1}}, 6);
    CHECK(a.per_predicate.at("a") == 3);
    CHECK(a.per_predicate.at("b") == 2);
    CHECK(a.per_predicate.at("c") == 1);
    CHECK(a.allocated() == 6);
  }
  SUBCASE("one full cycle") {
    const auto a = allocate_round_robin({{"a", 5}, {"b", 5}, {"c", 5}}, 3);
    for (const auto& [predicate, count] : a.per_predicate) CHECK(count == 1);
  }
  SUBCASE("zero budget") {
    const auto a = allocate_round_robin({{"a", 5}, {"b", 2}}, 0);
    CHECK(a.allocated() == 0);
  }
  SUBCASE("budget beyond availability allocates everything and stops") {
    const auto a = allocate_round_robin({{"a", 2}, {"b", 1}}, 50);
    CHECK(a.per_predicate.at("a") == 2);
    CHECK(a.per_predicate.at("b") == 1);
    CHECK(a.allocated() == 3);
  }
  CHECK_THROWS_AS(allocate_round_robin({{"a", 1}}, -1), std::invalid_argument);
  CHECK_THROWS_AS(allocate_round_robin({{"a", -2}}, 1), std::invalid_argument);
}

TEST_CASE("round-robin matches the literal simulation on random cases") {
  Rng rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    std::map<std::string, int> availability;
    const int n = 1 + static_cast<int>(rng.below(5));
    for (int p = 0; p < n; ++p) {
      availability["p" + std::to_string(p)] = static_cast<int>(rng.below(7));
    }
    const long long budget = static_cast<long long>(rng.below(31));
    CHECK(allocate_round_robin(availability, budget).per_predicate ==
          oracle::round_robin(availability, budget));
  }
}

TEST_CASE("fairness: non-exhausted predicates differ by at most one") {
  Rng rng(43);
  for (int trial = 0; trial < 1000; ++trial) {
    std::map<std::string, int> availability;
    const int n = 1 + static_cast<int>(rng.below(8));
    for (int p = 0; p < n; ++p) {
      availability["p" + std::to_string(p)] = static_cast<int>(rng.below(40));
    }
    const long long budget = static_cast<long long>(rng.below(200));
    const auto allocation = allocate_round_robin(availability, budget);

    int lo = INT32_MAX, hi = INT32_MIN;
    for (const auto& [predicate, granted] : allocation.per_predicate) {
      if (granted == availability.at(predicate)) continue;  // exhausted
      lo = std::min(lo, granted);
      hi = std::max(hi, granted);
    }
    if (lo <= hi) CHECK(hi - lo <= 1);
  }
}

namespace {

DatasetPartition small_partition() {
  std::vector<RelationTriplet> triplets;
  for (int i = 0; i < 10; ++i) {
    triplets.push_back(testutil::make_triplet("on" + std::to_string(i), "img", "a", "on", "b"));
  }
  for (int i = 0; i < 4; ++i) {
    triplets.push_back(testutil::make_triplet("has" + std::to_string(i), "img", "a", "has", "b"));
  }
  return make_partition(triplets, 17, 0.1);
}

}  // namespace

TEST_CASE("draw moves selected ids pool to train") {
  const auto partition = small_partition();

  SUBCASE("zero allocation is a no-op") {
    BudgetAllocation zeros;
    zeros.per_predicate = {{"on", 0}, {"has", 0}};
    const auto result = draw(partition, zeros, 5);
    CHECK(result.selected.empty());
    CHECK(result.partition.pool_ids == partition.pool_ids);
  }

  SUBCASE("full allocation empties the pool for those predicates") {
    BudgetAllocation all;
    all.per_predicate = partition.availability;
    all.total_budget = 99;
    const auto result = draw(partition, all, 5);
    CHECK(result.partition.pool_ids.empty());
    CHECK(result.partition.availability.empty());
    result.partition.check_invariants();
  }

  SUBCASE("fixed seed repeats the same ids; selection stays inside the pool") {
    BudgetAllocation four;
    four.per_predicate = {{"on", 4}};
    const auto a = draw(partition, four, 9);
    const auto b = draw(partition, four, 9);
    CHECK(a.selected == b.selected);
    CHECK(a.selected.size() == 4);
    for (const auto& id : a.selected) {
      CHECK(partition.pool_ids.count(id) == 1);
      CHECK(a.partition.train_ids.count(id) == 1);
      CHECK(a.partition.pool_ids.count(id) == 0);
    }
    const auto c = draw(partition, four, 10);
    CHECK(a.selected != c.selected);
  }

  SUBCASE("allocation above availability is rejected") {
    BudgetAllocation toomany;
    toomany.per_predicate = {{"has", 99}};
    CHECK_THROWS_AS(draw(partition, toomany, 1), std::invalid_argument);
  }
}
