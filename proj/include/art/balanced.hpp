#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "art/types.hpp"

namespace art {

struct BudgetAllocation {
  std::map<std::string, int> per_predicate;
  long long total_budget = 0;

  long long allocated() const {
    long long sum = 0;
    for (const auto& [predicate, count] : per_predicate) sum += count;
    return sum;
  }
};

// Visits predicates cyclically in descending-availability order (ties by
// name), granting one slot per visit while availability remains. A budget
// larger than the total availability is left partly unspent.
BudgetAllocation allocate_round_robin(
    const std::map<std::string, int>& availability, long long budget);

struct DrawResult {
  std::vector<std::string> selected;  // sorted
  DatasetPartition partition;
};

// Uniform seeded draw without replacement of allocation.per_predicate[p]
// pool instances per predicate; selected ids move pool -> train.
DrawResult draw(const DatasetPartition& partition,
                const BudgetAllocation& allocation, std::uint64_t seed);

}  // namespace art
