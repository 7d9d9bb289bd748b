#include "art/balanced.hpp"

#include <algorithm>
#include <stdexcept>

#include "art/rng.hpp"

namespace art {

BudgetAllocation allocate_round_robin(
    const std::map<std::string, int>& availability, long long budget) {
  if (budget < 0) {
    throw std::invalid_argument("round robin: negative budget");
  }

  struct Slot {
    std::string predicate;
    int remaining;
  };
  std::vector<Slot> slots;
  slots.reserve(availability.size());
  for (const auto& [predicate, count] : availability) {
    if (count < 0) {
      throw std::invalid_argument("round robin: negative availability for '" +
                                  predicate + "'");
    }
    slots.push_back({predicate, count});
  }
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
    if (a.remaining != b.remaining) return a.remaining > b.remaining;
    return a.predicate < b.predicate;
  });

  BudgetAllocation allocation;
  allocation.total_budget = budget;
  for (const auto& slot : slots) allocation.per_predicate[slot.predicate] = 0;

  long long left = budget;
  bool any_granted = true;
  while (left > 0 && any_granted) {
    any_granted = false;
    for (auto& slot : slots) {
      if (left == 0) break;
      if (slot.remaining == 0) continue;
      ++allocation.per_predicate[slot.predicate];
      --slot.remaining;
      --left;
      any_granted = true;
    }
  }
  return allocation;
}

DrawResult draw(const DatasetPartition& partition,
                const BudgetAllocation& allocation, std::uint64_t seed) {
  std::map<std::string, std::vector<std::string>> pool_by_predicate;
  for (const auto& id : partition.pool_ids) {
    pool_by_predicate[partition.predicate_of.at(id)].push_back(id);
  }

  DrawResult result;
  result.partition = partition;
  for (const auto& [predicate, requested] : allocation.per_predicate) {
    if (requested == 0) continue;
    auto it = pool_by_predicate.find(predicate);
    const int available = it == pool_by_predicate.end()
                              ? 0
                              : static_cast<int>(it->second.size());
    if (requested > available) {
      throw std::invalid_argument("draw: allocation " + std::to_string(requested) +
                                  " exceeds availability " + std::to_string(available) +
                                  " for '" + predicate + "'");
    }
    auto& ids = it->second;  // sorted: pool_ids is an ordered set
    Rng rng(derive_seed(seed, "balanced/" + predicate));
    rng.shuffle(ids);
    for (int i = 0; i < requested; ++i) {
      result.selected.push_back(ids[i]);
    }
  }
  std::sort(result.selected.begin(), result.selected.end());
  result.partition.move_to_train(result.selected);
  return result;
}

}  // namespace art
