#include "art/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "art/rng.hpp"

namespace art {

DatasetPartition make_partition(const std::vector<RelationTriplet>& triplets,
                                std::uint64_t seed, double val_fraction) {
  if (triplets.empty()) {
    throw std::invalid_argument("partition: no triplets");
  }
  if (!(val_fraction > 0.0) || !(val_fraction < 1.0)) {
    throw std::invalid_argument("partition: val_fraction must be in (0, 1)");
  }

  DatasetPartition partition;
  std::map<std::string, std::vector<std::string>> by_predicate;
  for (const auto& triplet : triplets) {
    if (partition.predicate_of.count(triplet.id)) {
      throw std::invalid_argument("partition: duplicate triplet id '" + triplet.id + "'");
    }
    partition.predicate_of.emplace(triplet.id, triplet.predicate);
    by_predicate[triplet.predicate].push_back(triplet.id);
  }

  const std::size_t n = triplets.size();
  // The epsilon guards against 0.2 * 20 style float dust below the integer.
  const auto quota = [val_fraction](std::size_t count) {
    return static_cast<std::size_t>(
        std::floor(static_cast<double>(count) * val_fraction + 1e-9));
  };
  const std::size_t val_target = quota(n);
  if (val_target >= n) {
    throw std::invalid_argument("partition: val_fraction leaves an empty pool");
  }

  std::size_t assigned = 0;
  for (auto& [predicate, ids] : by_predicate) {
    const std::size_t take = std::min(quota(ids.size()), ids.size());
    if (take == 0) continue;
    std::sort(ids.begin(), ids.end());
    Rng rng(derive_seed(seed, "partition/val/" + predicate));
    rng.shuffle(ids);
    for (std::size_t i = 0; i < take; ++i) {
      partition.val_ids.insert(ids[i]);
    }
    assigned += take;
  }

  if (assigned < val_target) {
    std::vector<std::string> remaining;
    remaining.reserve(n - assigned);
    for (const auto& [id, predicate] : partition.predicate_of) {
      if (!partition.val_ids.count(id)) remaining.push_back(id);
    }
    Rng rng(derive_seed(seed, "partition/val/remainder"));
    rng.shuffle(remaining);
    for (std::size_t i = 0; i < val_target - assigned; ++i) {
      partition.val_ids.insert(remaining[i]);
    }
  }

  for (const auto& [id, predicate] : partition.predicate_of) {
    if (!partition.val_ids.count(id)) partition.pool_ids.insert(id);
  }
  partition.refresh_availability();
  partition.check_invariants();
  return partition;
}

}  // namespace art
