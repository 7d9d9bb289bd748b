#pragma once

#include <cstdint>
#include <vector>

#include "art/types.hpp"

namespace art {

// Splits triplets into an empty train set, a validation set and the pool.
// Validation is stratified per predicate with floor rounding; the remainder
// up to floor(n * val_fraction) is assigned by a global seeded draw.
// Deterministic for a fixed seed. Throws on empty input or when the split
// would leave the pool empty.
DatasetPartition make_partition(const std::vector<RelationTriplet>& triplets,
                                std::uint64_t seed, double val_fraction);

}  // namespace art
