#pragma once

#include <cstddef>
#include <vector>

#include "instrumental/rational.hpp"

namespace instrumental {

using IntegerVector = std::vector<Integer>;

struct DoubleDescriptionOptions {
  std::size_t max_rays = 1'000'000;
};

struct DoubleDescriptionStats {
  std::size_t max_intermediate_rays = 0;
  std::size_t candidate_pairs = 0;
};

/// Extreme rays of the pointed cone { z : row · z >= 0 for every row }.
/// The rows must have full column rank. Constraints are inserted in the given
/// order after an initial basis made of the first independent rows. Each ray is
/// returned as a primitive integer vector. Throws CapacityError when the
/// intermediate ray count exceeds `max_rays`.
std::vector<IntegerVector> cone_extreme_rays(const std::vector<IntegerVector>& rows,
                                             const DoubleDescriptionOptions& options = {},
                                             DoubleDescriptionStats* stats = nullptr);

/// Scales each rational row by a positive factor to a primitive integer row.
std::vector<IntegerVector> to_integer_rows(const std::vector<RationalVector>& rows);

}  // namespace instrumental
