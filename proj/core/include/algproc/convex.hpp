#pragma once

#include <vector>

#include "algproc/rational.hpp"

namespace algproc {

using RationalVector = std::vector<Rational>;

/// Decides whether `target` lies in the downward closure of the convex hull of
/// `others` together with the origin, i.e. whether there are weights
/// λ_j ≥ 0 with Σ λ_j ≤ 1 and Σ λ_j · others[j] ≥ target coordinatewise.
/// All vectors are nonnegative and share one dimension.
///
/// Solved exactly through the dual linear program
///   maximise target·y  subject to  others[j]·y ≤ 1, y ≥ 0
/// with a rational simplex under Bland's rule: the target is dominated iff the
/// dual optimum is bounded and at most 1.
[[nodiscard]] bool dominated_by_hull(const RationalVector& target,
                                     const std::vector<RationalVector>& others);

}  // namespace algproc
