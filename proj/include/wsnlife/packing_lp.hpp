#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wsn {

// Column of a 0/1 packing matrix: bit i set means row i participates.
using RowMask = std::uint64_t;

struct PackingLpResult {
  double value = 0.0;         // primal objective at the final basis
  double dual_bound = 0.0;    // rigorous upper bound from a scaled dual
  std::vector<double> z;      // one entry per column passed in
};

// max sum(z) s.t. sum_l z_l * column_l <= capacity, z >= 0.
//
// Revised simplex with an explicit basis inverse (at most 64 rows), Dantzig
// pricing, and Bland's rule once a run of degenerate pivots shows up.
// `dual_bound` rescales the final duals until every column is covered, so it
// is a valid bound even if the last pivots carry rounding error.
// Throws Error{timeout} past the deadline, Error{numerical_failure} if the
// iteration cap is hit.
PackingLpResult solve_packing_lp(
    std::span<const RowMask> columns, std::span<const double> capacity,
    std::optional<std::chrono::steady_clock::time_point> deadline = {});

}  // namespace wsn
