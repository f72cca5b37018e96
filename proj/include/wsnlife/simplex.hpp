#pragma once

#include <utility>
#include <vector>

namespace wsn {

enum class RowSense { le, ge, eq };

struct LinearRow {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

// Feasibility system  A x (sense) b,  x >= 0.
struct LinearSystem {
  int n_vars = 0;
  std::vector<LinearRow> rows;

  int add_row(std::vector<std::pair<int, double>> terms, RowSense sense, double rhs) {
    rows.push_back({std::move(terms), sense, rhs});
    return static_cast<int>(rows.size()) - 1;
  }
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> x;  // a feasible point when feasible
  // When infeasible: y with y <= 0 on le rows, y >= 0 on ge rows, y^T A <= 0
  // on every variable and y^T b > 0. Any x >= 0 satisfying the rows would give
  // y^T A x >= y^T b, so no such x exists.
  std::vector<double> farkas;
  double phase1_value = 0.0;
};

// Phase-1 dense tableau simplex. Dantzig pricing until a run of degenerate
// pivots, then Bland's rule. The system counts as feasible when the total
// artificial infeasibility drops to tol or below.
// Throws Error{numerical_failure} past the iteration cap,
// Error{invalid_argument} for out-of-range variable indices.
FeasibilityResult check_feasibility(const LinearSystem& sys, double tol = 1e-7);

}  // namespace wsn
