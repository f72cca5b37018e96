#include "wsnlife/simplex.hpp"

#include <cmath>
#include <limits>

#include "wsnlife/errors.hpp"

namespace wsn {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kPriceTol = 1e-10;
constexpr int kDegenerateRunBeforeBland = 50;

}  // namespace

FeasibilityResult check_feasibility(const LinearSystem& sys, double tol) {
  const int m = static_cast<int>(sys.rows.size());
  const int n = sys.n_vars;
  if (n < 0) throw Error(ErrorCode::invalid_argument, "negative variable count");

  // Rows are flipped so every rhs is non-negative; sign[i] remembers it.
  std::vector<int> sign(m, 1);
  std::vector<RowSense> sense(m);
  int extra = 0;
  for (int i = 0; i < m; ++i) {
    const auto& r = sys.rows[i];
    for (const auto& [v, c] : r.terms) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::invalid_argument, "variable index out of range");
      }
      if (!std::isfinite(c)) {
        throw Error(ErrorCode::invalid_argument, "non-finite coefficient");
      }
    }
    if (!std::isfinite(r.rhs)) {
      throw Error(ErrorCode::invalid_argument, "non-finite rhs");
    }
    sense[i] = r.sense;
    if (r.rhs < 0) {
      sign[i] = -1;
      if (r.sense == RowSense::le) sense[i] = RowSense::ge;
      else if (r.sense == RowSense::ge) sense[i] = RowSense::le;
    }
    extra += sense[i] == RowSense::ge ? 2 : 1;
  }

  // Column layout: structural, then per row its slack/surplus and/or
  // artificial. identity[i] is the column that starts basic in row i.
  const int cols = n + extra;
  std::vector<double> a(static_cast<std::size_t>(m) * cols, 0.0);
  auto at = [&](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * cols + j];
  };
  std::vector<double> b(m), cost(cols, 0.0);
  std::vector<int> identity(m), basis(m);
  int next = n;
  for (int i = 0; i < m; ++i) {
    for (const auto& [v, c] : sys.rows[i].terms) at(i, v) += sign[i] * c;
    b[i] = sign[i] * sys.rows[i].rhs;
    if (sense[i] == RowSense::le) {
      at(i, next) = 1.0;
      identity[i] = next++;
    } else {
      if (sense[i] == RowSense::ge) at(i, next++) = -1.0;
      at(i, next) = 1.0;
      cost[next] = 1.0;
      identity[i] = next++;
    }
    basis[i] = identity[i];
  }

  // Reduced costs d_j = c_j - c_B^T B^-1 A_j.
  std::vector<double> d(cost);
  for (int i = 0; i < m; ++i) {
    if (cost[basis[i]] == 0.0) continue;
    for (int j = 0; j < cols; ++j) d[j] -= at(i, j);
  }

  const long long cap = 50LL * (m + cols) + 1000;
  bool bland = false;
  int degenerate_run = 0;
  auto infeasibility = [&] {
    double v = 0.0;
    for (int i = 0; i < m; ++i) {
      if (cost[basis[i]] != 0.0) v += std::max(b[i], 0.0);
    }
    return v;
  };
  for (long long iter = 0; infeasibility() > tol; ++iter) {
    if (iter > cap) {
      throw Error(ErrorCode::numerical_failure, "simplex iteration cap reached");
    }
    int enter = -1;
    double best = -kPriceTol;
    for (int j = 0; j < cols; ++j) {
      if (d[j] < best) {
        enter = j;
        best = d[j];
        if (bland) break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double aij = at(i, enter);
      if (aij <= kPivotTol) continue;
      const double r = std::max(b[i], 0.0) / aij;
      if (r < ratio - 1e-12 || (r <= ratio + 1e-12 && leave >= 0 && basis[i] < basis[leave])) {
        ratio = r;
        leave = i;
      }
    }
    if (leave < 0) {
      throw Error(ErrorCode::numerical_failure, "phase-1 objective unbounded");
    }

    const double piv = at(leave, enter);
    for (int j = 0; j < cols; ++j) at(leave, j) /= piv;
    b[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) at(i, j) -= f * at(leave, j);
      b[i] -= f * b[leave];
      if (std::abs(b[i]) < 1e-13) b[i] = 0.0;
    }
    const double fd = d[enter];
    for (int j = 0; j < cols; ++j) d[j] -= fd * at(leave, j);
    basis[leave] = enter;

    degenerate_run = ratio < 1e-12 ? degenerate_run + 1 : 0;
    if (degenerate_run > kDegenerateRunBeforeBland) bland = true;
  }

  const double infeas = infeasibility();

  FeasibilityResult out;
  out.phase1_value = infeas;
  out.feasible = infeas <= tol;
  if (out.feasible) {
    out.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i) {
      if (basis[i] < n) out.x[basis[i]] = std::max(b[i], 0.0);
    }
  } else {
    out.farkas.resize(m);
    for (int i = 0; i < m; ++i) {
      out.farkas[i] = sign[i] * (cost[identity[i]] - d[identity[i]]);
    }
  }
  return out;
}

}  // namespace wsn
