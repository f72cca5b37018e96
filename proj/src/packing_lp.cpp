#include "wsnlife/packing_lp.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "wsnlife/errors.hpp"

namespace wsn {
namespace {

constexpr double kPriceTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr int kDegenerateRunBeforeBland = 50;
constexpr int kRefactorEvery = 100;

class PackingSimplex {
 public:
  PackingSimplex(std::span<const RowMask> columns,
                 std::span<const double> capacity)
      : cols_(columns), b_(capacity.begin(), capacity.end()),
        rows_(static_cast<int>(capacity.size())),
        n_cols_(static_cast<int>(columns.size())) {
    if (rows_ > 64) {
      throw Error(ErrorCode::too_large, "packing LP supports at most 64 rows");
    }
    for (double c : b_) {
      if (!(c >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "negative packing capacity");
      }
    }
    for (RowMask m : cols_) {
      if (m == 0 || (rows_ < 64 && (m >> rows_) != 0)) {
        throw Error(ErrorCode::invalid_argument, "column outside row range");
      }
    }
    basic_.resize(rows_);
    for (int i = 0; i < rows_; ++i) basic_[i] = n_cols_ + i;
    binv_.assign(static_cast<std::size_t>(rows_) * rows_, 0.0);
    for (int i = 0; i < rows_; ++i) inv(i, i) = 1.0;
    xb_ = b_;
    y_.assign(rows_, 0.0);
    alpha_.assign(rows_, 0.0);
  }

  PackingLpResult run(std::optional<std::chrono::steady_clock::time_point> deadline) {
    const long long cap = 50LL * (n_cols_ + rows_) + 1000;
    bool bland = false;
    int degenerate_run = 0;
    int since_refactor = 0;
    for (long long iter = 0;; ++iter) {
      if (iter > cap) {
        throw Error(ErrorCode::numerical_failure, "packing LP iteration cap");
      }
      if (deadline && (iter & 15) == 0 &&
          std::chrono::steady_clock::now() > *deadline) {
        throw Error(ErrorCode::timeout, "packing LP");
      }
      compute_duals();
      const int entering = price(bland);
      if (entering < 0) break;

      load_column(entering);
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        if (alpha_[i] <= kPivotTol) continue;
        const double ratio = std::max(xb_[i], 0.0) / alpha_[i];
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && leave >= 0 && basic_[i] < basic_[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) {
        throw Error(ErrorCode::numerical_failure, "packing LP looks unbounded");
      }
      pivot(leave, entering, best_ratio);

      degenerate_run = best_ratio < 1e-12 ? degenerate_run + 1 : 0;
      if (degenerate_run > kDegenerateRunBeforeBland) bland = true;
      if (++since_refactor >= kRefactorEvery) {
        refactor();
        since_refactor = 0;
      }
    }

    PackingLpResult out;
    out.z.assign(n_cols_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      if (basic_[i] < n_cols_) {
        out.z[basic_[i]] = std::max(xb_[i], 0.0);
        out.value += out.z[basic_[i]];
      }
    }
    out.dual_bound = dual_bound();
    return out;
  }

 private:
  double& inv(int r, int c) { return binv_[static_cast<std::size_t>(r) * rows_ + c]; }

  void compute_duals() {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (int i = 0; i < rows_; ++i) {
      if (basic_[i] >= n_cols_) continue;  // slack cost is zero
      for (int j = 0; j < rows_; ++j) y_[j] += inv(i, j);
    }
  }

  double column_dual_sum(RowMask m) const {
    double s = 0.0;
    while (m) {
      s += y_[std::countr_zero(m)];
      m &= m - 1;
    }
    return s;
  }

  int price(bool bland) const {
    int best = -1;
    double best_d = kPriceTol;
    for (int l = 0; l < n_cols_; ++l) {
      const double d = 1.0 - column_dual_sum(cols_[l]);
      if (d > best_d) {
        best = l;
        best_d = d;
        if (bland) return best;
      }
    }
    for (int i = 0; i < rows_; ++i) {
      const double d = -y_[i];
      if (d > best_d) {
        best = n_cols_ + i;
        best_d = d;
        if (bland) return best;
      }
    }
    return best;
  }

  void load_column(int var) {
    std::fill(alpha_.begin(), alpha_.end(), 0.0);
    if (var >= n_cols_) {
      const int row = var - n_cols_;
      for (int i = 0; i < rows_; ++i) alpha_[i] = inv(i, row);
      return;
    }
    RowMask m = cols_[var];
    while (m) {
      const int row = std::countr_zero(m);
      for (int i = 0; i < rows_; ++i) alpha_[i] += inv(i, row);
      m &= m - 1;
    }
  }

  void pivot(int r, int entering, double theta) {
    for (int i = 0; i < rows_; ++i) {
      if (i != r) xb_[i] -= theta * alpha_[i];
    }
    xb_[r] = theta;
    const double piv = alpha_[r];
    for (int c = 0; c < rows_; ++c) inv(r, c) /= piv;
    for (int i = 0; i < rows_; ++i) {
      if (i == r || alpha_[i] == 0.0) continue;
      const double f = alpha_[i];
      for (int c = 0; c < rows_; ++c) inv(i, c) -= f * inv(r, c);
    }
    basic_[r] = entering;
  }

  // Rebuilds B^-1 and x_B from the basis columns by Gauss-Jordan elimination.
  void refactor() {
    const int n = rows_;
    std::vector<double> a(static_cast<std::size_t>(n) * 2 * n, 0.0);
    auto el = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * 2 * n + c]; };
    for (int k = 0; k < n; ++k) {
      const int var = basic_[k];
      if (var >= n_cols_) {
        el(var - n_cols_, k) = 1.0;
      } else {
        RowMask m = cols_[var];
        while (m) {
          el(std::countr_zero(m), k) = 1.0;
          m &= m - 1;
        }
      }
      el(k, n + k) = 1.0;
    }
    for (int c = 0; c < n; ++c) {
      int p = c;
      for (int r = c + 1; r < n; ++r) {
        if (std::abs(el(r, c)) > std::abs(el(p, c))) p = r;
      }
      if (std::abs(el(p, c)) < 1e-12) {
        throw Error(ErrorCode::numerical_failure, "singular packing basis");
      }
      if (p != c) {
        for (int k = 0; k < 2 * n; ++k) std::swap(el(p, k), el(c, k));
      }
      const double d = el(c, c);
      for (int k = 0; k < 2 * n; ++k) el(c, k) /= d;
      for (int r = 0; r < n; ++r) {
        if (r == c || el(r, c) == 0.0) continue;
        const double f = el(r, c);
        for (int k = 0; k < 2 * n; ++k) el(r, k) -= f * el(c, k);
      }
    }
    // Row k of the inverse belongs to basic position k.
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) inv(r, c) = el(r, n + c);
    }
    for (int r = 0; r < n; ++r) {
      double s = 0.0;
      for (int c = 0; c < n; ++c) s += inv(r, c) * b_[c];
      xb_[r] = std::abs(s) < 1e-12 ? 0.0 : s;
    }
  }

  double dual_bound() const {
    std::vector<double> y(rows_);
    for (int i = 0; i < rows_; ++i) y[i] = std::max(y_[i], 0.0);
    double cover = std::numeric_limits<double>::infinity();
    for (RowMask m : cols_) {
      double s = 0.0;
      while (m) {
        s += y[std::countr_zero(m)];
        m &= m - 1;
      }
      cover = std::min(cover, s);
    }
    if (n_cols_ == 0) return 0.0;
    if (!(cover > 1e-12)) return std::numeric_limits<double>::infinity();
    double v = 0.0;
    for (int i = 0; i < rows_; ++i) v += b_[i] * y[i];
    return v / cover;
  }

  std::span<const RowMask> cols_;
  std::vector<double> b_;
  int rows_;
  int n_cols_;
  std::vector<int> basic_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<double> y_;
  std::vector<double> alpha_;
};

}  // namespace

PackingLpResult solve_packing_lp(
    std::span<const RowMask> columns, std::span<const double> capacity,
    std::optional<std::chrono::steady_clock::time_point> deadline) {
  PackingSimplex lp(columns, capacity);
  return lp.run(deadline);
}

}  // namespace wsn
