// Copyright 2026 The spupack Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Two-phase revised simplex for the master-problem shape
//
//   min c^T x   s.t.  A x = b,  x >= 0,   A >= 0 integral, b > 0.
//
// The basis inverse is kept explicitly (rows are few, at most a few hundred)
// and refactored periodically. Pricing is Dantzig's rule; after `rows`
// consecutive pivots without objective progress it switches to Bland's rule
// until progress resumes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spupack/core_model.hpp"

namespace spupack {

struct SparseEntry {
  std::size_t row = 0;
  Quantity value = 0;
};

using SparseColumn = std::vector<SparseEntry>;

struct LpProblem {
  std::vector<double> costs;
  // Column-major: columns[j] lists the nonzero entries of column j.
  std::vector<SparseColumn> columns;
  std::vector<Quantity> rhs;

  std::size_t num_rows() const { return rhs.size(); }
  std::size_t num_cols() const { return costs.size(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> primal;
  std::vector<double> duals;
  double objective = 0.0;
  // basis[r] is the variable basic in row r; values >= num_cols() denote the
  // artificial of row (value - num_cols()), left in only for redundant rows.
  std::vector<std::size_t> basis;
  std::size_t iterations = 0;
};

inline constexpr double kPivotTolerance = 1e-10;

inline double reduced_cost(const LpProblem& lp, const std::vector<double>& duals, std::size_t j) {
  double d = lp.costs[j];
  for (const auto& e : lp.columns[j]) d -= static_cast<double>(e.value) * duals[e.row];
  return d;
}

inline void validate_lp(const LpProblem& lp) {
  if (lp.columns.size() != lp.costs.size()) {
    throw std::invalid_argument("lp: " + std::to_string(lp.columns.size()) + " columns but " +
                                std::to_string(lp.costs.size()) + " costs");
  }
  for (const auto q : lp.rhs) {
    if (q <= 0) throw std::invalid_argument("lp: right-hand sides must be positive");
  }
  for (const auto& col : lp.columns) {
    for (const auto& e : col) {
      if (e.row >= lp.rhs.size()) throw std::invalid_argument("lp: row index out of range");
      if (e.value < 0) throw std::invalid_argument("lp: negative matrix entry");
    }
  }
}

namespace detail {

class RevisedSimplex {
 public:
  explicit RevisedSimplex(const LpProblem& lp)
      : lp_(lp), m_(lp.num_rows()), n_(lp.num_cols()), binv_(m_ * m_, 0.0), x_b_(m_, 0.0) {
    basis_.resize(m_);
    position_.assign(n_ + m_, kNonbasic);
    // Crash basis: a structural unit column a * e_r starts basic in row r
    // (cheapest per unit wins); other rows start on their artificial.
    std::vector<std::size_t> unit(m_, kNonbasic);
    for (std::size_t j = 0; j < n_; ++j) {
      const auto& col = lp.columns[j];
      if (col.size() != 1 || col[0].value <= 0) continue;
      const std::size_t r = col[0].row;
      const auto per_unit = [&](std::size_t k) {
        return lp.costs[k] / static_cast<double>(lp.columns[k][0].value);
      };
      if (unit[r] == kNonbasic || per_unit(j) < per_unit(unit[r])) unit[r] = j;
    }
    for (std::size_t r = 0; r < m_; ++r) {
      const double rhs = static_cast<double>(lp.rhs[r]);
      if (unit[r] != kNonbasic) {
        const double a = static_cast<double>(lp.columns[unit[r]][0].value);
        basis_[r] = unit[r];
        binv_[r * m_ + r] = 1.0 / a;
        x_b_[r] = rhs / a;
      } else {
        basis_[r] = n_ + r;
        binv_[r * m_ + r] = 1.0;
        x_b_[r] = rhs;
      }
      position_[basis_[r]] = r;
    }
    max_iterations_ = 200 * (m_ + n_) + 1000;
  }

  LpResult solve() {
    LpResult result;
    // Phase 1: minimize the sum of artificials.
    std::vector<double> phase1(n_ + m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) phase1[n_ + r] = 1.0;
    if (!iterate(phase1)) throw std::logic_error("lp: phase 1 cannot be unbounded");
    double infeasibility = 0.0;
    double scale = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= n_) infeasibility += x_b_[r];
      scale += static_cast<double>(lp_.rhs[r]);
    }
    if (infeasibility > kEpsilon * scale) {
      result.status = LpStatus::kInfeasible;
      result.iterations = iterations_;
      return result;
    }
    drive_out_artificials();

    std::vector<double> phase2(n_ + m_, 0.0);
    std::copy(lp_.costs.begin(), lp_.costs.end(), phase2.begin());
    phase_two_ = true;
    const bool bounded = iterate(phase2);
    result.iterations = iterations_;
    if (!bounded) {
      result.status = LpStatus::kUnbounded;
      return result;
    }
    refactor();
    result.status = LpStatus::kOptimal;
    result.primal.assign(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) result.primal[basis_[r]] = std::max(0.0, x_b_[r]);
    }
    result.duals = duals(phase2);
    result.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) result.objective += lp_.costs[j] * result.primal[j];
    result.basis = basis_;
    return result;
  }

 private:
  static constexpr std::size_t kNonbasic = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kRefactorInterval = 64;

  // alpha = B^-1 a_j
  std::vector<double> ftran(std::size_t j) const {
    std::vector<double> alpha(m_, 0.0);
    if (j >= n_) {
      const std::size_t k = j - n_;
      for (std::size_t r = 0; r < m_; ++r) alpha[r] = binv_[r * m_ + k];
      return alpha;
    }
    for (const auto& e : lp_.columns[j]) {
      const double v = static_cast<double>(e.value);
      for (std::size_t r = 0; r < m_; ++r) alpha[r] += binv_[r * m_ + e.row] * v;
    }
    return alpha;
  }

  std::vector<double> duals(const std::vector<double>& cost) const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t k = 0; k < m_; ++k) y[k] += cb * binv_[r * m_ + k];
    }
    return y;
  }

  double reduced(const std::vector<double>& cost, const std::vector<double>& y,
                 std::size_t j) const {
    if (j >= n_) return cost[j] - y[j - n_];
    double d = cost[j];
    for (const auto& e : lp_.columns[j]) d -= static_cast<double>(e.value) * y[e.row];
    return d;
  }

  void pivot(std::size_t row, std::size_t entering, const std::vector<double>& alpha) {
    const double theta = x_b_[row] / alpha[row];
    for (std::size_t r = 0; r < m_; ++r) {
      if (r != row) x_b_[r] -= theta * alpha[r];
    }
    x_b_[row] = theta;
    double* prow = &binv_[row * m_];
    const double inv = 1.0 / alpha[row];
    for (std::size_t k = 0; k < m_; ++k) prow[k] *= inv;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == row || alpha[r] == 0.0) continue;
      const double f = alpha[r];
      double* dst = &binv_[r * m_];
      for (std::size_t k = 0; k < m_; ++k) dst[k] -= f * prow[k];
    }
    position_[basis_[row]] = kNonbasic;
    basis_[row] = entering;
    position_[entering] = row;
    if (++since_refactor_ >= kRefactorInterval) refactor();
  }

  // Gauss-Jordan inversion of the current basis with partial pivoting.
  void refactor() {
    since_refactor_ = 0;
    std::vector<double> b(m_ * m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t j = basis_[r];
      if (j >= n_) {
        b[(j - n_) * m_ + r] = 1.0;
      } else {
        for (const auto& e : lp_.columns[j]) b[e.row * m_ + r] = static_cast<double>(e.value);
      }
    }
    std::vector<double> inv(m_ * m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) inv[r * m_ + r] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < m_; ++r) {
        if (std::abs(b[r * m_ + c]) > std::abs(b[p * m_ + c])) p = r;
      }
      if (std::abs(b[p * m_ + c]) < kPivotTolerance) throw std::runtime_error("lp: singular basis");
      if (p != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(b[p * m_ + k], b[c * m_ + k]);
          std::swap(inv[p * m_ + k], inv[c * m_ + k]);
        }
      }
      const double d = 1.0 / b[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        b[c * m_ + k] *= d;
        inv[c * m_ + k] *= d;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = b[r * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          b[r * m_ + k] -= f * b[c * m_ + k];
          inv[r * m_ + k] -= f * inv[c * m_ + k];
        }
      }
    }
    // inv = B^-1 where B's columns are ordered by basis position.
    binv_ = std::move(inv);
    for (std::size_t r = 0; r < m_; ++r) {
      double v = 0.0;
      for (std::size_t k = 0; k < m_; ++k) v += binv_[r * m_ + k] * static_cast<double>(lp_.rhs[k]);
      x_b_[r] = v;
    }
  }

  // Runs simplex iterations for `cost` until optimal (true) or unbounded
  // (false). Artificial variables never enter.
  bool iterate(const std::vector<double>& cost) {
    std::size_t stalled = 0;
    bool bland = false;
    while (true) {
      if (++iterations_ > max_iterations_) throw std::runtime_error("lp: iteration limit exceeded");
      const std::vector<double> y = duals(cost);
      std::size_t entering = kNonbasic;
      double best = -kEpsilon;
      for (std::size_t j = 0; j < n_; ++j) {
        if (position_[j] != kNonbasic) continue;
        const double d = reduced(cost, y, j);
        if (d < best) {
          entering = j;
          best = d;
          if (bland) break;
        }
      }
      if (entering == kNonbasic) return true;

      const std::vector<double> alpha = ftran(entering);
      std::size_t leave = kNonbasic;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m_; ++r) {
        // A zero-level artificial left on a redundant row must not grow.
        const bool stuck_artificial = phase_two_ && basis_[r] >= n_ && alpha[r] < -kPivotTolerance;
        if (alpha[r] <= kPivotTolerance && !stuck_artificial) continue;
        const double t = stuck_artificial ? 0.0 : std::max(0.0, x_b_[r]) / alpha[r];
        if (leave == kNonbasic || t < ratio - 1e-12) {
          leave = r;
          ratio = t;
        } else if (t <= ratio + 1e-12) {
          const bool better =
              bland ? basis_[r] < basis_[leave] : std::abs(alpha[r]) > std::abs(alpha[leave]);
          if (better) {
            leave = r;
            ratio = std::min(ratio, t);
          }
        }
      }
      if (leave == kNonbasic) return false;

      if (ratio * -best <= 1e-12) {
        if (++stalled >= std::max<std::size_t>(m_, 1)) bland = true;
      } else {
        stalled = 0;
        bland = false;
      }
      x_b_[leave] = phase_two_ && basis_[leave] >= n_ ? 0.0 : std::max(0.0, x_b_[leave]);
      pivot(leave, entering, alpha);
    }
  }

  // After phase 1, replaces zero-valued basic artificials by structural
  // columns where possible. Artificials that cannot be replaced sit on
  // redundant rows and stay basic at zero.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      std::size_t best_j = kNonbasic;
      double best_abs = 1e-7;
      std::vector<double> best_alpha;
      for (std::size_t j = 0; j < n_; ++j) {
        if (position_[j] != kNonbasic) continue;
        std::vector<double> alpha = ftran(j);
        if (std::abs(alpha[r]) > best_abs) {
          best_abs = std::abs(alpha[r]);
          best_j = j;
          best_alpha = std::move(alpha);
        }
      }
      if (best_j == kNonbasic) continue;
      x_b_[r] = 0.0;
      pivot(r, best_j, best_alpha);
    }
  }

  const LpProblem& lp_;
  std::size_t m_;
  std::size_t n_;
  std::vector<double> binv_;
  std::vector<double> x_b_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> position_;
  std::size_t iterations_ = 0;
  std::size_t max_iterations_ = 0;
  std::size_t since_refactor_ = 0;
  bool phase_two_ = false;
};

}  // namespace detail

inline LpResult solve_lp(const LpProblem& lp) {
  validate_lp(lp);
  if (lp.num_rows() == 0) {
    LpResult r;
    r.status = LpStatus::kOptimal;
    r.primal.assign(lp.num_cols(), 0.0);
    for (std::size_t j = 0; j < lp.num_cols(); ++j) {
      if (lp.costs[j] < 0.0) {
        r.status = LpStatus::kUnbounded;
        r.primal.clear();
        break;
      }
    }
    return r;
  }
  return detail::RevisedSimplex(lp).solve();
}

}  // namespace spupack
