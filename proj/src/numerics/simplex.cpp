#include <algorithm>
#include <cmath>
#include <limits>

#include "hierlyap/errors.hpp"
#include "hierlyap/kernels.hpp"
#include "hierlyap/numerics.hpp"

namespace hierlyap::numerics {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;

// Dense tableau for  min cost.x  s.t.  rows.x = rhs, x >= 0.
// Column layout: [structural | slack | artificial | rhs].
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : width_(cols + 1), rows_(rows, Vector(cols + 1)) {}

  Vector& row(std::size_t i) { return rows_[i]; }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t rhs_col() const { return width_ - 1; }
  std::vector<std::size_t>& basis() { return basis_; }
  Vector& objective_row() { return z_; }

  // Loads reduced costs for a cost vector over all non-rhs columns.
  void price(const Vector& cost) {
    z_.assign(width_, 0.0);
    std::copy(cost.begin(), cost.end(), z_.begin());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const double cb = cost[basis_[i]];
      if (cb != 0.0) kernels::axpy(-cb, rows_[i], z_);
    }
  }

  double objective_value() const { return -z_[width_ - 1]; }

  void pivot(std::size_t r, std::size_t e) {
    Vector& pr = rows_[r];
    kernels::scale(1.0 / pr[e], pr);
    pr[e] = 1.0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r) continue;
      const double f = rows_[i][e];
      if (f != 0.0) {
        kernels::axpy(-f, pr, rows_[i]);
        rows_[i][e] = 0.0;
      }
    }
    const double f = z_[e];
    if (f != 0.0) {
      kernels::axpy(-f, pr, z_);
      z_[e] = 0.0;
    }
    basis_[r] = e;
  }

  void drop_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  enum class Outcome { Optimal, Unbounded };

  // Bland's rule: lowest-index improving column, lowest-index basic variable on ratio ties.
  Outcome run(std::size_t allowed_cols, std::size_t max_iters) {
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (z_[j] < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_cols) return Outcome::Optimal;

      std::size_t leave = rows_.size();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const double a = rows_[i][enter];
        if (a <= kPivotTol) continue;
        const double ratio = rows_[i][rhs_col()] / a;
        const double slack = 1e-12 * std::max(1.0, std::fabs(ratio));
        if (leave == rows_.size() || ratio < best - slack) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + slack && basis_[i] < basis_[leave]) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave == rows_.size()) return Outcome::Unbounded;
      pivot(leave, enter);
    }
    throw Error("lp_feasible: simplex iteration limit reached");
  }

 private:
  std::size_t width_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> basis_;
  Vector z_;
};

}  // namespace

FeasibilityResult lp_feasible(const LpProblem& problem) {
  const std::size_t n = problem.num_vars;
  const std::size_t m = problem.rows.size();
  const Vector lower = problem.lower.empty() ? Vector(n, 1.0) : problem.lower;
  const Vector objective = problem.objective.empty() ? Vector(n, 0.0) : problem.objective;
  if (lower.size() != n || objective.size() != n) throw DimensionError("lp_feasible: bound/objective size mismatch");
  for (const LinearRow& r : problem.rows) {
    if (r.coeffs.size() != n) throw DimensionError("lp_feasible: row width mismatch");
    if (!std::isfinite(r.rhs)) throw Error("lp_feasible: non-finite right-hand side");
    for (double v : r.coeffs)
      if (!std::isfinite(v)) throw Error("lp_feasible: non-finite coefficient");
  }

  // Shift c = lower + y so y >= 0.
  Vector shifted_rhs(m);
  std::size_t num_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const LinearRow& r = problem.rows[i];
    shifted_rhs[i] = r.rhs - kernels::dot(r.coeffs, lower);
    if (shifted_rhs[i] < 0.0) ++num_art;
  }

  const std::size_t slack0 = n;
  const std::size_t art0 = n + m;
  const std::size_t cols = n + m + num_art;
  Tableau tab(m, cols);
  tab.basis().resize(m);
  std::size_t next_art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    Vector& row = tab.row(i);
    const double sign = shifted_rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) row[j] = sign * problem.rows[i].coeffs[j];
    row[slack0 + i] = sign;
    row[tab.rhs_col()] = sign * shifted_rhs[i];
    if (sign < 0.0) {
      row[next_art] = 1.0;
      tab.basis()[i] = next_art++;
    } else {
      tab.basis()[i] = slack0 + i;
    }
  }

  const std::size_t max_iters = 20000 + 200 * (m + n);
  double rhs_scale = 1.0;
  for (double b : shifted_rhs) rhs_scale = std::max(rhs_scale, std::fabs(b));

  FeasibilityResult result;
  if (num_art > 0) {
    Vector phase1_cost(cols, 0.0);
    for (std::size_t j = art0; j < cols; ++j) phase1_cost[j] = 1.0;
    tab.price(phase1_cost);
    tab.run(cols, max_iters);
    result.phase1_residual = std::max(0.0, tab.objective_value());
    if (result.phase1_residual > kFeasibilityTol * rhs_scale) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Pivot zero-level artificials out of the basis; rows with no eligible
    // column are redundant.
    for (std::size_t i = tab.num_rows(); i-- > 0;) {
      if (tab.basis()[i] < art0) continue;
      std::size_t col = art0;
      for (std::size_t j = 0; j < art0; ++j) {
        if (std::fabs(tab.row(i)[j]) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col == art0) {
        tab.drop_row(i);
      } else {
        tab.pivot(i, col);
      }
    }
  }

  Vector phase2_cost(cols, 0.0);
  std::copy(objective.begin(), objective.end(), phase2_cost.begin());
  tab.price(phase2_cost);
  result.unbounded = tab.run(art0, max_iters) == Tableau::Outcome::Unbounded;

  Vector c = lower;
  for (std::size_t i = 0; i < tab.num_rows(); ++i) {
    const std::size_t b = tab.basis()[i];
    if (b < n) c[b] += std::max(0.0, tab.row(i)[tab.rhs_col()]);
  }
  result.status = LpStatus::Feasible;
  result.objective = kernels::dot(objective, c);
  result.solution = std::move(c);
  return result;
}

}  // namespace hierlyap::numerics
