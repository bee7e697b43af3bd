#include "maxweight/capacity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace maxweight {

namespace {

constexpr double kTol = 1e-9;

// Dense tableau simplex for max c'x s.t. Ax = b, x >= 0, with b >= 0.
// Phase one drives artificials out; Bland's rule (smallest eligible
// index) prevents cycling. Sized for desk problems: a handful of rows,
// tens of columns.
struct Simplex {
  std::size_t rows, cols;             // structural columns only
  std::vector<std::vector<double>> a;  // rows x (cols + rows artificials)
  std::vector<double> b;
  std::vector<double> cost;            // structural costs
  std::vector<std::size_t> basis;      // column index per row

  Simplex(std::size_t r, std::size_t c)
      : rows(r), cols(c), a(r, std::vector<double>(c + r, 0.0)), b(r, 0.0),
        cost(c, 0.0), basis(r, 0) {}

  bool pivot(std::size_t leave_row, std::size_t enter_col) {
    double p = a[leave_row][enter_col];
    if (std::fabs(p) < kTol) return false;
    for (double& v : a[leave_row]) v /= p;
    b[leave_row] /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave_row) continue;
      double f = a[i][enter_col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= f * a[leave_row][j];
      b[i] -= f * b[leave_row];
      if (b[i] < 0 && b[i] > -kTol) b[i] = 0.0;
    }
    basis[leave_row] = enter_col;
    return true;
  }

  // Maximize sum of reduced[j] * x_j over columns < limit.
  // Returns false if unbounded (cannot happen for the capacity LP).
  bool optimize(const std::vector<double>& obj, std::size_t limit) {
    for (std::size_t guard = 0; guard < 100000; ++guard) {
      // Reduced costs via the basis.
      std::vector<double> y(rows);
      for (std::size_t i = 0; i < rows; ++i) {
        y[i] = basis[i] < obj.size() ? obj[basis[i]] : 0.0;
      }
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        double r = j < obj.size() ? obj[j] : 0.0;
        for (std::size_t i = 0; i < rows; ++i) r -= y[i] * a[i][j];
        if (r > kTol) {
          enter = j;  // Bland: first eligible index
          break;
        }
      }
      if (enter == limit) return true;  // optimal
      std::size_t leave = rows;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows; ++i) {
        if (a[i][enter] > kTol) {
          double ratio = b[i] / a[i][enter];
          if (ratio < best_ratio - kTol ||
              (ratio < best_ratio + kTol &&
               (leave == rows || basis[i] < basis[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave == rows) return false;  // unbounded
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex: pivot limit exceeded");
  }

  // Returns false when the constraints are infeasible.
  bool solve() {
    // Phase one: basis of artificials, minimize their sum.
    for (std::size_t i = 0; i < rows; ++i) {
      a[i][cols + i] = 1.0;
      basis[i] = cols + i;
    }
    std::vector<double> phase1(cols + rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) phase1[cols + i] = -1.0;
    if (!optimize(phase1, cols + rows)) return false;
    double infeas = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (basis[i] >= cols) infeas += b[i];
    }
    if (infeas > 1e-7) return false;
    // Kick lingering artificials out of the basis where possible.
    for (std::size_t i = 0; i < rows; ++i) {
      if (basis[i] < cols) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (std::fabs(a[i][j]) > kTol) {
          pivot(i, j);
          break;
        }
      }
    }
    return optimize(cost, cols);
  }

  std::vector<double> solution() const {
    std::vector<double> x(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      if (basis[i] < cols) x[basis[i]] = b[i];
    }
    return x;
  }
};

}  // namespace

CapacityResult slack(const RealVector& abar, const ScheduleSet& s) {
  const std::size_t dim = s.dim();
  if (abar.size() != dim) {
    throw std::invalid_argument("slack: rate vector dimension mismatch");
  }
  for (double v : abar) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("slack: abar must be positive componentwise");
    }
  }
  const auto& verts = s.vertices();
  const std::size_t m = verts.size();

  // Variables: lambda_1..lambda_m, mu (= 1 + eps).
  // Rows: sum_i lambda_i v_ij - abar_j * mu = 0 for each j; sum lambda = 1.
  Simplex lp(dim + 1, m + 1);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      lp.a[j][i] = static_cast<double>(verts[i][j]);
    }
    lp.a[j][m] = -abar[j];
    lp.b[j] = 0.0;
  }
  for (std::size_t i = 0; i < m; ++i) lp.a[dim][i] = 1.0;
  lp.b[dim] = 1.0;
  lp.cost[m] = 1.0;

  if (!lp.solve()) {
    // Unreachable when the zero schedule is present (mu = 0 with all mass
    // on it is feasible); surfaced for malformed inputs.
    throw std::runtime_error("slack: capacity LP infeasible");
  }

  std::vector<double> x = lp.solution();
  CapacityResult out;
  out.slack = x[m] - 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (x[i] > 1e-12) out.witness.emplace_back(verts[i], x[i]);
  }
  return out;
}

}  // namespace maxweight
