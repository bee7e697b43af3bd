#include "maxweight/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace maxweight {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Directional terms grad_j * v_j with the convention that a zero
// multiplicand wins over an infinite gradient: the derivative of w*g at a
// boundary coordinate is +inf, but a direction that leaves the coordinate
// untouched contributes nothing.
inline double safe_term(double grad, double v) {
  return v == 0.0 ? 0.0 : grad * v;
}

inline double safe_dot(const RealVector& grad, const RealVector& v) {
  double s = 0.0;
  for (std::size_t j = 0; j < grad.size(); ++j) s += safe_term(grad[j], v[j]);
  return s;
}

inline double safe_dot(const RealVector& grad, const ScheduleVector& v) {
  double s = 0.0;
  for (std::size_t j = 0; j < grad.size(); ++j) {
    s += safe_term(grad[j], static_cast<double>(v[j]));
  }
  return s;
}

double eval_objective(const UtilityFamily& u, const RealVector& w,
                      const RealVector& s) {
  double total = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (w[j] == 0.0) continue;
    double g = u.g(j).value(s[j]);
    if (g == -kInf) return -kInf;
    total += w[j] * g;
  }
  return total;
}

// Exact line search for the concave restriction phi(t) = f(x + t*d) on
// [0, tmax]. Golden-section to 1e-12 interval width; the endpoints are
// evaluated explicitly afterwards so that exact vertex optima (linear g)
// and drop steps land exactly on the boundary.
struct LineSearch {
  const UtilityFamily& u;
  const RealVector& w;
  const RealVector& x;
  const RealVector& d;
  mutable RealVector buf;

  double phi(double t) const {
    for (std::size_t j = 0; j < x.size(); ++j) {
      double v = x[j] + t * d[j];
      buf[j] = v < 0 ? 0.0 : v;  // clamp fp dust at the hull boundary
    }
    return eval_objective(u, w, buf);
  }

  double run(double tmax, bool all_linear) const {
    double f0 = phi(0.0);
    double fmax = phi(tmax);
    if (all_linear) {
      // phi is affine; the max sits at an endpoint.
      return fmax > f0 ? tmax : 0.0;
    }
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = tmax;
    double c = b - invphi * (b - a);
    double e = a + invphi * (b - a);
    double fc = phi(c), fe = phi(e);
    while (b - a > 1e-12) {
      if (fc >= fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - invphi * (b - a);
        fc = phi(c);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + invphi * (b - a);
        fe = phi(e);
      }
    }
    double t = 0.5 * (a + b);
    double ft = phi(t);
    // Prefer exact endpoints when they are at least as good.
    if (fmax >= ft && fmax > f0) return tmax;
    if (ft > f0) return t;
    return 0.0;
  }
};

SolveResult zero_vertex_result(const ScheduleSet& schedules) {
  SolveResult res;
  res.schedule.point.assign(schedules.dim(), 0.0);
  res.schedule.support.emplace_back(ScheduleVector(schedules.dim(), 0), 1.0);
  return res;
}

}  // namespace

SolveResult maximize(const UtilityFamily& u, const RealVector& weights,
                     const ScheduleSet& schedules, double tol,
                     std::size_t max_iter) {
  const std::size_t dim = schedules.dim();
  if (u.dim() != dim || weights.size() != dim) {
    throw std::invalid_argument("maximize: dimension mismatch");
  }
  const auto& verts = schedules.vertices();
  const std::size_t m = verts.size();

  double wmax = 0.0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("maximize: negative weight");
    wmax = std::max(wmax, w);
  }
  if (wmax == 0.0) {
    // Objective identically zero; return the idling schedule by convention.
    return zero_vertex_result(schedules);
  }

  // Normalized weights drive the iteration; the caller's scale only
  // reenters when reporting the objective.
  RealVector wn(dim);
  for (std::size_t j = 0; j < dim; ++j) wn[j] = weights[j] / wmax;

  // Coordinates no vertex can serve: for g with g(0) = -inf the term is
  // -inf on the whole hull, so it is dropped and flagged.
  SolverReport report;
  for (std::size_t j = 0; j < dim; ++j) {
    if (wn[j] == 0.0 || !u.g(j).minus_inf_at_zero()) continue;
    bool achievable = false;
    for (const auto& v : verts) {
      if (v[j] > 0) {
        achievable = true;
        break;
      }
    }
    if (!achievable) {
      wn[j] = 0.0;
      report.infeasible_log = true;
    }
  }

  bool any_weight = std::any_of(wn.begin(), wn.end(),
                                [](double w) { return w > 0.0; });
  if (!any_weight) {
    SolveResult res = zero_vertex_result(schedules);
    res.report.infeasible_log = true;
    return res;
  }

  bool all_linear = true;
  for (std::size_t j = 0; j < dim; ++j) {
    if (wn[j] > 0.0 && u.g(j).kind != GKind::kLinear) all_linear = false;
  }

  // Active set: vertex index -> convex weight, kept in index order, which
  // is lexicographic vertex order.
  std::map<std::size_t, double> active;
  RealVector x(dim, 0.0);
  auto rebuild_point = [&]() {
    std::fill(x.begin(), x.end(), 0.0);
    for (const auto& [i, a] : active) {
      for (std::size_t j = 0; j < dim; ++j) x[j] += a * verts[i][j];
    }
  };

  // Start at the uniform vertex average; for -inf style g this is interior
  // in every achievable weighted coordinate. The positive-vertex fallback
  // is kept for robustness.
  for (std::size_t i = 0; i < m; ++i) active[i] = 1.0 / m;
  rebuild_point();
  if (eval_objective(u, wn, x) == -kInf) {
    std::vector<std::size_t> positive;
    for (std::size_t i = 0; i < m; ++i) {
      bool ok = true;
      for (std::size_t j = 0; j < dim; ++j) {
        if (wn[j] > 0.0 && verts[i][j] == 0) {
          ok = false;
          break;
        }
      }
      if (ok) positive.push_back(i);
    }
    active.clear();
    if (positive.empty()) {
      // Unreachable after the achievability pass; fail safe to idling.
      SolveResult res = zero_vertex_result(schedules);
      res.report = report;
      return res;
    }
    for (std::size_t i : positive) active[i] = 1.0 / positive.size();
    rebuild_point();
  }

  double f = eval_objective(u, wn, x);
  RealVector grad(dim), dir(dim);
  LineSearch ls{u, wn, x, dir, RealVector(dim)};
  double rel_gap = kInf;
  SolveStatus status = SolveStatus::kMaxIterExceeded;
  std::size_t iter = 0;

  for (; iter < max_iter; ++iter) {
    for (std::size_t j = 0; j < dim; ++j) {
      grad[j] = wn[j] == 0.0 ? 0.0 : wn[j] * u.g(j).derivative(x[j]);
    }

    // Frank-Wolfe vertex: best gradient inner product, first in
    // lexicographic order on ties.
    std::size_t fw = 0;
    double fw_val = -kInf;
    for (std::size_t i = 0; i < m; ++i) {
      double val = safe_dot(grad, verts[i]);
      if (val > fw_val) {
        fw_val = val;
        fw = i;
      }
    }
    double x_val = safe_dot(grad, x);
    double gap = fw_val - x_val;
    rel_gap = gap / (1.0 + std::fabs(f));
    if (rel_gap <= tol) {
      status = SolveStatus::kConverged;
      break;
    }

    // Away vertex: worst active inner product.
    std::size_t away = active.begin()->first;
    double away_val = kInf;
    for (const auto& [i, a] : active) {
      (void)a;
      double val = safe_dot(grad, verts[i]);
      if (val < away_val) {
        away_val = val;
        away = i;
      }
    }
    double away_gap = x_val - away_val;

    bool fw_step = gap >= away_gap || active.size() == 1;
    double tmax;
    if (fw_step) {
      for (std::size_t j = 0; j < dim; ++j) {
        dir[j] = static_cast<double>(verts[fw][j]) - x[j];
      }
      tmax = 1.0;
    } else {
      double a_away = active[away];
      if (a_away >= 1.0) {
        fw_step = true;  // degenerate: nothing to move away from
        for (std::size_t j = 0; j < dim; ++j) {
          dir[j] = static_cast<double>(verts[fw][j]) - x[j];
        }
        tmax = 1.0;
      } else {
        for (std::size_t j = 0; j < dim; ++j) {
          dir[j] = x[j] - static_cast<double>(verts[away][j]);
        }
        tmax = a_away / (1.0 - a_away);
      }
    }

    double t = ls.run(tmax, all_linear);
    if (t <= 0.0) {
      // Line search cannot improve: numerical floor reached.
      status = rel_gap <= tol ? SolveStatus::kConverged : SolveStatus::kStalled;
      break;
    }

    if (fw_step) {
      for (auto& [i, a] : active) {
        (void)i;
        a *= (1.0 - t);
      }
      active[fw] += t;
    } else {
      for (auto& [i, a] : active) a = (i == away) ? a * (1.0 + t) - t : a * (1.0 + t);
    }

    // Drop exhausted vertices and renormalize; keeps the decomposition a
    // clean convex combination despite fp drift.
    double total = 0.0;
    for (auto it = active.begin(); it != active.end();) {
      if (it->second <= 1e-15) {
        it = active.erase(it);
      } else {
        total += it->second;
        ++it;
      }
    }
    for (auto& [i, a] : active) {
      (void)i;
      a /= total;
    }
    rebuild_point();
    f = eval_objective(u, wn, x);
  }

  if (iter == max_iter) {
    // Recompute the exit gap for the final iterate.
    for (std::size_t j = 0; j < dim; ++j) {
      grad[j] = wn[j] == 0.0 ? 0.0 : wn[j] * u.g(j).derivative(x[j]);
    }
    double fw_val = -kInf;
    for (std::size_t i = 0; i < m; ++i) {
      fw_val = std::max(fw_val, safe_dot(grad, verts[i]));
    }
    rel_gap = (fw_val - safe_dot(grad, x)) / (1.0 + std::fabs(f));
    status = rel_gap <= tol ? SolveStatus::kConverged : SolveStatus::kMaxIterExceeded;
  }

  SolveResult res;
  res.schedule.point = x;
  for (const auto& [i, a] : active) {
    res.schedule.support.emplace_back(verts[i], a);
  }
  res.report = report;
  res.report.iterations = iter;
  res.report.duality_gap = rel_gap;
  res.report.status = status;
  // Report the objective in the caller's scale, over kept coordinates.
  res.report.objective_value = wmax * f;
  return res;
}

RealVector brute_force_max(const UtilityFamily& u, const RealVector& weights,
                           const ScheduleSet& schedules, std::size_t grid) {
  const std::size_t dim = schedules.dim();
  if (u.dim() != dim || weights.size() != dim) {
    throw std::invalid_argument("brute_force_max: dimension mismatch");
  }
  if (schedules.size() > 6) {
    throw std::invalid_argument(
        "brute_force_max: too many vertices (simplex grid enumeration is "
        "exponential; limit is 6)");
  }
  if (grid == 0) throw std::invalid_argument("brute_force_max: grid must be > 0");

  bool any_weight = false;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("brute_force_max: negative weight");
    if (w > 0) any_weight = true;
  }
  if (!any_weight) {
    // Every hull point ties at objective 0; the lexicographic tie-break
    // selects the zero vector.
    return RealVector(dim, 0.0);
  }

  // Mass on the zero vertex never helps: g is increasing, so shifting it
  // onto any other vertex raises every coordinate. Enumerate over the
  // nonzero vertices only.
  std::vector<const ScheduleVector*> verts;
  for (const auto& v : schedules.vertices()) {
    if (std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) {
      verts.push_back(&v);
    }
  }
  if (verts.empty()) return RealVector(dim, 0.0);
  const std::size_t m = verts.size();
  const double n = static_cast<double>(grid);

  // Candidate coordinates are integers over `grid`: s_j = T_j / grid with
  // T_j = sum_i k_i v_ij. Tabulating w_j * g_j(T/grid) removes all
  // transcendental calls from the enumeration.
  std::vector<std::vector<double>> table(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::int64_t vmax = 0;
    for (const auto* v : verts) vmax = std::max(vmax, (*v)[j]);
    table[j].resize(static_cast<std::size_t>(vmax) * grid + 1);
    for (std::size_t t = 0; t < table[j].size(); ++t) {
      table[j][t] =
          weights[j] == 0.0 ? 0.0 : weights[j] * u.g(j).value(t / n);
    }
  }

  std::vector<std::int64_t> T(dim, 0);
  std::vector<std::int64_t> bestT;
  double best = -kInf;

  auto consider = [&]() {
    double val = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      double term = table[j][T[j]];
      if (term == -kInf) {
        val = -kInf;
        break;
      }
      val += term;
    }
    if (bestT.empty() || val > best ||
        (val == best && T < bestT)) {
      best = val;
      bestT = T;
    }
  };

  // Depth-first over compositions of `grid` into m parts, updating the
  // integer point incrementally.
  auto recurse = [&](auto&& self, std::size_t level, std::size_t budget) -> void {
    if (level == m - 1) {
      for (std::size_t j = 0; j < dim; ++j) {
        T[j] += static_cast<std::int64_t>(budget) * (*verts[level])[j];
      }
      consider();
      for (std::size_t j = 0; j < dim; ++j) {
        T[j] -= static_cast<std::int64_t>(budget) * (*verts[level])[j];
      }
      return;
    }
    for (std::size_t k = 0; k <= budget; ++k) {
      self(self, level + 1, budget - k);
      for (std::size_t j = 0; j < dim; ++j) T[j] += (*verts[level])[j];
    }
    for (std::size_t j = 0; j < dim; ++j) {
      T[j] -= static_cast<std::int64_t>(budget + 1) * (*verts[level])[j];
    }
  };
  recurse(recurse, 0, grid);

  RealVector out(dim);
  for (std::size_t j = 0; j < dim; ++j) out[j] = bestT[j] / n;
  return out;
}

}  // namespace maxweight
