#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "maxweight/schedule_set.hpp"
#include "maxweight/types.hpp"
#include "maxweight/utility.hpp"

namespace maxweight {

/**
 * A point of the schedule hull together with an explicit convex
 * decomposition over vertices. Invariants: weights are strictly positive
 * and sum to 1 (within 1e-9), support is listed in lexicographic vertex
 * order, and the weighted vertex sum reproduces `point` (within 1e-9).
 * The decomposition is what makes the policy implementable: a random
 * vertex drawn with these weights has conditional mean `point`.
 */
struct FractionalSchedule {
  RealVector point;
  std::vector<std::pair<ScheduleVector, double>> support;
};

enum class SolveStatus { kConverged, kMaxIterExceeded, kStalled };

struct SolverReport {
  std::size_t iterations = 0;
  // Frank-Wolfe gap at exit, normalized by (1 + |objective|); <= tol on
  // success. The raw stopping rule is <gradient, s_fw - s> <= tol * (1 + |obj|).
  double duality_gap = 0.0;
  // sum_j weights_j * g_j(point_j) with the caller's weights. When
  // infeasible_log is set this is the objective over achievable
  // coordinates only (the full objective is -inf everywhere).
  double objective_value = 0.0;
  SolveStatus status = SolveStatus::kConverged;
  // Some coordinate had positive weight, a g that is -inf at 0, and no
  // vertex serving it; its term was dropped. Cannot happen when the
  // vertex set covers every coordinate.
  bool infeasible_log = false;

  bool converged() const { return status == SolveStatus::kConverged; }
};

struct SolveResult {
  FractionalSchedule schedule;
  SolverReport report;
};

/**
 * Maximize sum_j weights_j * g_j(s_j) over the convex hull of the vertex
 * list, by away-step conditional gradient with exact (golden-section)
 * line search. Deterministic: vertex scans break ties in lexicographic
 * order and the start point is the uniform vertex average, so equal
 * inputs give identical outputs. Weights are normalized internally by
 * their max-norm, which makes the returned point invariant under
 * positive rescaling of the weight vector.
 *
 * Throws std::invalid_argument on dimension mismatch. Hitting max_iter
 * is not an error: the best iterate is returned with its gap and
 * status kMaxIterExceeded.
 */
SolveResult maximize(const UtilityFamily& u, const RealVector& weights,
                     const ScheduleSet& schedules, double tol = 1e-8,
                     std::size_t max_iter = 10000);

/**
 * Independent brute-force check: best point of the form sum_i lambda_i v_i
 * with lambda running over the uniform simplex grid of resolution 1/grid.
 * Exponential in the vertex count (compositions of `grid` into |S| parts);
 * refuses more than 6 vertices. Ties on objective value resolve to the
 * lexicographically smallest point; an all-zero weight vector returns the
 * zero vector.
 */
RealVector brute_force_max(const UtilityFamily& u, const RealVector& weights,
                           const ScheduleSet& schedules, std::size_t grid);

}  // namespace maxweight
