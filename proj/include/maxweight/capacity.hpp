#pragma once

#include <utility>
#include <vector>

#include "maxweight/schedule_set.hpp"
#include "maxweight/types.hpp"

namespace maxweight {

struct CapacityResult {
  // Largest eps with (1 + eps) * abar inside the schedule hull; negative
  // when abar itself is outside (the system cannot be stabilized).
  double slack = 0.0;
  // Convex weights lambda with sum_i lambda_i v_i = (1 + eps) * abar.
  std::vector<std::pair<ScheduleVector, double>> witness;
};

/**
 * Capacity slack of an arrival rate vector: solves
 *   max eps  s.t.  lambda >= 0, sum lambda = 1,
 *                  sum_i lambda_i v_i = (1 + eps) * abar
 * as one LP (substituting mu = 1 + eps >= 0 keeps it in standard form;
 * feasible because the zero schedule gives mu = 0). Dense two-phase
 * simplex with Bland's rule, feasibility tolerance 1e-9.
 *
 * Requires abar > 0 componentwise and a validated schedule set.
 */
CapacityResult slack(const RealVector& abar, const ScheduleSet& s);

}  // namespace maxweight
