#pragma once

#include "maxweight/rng.hpp"
#include "maxweight/schedule_set.hpp"
#include "maxweight/solver.hpp"
#include "maxweight/types.hpp"
#include "maxweight/utility.hpp"

namespace maxweight {

/**
 * One slot of the MaxWeight-(alpha,g) policy on queue state Q: maximize
 * sum_j g_j(s_j) Q_j^alpha over the truncated hull <S /\ Q>. Returns the
 * fractional optimum with its convex decomposition; the served schedule
 * is a random vertex drawn from that decomposition (see sample), whose
 * conditional mean given Q is the fractional optimum.
 */
FractionalSchedule decide(const UtilityFamily& u, const ScheduleSet& s,
                          const QueueVector& q, double tol = 1e-8,
                          std::size_t max_iter = 10000);

// Inverse-CDF draw over the support in its stored (lexicographic) order,
// consuming exactly one uniform variate. Weights below 1e-12 are pruned
// and the rest renormalized first. Throws std::invalid_argument when the
// weights do not sum to 1 within 1e-6 (invalid decomposition).
ScheduleVector sample(const FractionalSchedule& d, Rng& rng);

struct PolicyDecision {
  FractionalSchedule sigma_bar;
  ScheduleVector sigma;
};

PolicyDecision decide_and_sample(const UtilityFamily& u, const ScheduleSet& s,
                                 const QueueVector& q, Rng& rng,
                                 double tol = 1e-8,
                                 std::size_t max_iter = 10000);

}  // namespace maxweight
