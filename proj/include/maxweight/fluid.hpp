#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "maxweight/arrivals.hpp"
#include "maxweight/schedule_set.hpp"
#include "maxweight/solver.hpp"
#include "maxweight/types.hpp"
#include "maxweight/utility.hpp"

namespace maxweight {

/**
 * Drain-time certificate for the fluid model. With capacity slack eps and
 * rho = (1 + eps) * abar interior to the hull:
 *
 *   gamma = (1 + alpha)^(1/(1+alpha)) / |J|
 *   K_L   = max_j g'_j(rho_j) / (1 + alpha)      (max of L over the unit
 *           L1-simplex, attained at a coordinate vertex since L is convex)
 *   T     = (1 + alpha) * K_L^(1/(1+alpha)) / (eps * gamma^alpha)
 *
 * Fluid trajectories started from ||q(0)||_1 = 1 empty by time T.
 */
struct LyapunovCertificate {
  double epsilon = 0.0;
  RealVector rho;
  double gamma = 0.0;
  double K_L = 0.0;
  double T = 0.0;
};

struct FluidStep {
  double t = 0.0;
  RealVector q;
  double lyapunov = 0.0;  // NaN when no rho was supplied to integrate()
};

struct FluidTrajectory {
  std::vector<FluidStep> steps;
  bool absorbed = false;
  double absorbed_at = 0.0;  // meaningful when absorbed

  // Header: t,q_1..q_J,L
  void write_csv(std::ostream& out) const;
};

// Fluid service rate: the hull optimum over the FULL schedule set with
// weights q_j^alpha (no truncation in the fluid model).
FractionalSchedule sigma_star(const UtilityFamily& u, const ScheduleSet& s,
                              const RealVector& q, double tol = 1e-8);

// L(q) = sum_j g'_j(rho_j) q_j^(1+alpha) / (1+alpha). Throws when some
// g'_j(rho_j) is undefined (rho_j = 0 with a g whose derivative blows up
// at 0); cannot happen for interior rho.
double lyapunov(const UtilityFamily& u, const RealVector& rho,
                const RealVector& q);

// Builds the certificate at the given slack. Validates 0 < eps and
// rho = (1+eps) * abar still inside the hull. Requires abar > 0.
LyapunovCertificate certificate(const UtilityFamily& u, const ScheduleSet& s,
                                const RealVector& abar, double capacity_slack);

/**
 * Explicit Euler for dq_j/dt = abar_j - sigma*_j(q), with the boundary
 * rule "project then freeze": after each update negative coordinates are
 * clipped to 0, and a coordinate at exactly 0 stays at 0 (matching the
 * fluid equations, whose derivative vanishes on empty coordinates). Once
 * every coordinate is 0 the state is absorbed and the remaining interval
 * is skipped.
 *
 * `rho` only feeds the recorded Lyapunov column.
 */
FluidTrajectory integrate(const RealVector& q0, const RealVector& abar,
                          const UtilityFamily& u, const ScheduleSet& s,
                          double h, double t_end, double tol = 1e-8,
                          const std::optional<RealVector>& rho = std::nullopt);

struct ScaledComparison {
  std::int64_t c = 0;
  double sup_distance = 0.0;
};

struct CompareInputs {
  UtilityFamily u;
  ScheduleSet s;
  ArrivalModel arrivals;
  RealVector q0_shape;  // direction of the initial condition; normalized internally
  double h = 1e-3;
  double tol = 1e-8;
};

/**
 * Fluid-limit check: for each c, simulate from an integer Q(0) with
 * ||Q(0)||_1 = c along the shape, integrate the fluid from Q(0)/c, and
 * report sup over the step grid of ||Q(floor(c t))/c - q(t)||_1 on
 * [0, t_end]. Distances shrink as c grows when the fluid model is right.
 */
std::vector<ScaledComparison> compare_scaled(const CompareInputs& in,
                                             const std::vector<std::int64_t>& c_list,
                                             double t_end, std::uint64_t seed);

// Largest-remainder rounding of c * shape/||shape||_1 to an integer
// vector with total exactly c. Exposed for tests and the CLI.
QueueVector scale_initial_state(const RealVector& shape, std::int64_t c);

}  // namespace maxweight
