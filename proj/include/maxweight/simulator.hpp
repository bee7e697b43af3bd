#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>

#include "maxweight/arrivals.hpp"
#include "maxweight/policy.hpp"
#include "maxweight/schedule_set.hpp"
#include "maxweight/types.hpp"
#include "maxweight/utility.hpp"

namespace maxweight {

// Per-slot record. Row t carries the state Q(t) together with the
// schedule applied during slot t; the t = 0 row has zero sigma.
struct StepRecord {
  std::int64_t t = 0;
  QueueVector queue;
  ScheduleVector sigma;
  RealVector sigma_bar;
  QueueVector arrivals;
};

struct SimSummary {
  std::int64_t horizon = 0;
  QueueVector q0;
  double time_avg_l1 = 0.0;       // average of ||Q(t)||_1 over t = 1..horizon
  std::int64_t max_l1 = 0;        // max over t = 0..horizon
  double kappa = 0.0;
  double fraction_below_kappa = 0.0;  // slots t = 1..horizon with ||Q||_1 <= kappa
  std::array<double, 4> quarter_avg_l1{};  // horizon split into four blocks
  QueueVector service_total;
  QueueVector arrival_total;
};

struct SimTrace {
  std::vector<StepRecord> records;  // thinned by record_every; t=0 always kept
  SimSummary summary;

  // Header: t,Q_1..Q_J,sigma_1..sigma_J,sbar_1..sbar_J
  void write_csv(std::ostream& out) const;
};

struct SimOptions {
  double tol = 1e-8;
  std::size_t max_iter = 10000;
  double kappa = 0.0;        // <= 0 selects the default 10 * ||abar||_1 * J
  std::int64_t record_every = 1;  // 0 keeps only the t=0 record
};

// Policy and arrival randomness use separate substreams so that the
// policy draw for slot t is a fixed function of (seed, t) regardless of
// how many variates the arrival model consumes.
struct SimRng {
  Rng policy;
  Rng arrivals;
  SimRng(std::uint64_t seed)
      : policy(derive_seed(seed, 0)), arrivals(derive_seed(seed, 1)) {}
};

/**
 * One slot of the queue recursion: decide on Q, serve a sampled vertex of
 * S /\ Q, then add arrivals. Returns the next state; the record's t field
 * is left for the caller to fill.
 */
std::pair<QueueVector, StepRecord> step(const QueueVector& q,
                                        const UtilityFamily& u,
                                        const ScheduleSet& s,
                                        const ArrivalModel& arrivals,
                                        double tol, SimRng& rng);

/**
 * Simulate `horizon` slots from q0. Same scenario, horizon and seed give
 * a bit-identical trace. Queue lengths can never go negative: the served
 * schedule is always a vertex of the truncated set.
 */
SimTrace run(const UtilityFamily& u, const ScheduleSet& s,
             const ArrivalModel& arrivals, const QueueVector& q0,
             std::int64_t horizon, std::uint64_t seed,
             const SimOptions& opt = {});

}  // namespace maxweight
