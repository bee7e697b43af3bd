#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "maxweight/arrivals.hpp"
#include "maxweight/schedule_set.hpp"
#include "maxweight/types.hpp"
#include "maxweight/utility.hpp"

namespace maxweight {

// n independent unit-service queues, one served per slot: unit vectors
// plus the zero vector.
ScheduleSet make_single(std::size_t n);

// n x n input-queued switch with one virtual output queue per (input,
// output) pair, vectorized row-major. Vertices are all matchings of the
// crossbar (sub-permutation 0/1 matrices, zero included), so the hull is
// the doubly substochastic set and spans the full space.
ScheduleSet make_iq_switch(std::size_t n);

// Parses "single:<n>" or "iq-switch:<n>".
ScheduleSet make_generator(const std::string& name);

/**
 * A fully resolved experiment description: every default filled in, every
 * generator expanded, ready to run. `resolved` holds the config after
 * resolution in the same schema the loader accepts, so it can be embedded
 * in outputs and fed back in unchanged.
 */
struct Scenario {
  std::string mode;

  ScheduleSet schedules;
  std::optional<UtilityFamily> utility;  // set for every mode (default LINEAR alpha=1)
  std::optional<ArrivalModel> arrivals;
  RealVector abar;  // arrival mean, from `arrivals` or an explicit `abar`

  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::size_t max_iter = 10000;

  // simulate
  QueueVector q0;
  std::int64_t horizon = 0;
  double kappa = 0.0;  // 0 keeps the simulator default
  std::int64_t record_every = 1;

  // fluid
  RealVector fluid_q0;
  double h = 1e-3;
  std::optional<double> t_end;  // absent: derived from the half-slack certificate

  // certificate: which epsilon the top-level block uses
  std::string eps_mode = "star";  // "star" | "star/2" | "value"
  double eps_value = 0.0;

  // compare-scaled
  std::vector<std::int64_t> c_list;
  RealVector shape;
  std::int64_t replicates = 1;

  nlohmann::ordered_json resolved;

  const UtilityFamily& u() const { return *utility; }
};

// Parses and validates a config for the given mode. Throws
// std::invalid_argument with a one-line message on any problem. A "mode"
// key inside the config must agree with the requested mode.
Scenario load_scenario(const nlohmann::ordered_json& config,
                       const std::string& mode,
                       std::optional<std::uint64_t> seed_override = std::nullopt);

Scenario load_scenario_file(const std::string& path, const std::string& mode,
                            std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace maxweight
