#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "maxweight/types.hpp"

namespace maxweight {

/**
 * Finite set of service vectors for a single-hop switched network.
 *
 * Vertices are stored deduplicated and in lexicographic order; every
 * deterministic tie-break elsewhere (solver vertex scans, sampling order)
 * leans on that ordering. The feasible region used by the policy is the
 * convex hull of these vertices.
 */
class ScheduleSet {
 public:
  ScheduleSet() = default;

  // Takes ownership of the vertex list; sorts and deduplicates.
  // Dimension is taken from the first vertex; mismatched rows throw.
  explicit ScheduleSet(std::vector<ScheduleVector> vertices);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vertices_.size(); }
  const std::vector<ScheduleVector>& vertices() const { return vertices_; }
  const ScheduleVector& vertex(std::size_t i) const { return vertices_[i]; }

  bool contains(const ScheduleVector& v) const;

  bool operator==(const ScheduleSet& other) const {
    return vertices_ == other.vertices_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<ScheduleVector> vertices_;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> errors;  // one entry per failed check
};

// Checks the three structural requirements: the zero vector is present
// (idling must be allowed), no vertex has a negative component, and the
// vertex matrix has full real rank (the hull is full dimensional, so
// interior load vectors exist). All failures are reported, not just the
// first one.
ValidationReport validate(const ScheduleSet& s);

// Componentwise truncation S /\ Q = { sigma /\ Q : sigma in S }, deduplicated.
// This is the feasible set for a slot that starts with queue Q: no schedule
// may serve more than is waiting. Throws std::invalid_argument on a
// dimension mismatch.
ScheduleSet truncate(const ScheduleSet& s, const QueueVector& q);

// Text format: one vertex per line, space-separated nonnegative integers.
// Lines beginning with '#' and blank lines are ignored.
ScheduleSet parse_schedule_set(std::istream& in);
ScheduleSet load_schedule_set(const std::string& path);

}  // namespace maxweight
