#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace maxweight {

// Jobs per queue. Queue lengths and schedules are integer valued; fractional
// schedules and fluid states live in RealVector.
using QueueVector = std::vector<std::int64_t>;
using ScheduleVector = std::vector<std::int64_t>;
using RealVector = std::vector<double>;

inline std::int64_t l1_norm(const QueueVector& q) {
  std::int64_t s = 0;
  for (auto v : q) s += v;
  return s;
}

inline double l1_norm(const RealVector& q) {
  double s = 0.0;
  for (double v : q) s += (v < 0 ? -v : v);
  return s;
}

inline double l1_distance(const RealVector& a, const RealVector& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double d = a[j] - b[j];
    s += (d < 0 ? -d : d);
  }
  return s;
}

inline RealVector to_real(const QueueVector& q) {
  return RealVector(q.begin(), q.end());
}

}  // namespace maxweight
