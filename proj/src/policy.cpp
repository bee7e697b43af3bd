#include "maxweight/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace maxweight {

FractionalSchedule decide(const UtilityFamily& u, const ScheduleSet& s,
                          const QueueVector& q, double tol,
                          std::size_t max_iter) {
  if (q.size() != s.dim()) {
    throw std::invalid_argument("decide: queue dimension mismatch");
  }
  for (auto v : q) {
    if (v < 0) throw std::invalid_argument("decide: negative queue length");
  }
  ScheduleSet feasible = truncate(s, q);
  return maximize(u, weight(u, q), feasible, tol, max_iter).schedule;
}

ScheduleVector sample(const FractionalSchedule& d, Rng& rng) {
  if (d.support.empty()) {
    throw std::invalid_argument("sample: empty decomposition");
  }
  double total = 0.0;
  for (const auto& [v, w] : d.support) {
    (void)v;
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("sample: weights do not sum to 1");
  }

  // Prune dust, renormalize, then invert the CDF with one uniform draw.
  double kept = 0.0;
  for (const auto& [v, w] : d.support) {
    (void)v;
    if (w >= 1e-12) kept += w;
  }
  double u01 = rng.uniform();
  double cum = 0.0;
  const ScheduleVector* last = nullptr;
  for (const auto& [v, w] : d.support) {
    if (w < 1e-12) continue;
    last = &v;
    cum += w / kept;
    if (u01 < cum) return v;
  }
  return *last;  // u01 landed in trailing fp dust
}

PolicyDecision decide_and_sample(const UtilityFamily& u, const ScheduleSet& s,
                                 const QueueVector& q, Rng& rng, double tol,
                                 std::size_t max_iter) {
  PolicyDecision out;
  out.sigma_bar = decide(u, s, q, tol, max_iter);
  out.sigma = sample(out.sigma_bar, rng);
  return out;
}

}  // namespace maxweight
