#pragma once

#include <string>
#include <vector>

#include "maxweight/types.hpp"

namespace maxweight {

enum class GKind { kLinear, kLog, kPower, kSqrt };

/**
 * One member of the (alpha,g) utility family: a strictly increasing,
 * strictly concave function on s >= 0.
 *
 *   linear       g(s) = s
 *   log          g(s) = log s            (-inf at 0)
 *   power:<beta> g(s) = s^(1-beta)/(1-beta), beta > 0, beta != 1
 *                                        (-inf at 0 when beta > 1)
 *   sqrt         g(s) = sqrt(s)
 *
 * -inf is a value, not an error: the scheduling objective treats it with
 * the 0 * (-inf) := 0 convention, so queues with zero weight never poison
 * the total.
 */
struct GFunction {
  GKind kind = GKind::kLinear;
  double beta = 0.0;  // only meaningful for kPower

  double value(double s) const;
  double derivative(double s) const;  // +inf at 0 for log/power/sqrt
  bool minus_inf_at_zero() const;

  std::string name() const;
  // Accepts "linear", "log", "sqrt", "power:<beta>".
  static GFunction parse(const std::string& text);

  static GFunction linear() { return {GKind::kLinear, 0.0}; }
  static GFunction log() { return {GKind::kLog, 0.0}; }
  static GFunction sqrt() { return {GKind::kSqrt, 0.0}; }
  static GFunction power(double beta);
};

/** Fairness exponent alpha > 0 plus a g function per queue. */
class UtilityFamily {
 public:
  UtilityFamily(double alpha, std::vector<GFunction> g);
  static UtilityFamily uniform(double alpha, GFunction g, std::size_t dim);

  double alpha() const { return alpha_; }
  std::size_t dim() const { return g_.size(); }
  const std::vector<GFunction>& g() const { return g_; }
  const GFunction& g(std::size_t j) const { return g_[j]; }

 private:
  double alpha_;
  std::vector<GFunction> g_;
};

// Per-queue scheduling weights Q_j^alpha (0^alpha = 0).
RealVector weight(const UtilityFamily& u, const QueueVector& q);

// sum_j g_j(s_j) * w_j with the 0 * (-inf) := 0 convention. Returns -inf
// when some positively weighted coordinate sits at a -inf value of g.
double objective(const UtilityFamily& u, const RealVector& weights,
                 const RealVector& s);

// Same, with weights derived from the queue state.
double objective(const UtilityFamily& u, const QueueVector& q,
                 const RealVector& s);

}  // namespace maxweight
