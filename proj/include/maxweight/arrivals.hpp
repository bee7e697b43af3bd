#pragma once

#include <string>
#include <vector>

#include "maxweight/rng.hpp"
#include "maxweight/types.hpp"

namespace maxweight {

enum class ArrivalKind { kBernoulli, kPoisson, kDeterministic, kBatchEmpirical };

struct BatchPoint {
  double prob = 0.0;
  QueueVector jobs;
};

/**
 * I.i.d. integer arrival vectors with known mean and a documented second
 * moment bound: second_moment_bound() returns K with E[a_j^2] <= K for
 * every queue, which is the variance contract the stability analysis
 * assumes. Components are drawn independently except for the
 * batch-empirical kind, where one uniform selects a whole vector.
 */
class ArrivalModel {
 public:
  static ArrivalModel bernoulli(RealVector p);
  static ArrivalModel poisson(RealVector lambda);
  static ArrivalModel deterministic(QueueVector d);
  static ArrivalModel batch_empirical(std::vector<BatchPoint> points);

  ArrivalKind kind() const { return kind_; }
  std::size_t dim() const { return mean_.size(); }
  const RealVector& mean() const { return mean_; }
  double second_moment_bound() const { return second_moment_; }

  QueueVector sample(Rng& rng) const;

  std::string kind_name() const;

 private:
  ArrivalModel() = default;

  ArrivalKind kind_ = ArrivalKind::kDeterministic;
  RealVector rates_;        // bernoulli p / poisson lambda
  QueueVector fixed_;       // deterministic
  std::vector<BatchPoint> points_;  // batch-empirical
  RealVector mean_;
  double second_moment_ = 0.0;
};

}  // namespace maxweight
