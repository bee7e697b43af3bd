#include "maxweight/arrivals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxweight {

ArrivalModel ArrivalModel::bernoulli(RealVector p) {
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("bernoulli arrivals need p in [0,1]");
    }
  }
  ArrivalModel m;
  m.kind_ = ArrivalKind::kBernoulli;
  m.mean_ = p;
  m.second_moment_ = 0.0;
  for (double v : p) m.second_moment_ = std::max(m.second_moment_, v);
  m.rates_ = std::move(p);
  return m;
}

ArrivalModel ArrivalModel::poisson(RealVector lambda) {
  for (double v : lambda) {
    if (!(v >= 0.0)) throw std::invalid_argument("poisson arrivals need rate >= 0");
  }
  ArrivalModel m;
  m.kind_ = ArrivalKind::kPoisson;
  m.mean_ = lambda;
  for (double v : lambda) {
    m.second_moment_ = std::max(m.second_moment_, v + v * v);
  }
  m.rates_ = std::move(lambda);
  return m;
}

ArrivalModel ArrivalModel::deterministic(QueueVector d) {
  for (auto v : d) {
    if (v < 0) throw std::invalid_argument("deterministic arrivals need d >= 0");
  }
  ArrivalModel m;
  m.kind_ = ArrivalKind::kDeterministic;
  m.mean_.assign(d.begin(), d.end());
  for (auto v : d) {
    m.second_moment_ = std::max(m.second_moment_, static_cast<double>(v * v));
  }
  m.fixed_ = std::move(d);
  return m;
}

ArrivalModel ArrivalModel::batch_empirical(std::vector<BatchPoint> points) {
  if (points.empty()) {
    throw std::invalid_argument("batch arrivals need at least one point");
  }
  std::size_t dim = points.front().jobs.size();
  double total = 0.0;
  for (const auto& pt : points) {
    if (pt.jobs.size() != dim) {
      throw std::invalid_argument("batch arrival vectors disagree on dimension");
    }
    if (!(pt.prob >= 0.0)) {
      throw std::invalid_argument("batch arrival probabilities must be >= 0");
    }
    for (auto v : pt.jobs) {
      if (v < 0) throw std::invalid_argument("batch arrivals need jobs >= 0");
    }
    total += pt.prob;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("batch arrival probabilities must sum to 1");
  }
  ArrivalModel m;
  m.kind_ = ArrivalKind::kBatchEmpirical;
  m.mean_.assign(dim, 0.0);
  RealVector second(dim, 0.0);
  for (const auto& pt : points) {
    for (std::size_t j = 0; j < dim; ++j) {
      m.mean_[j] += pt.prob * pt.jobs[j];
      second[j] += pt.prob * pt.jobs[j] * pt.jobs[j];
    }
  }
  m.second_moment_ = second.empty() ? 0.0 : *std::max_element(second.begin(), second.end());
  m.points_ = std::move(points);
  return m;
}

QueueVector ArrivalModel::sample(Rng& rng) const {
  switch (kind_) {
    case ArrivalKind::kBernoulli: {
      QueueVector a(rates_.size());
      for (std::size_t j = 0; j < rates_.size(); ++j) {
        a[j] = rng.uniform() < rates_[j] ? 1 : 0;
      }
      return a;
    }
    case ArrivalKind::kPoisson: {
      // Knuth's product-of-uniforms method; exact and portable for the
      // modest rates used here.
      QueueVector a(rates_.size());
      for (std::size_t j = 0; j < rates_.size(); ++j) {
        if (rates_[j] == 0.0) {
          a[j] = 0;
          continue;
        }
        double limit = std::exp(-rates_[j]);
        double prod = 1.0;
        std::int64_t k = -1;
        do {
          prod *= rng.uniform();
          ++k;
        } while (prod > limit);
        a[j] = k;
      }
      return a;
    }
    case ArrivalKind::kDeterministic:
      return fixed_;
    case ArrivalKind::kBatchEmpirical: {
      double u = rng.uniform();
      double cum = 0.0;
      for (const auto& pt : points_) {
        cum += pt.prob;
        if (u < cum) return pt.jobs;
      }
      return points_.back().jobs;
    }
  }
  return {};
}

std::string ArrivalModel::kind_name() const {
  switch (kind_) {
    case ArrivalKind::kBernoulli:
      return "bernoulli";
    case ArrivalKind::kPoisson:
      return "poisson";
    case ArrivalKind::kDeterministic:
      return "deterministic";
    case ArrivalKind::kBatchEmpirical:
      return "batch";
  }
  return "?";
}

}  // namespace maxweight
