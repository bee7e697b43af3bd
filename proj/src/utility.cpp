#include "maxweight/utility.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace maxweight {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double GFunction::value(double s) const {
  switch (kind) {
    case GKind::kLinear:
      return s;
    case GKind::kLog:
      return s > 0 ? std::log(s) : -kInf;
    case GKind::kPower:
      if (s > 0) return std::pow(s, 1.0 - beta) / (1.0 - beta);
      return beta < 1 ? 0.0 : -kInf;
    case GKind::kSqrt:
      return std::sqrt(s);
  }
  return 0.0;
}

double GFunction::derivative(double s) const {
  switch (kind) {
    case GKind::kLinear:
      return 1.0;
    case GKind::kLog:
      return s > 0 ? 1.0 / s : kInf;
    case GKind::kPower:
      return s > 0 ? std::pow(s, -beta) : kInf;
    case GKind::kSqrt:
      return s > 0 ? 0.5 / std::sqrt(s) : kInf;
  }
  return 0.0;
}

bool GFunction::minus_inf_at_zero() const {
  return kind == GKind::kLog || (kind == GKind::kPower && beta > 1);
}

std::string GFunction::name() const {
  switch (kind) {
    case GKind::kLinear:
      return "linear";
    case GKind::kLog:
      return "log";
    case GKind::kSqrt:
      return "sqrt";
    case GKind::kPower: {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "power:%.17g", beta);
      return buf;
    }
  }
  return "?";
}

GFunction GFunction::parse(const std::string& text) {
  if (text == "linear") return linear();
  if (text == "log") return log();
  if (text == "sqrt") return sqrt();
  if (text.rfind("power:", 0) == 0) {
    std::size_t pos = 0;
    double beta = 0.0;
    try {
      beta = std::stod(text.substr(6), &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad utility name: " + text);
    }
    if (pos != text.size() - 6) {
      throw std::invalid_argument("bad utility name: " + text);
    }
    return power(beta);
  }
  throw std::invalid_argument("unknown utility name: " + text);
}

GFunction GFunction::power(double beta) {
  if (!(beta > 0) || beta == 1.0) {
    throw std::invalid_argument("power utility needs beta > 0, beta != 1");
  }
  return {GKind::kPower, beta};
}

UtilityFamily::UtilityFamily(double alpha, std::vector<GFunction> g)
    : alpha_(alpha), g_(std::move(g)) {
  if (!(alpha > 0)) {
    throw std::invalid_argument("utility family needs alpha > 0");
  }
  if (g_.empty()) {
    throw std::invalid_argument("utility family needs at least one queue");
  }
}

UtilityFamily UtilityFamily::uniform(double alpha, GFunction g,
                                     std::size_t dim) {
  return UtilityFamily(alpha, std::vector<GFunction>(dim, g));
}

RealVector weight(const UtilityFamily& u, const QueueVector& q) {
  if (q.size() != u.dim()) {
    throw std::invalid_argument("weight: queue dimension mismatch");
  }
  RealVector w(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    w[j] = q[j] == 0 ? 0.0 : std::pow(static_cast<double>(q[j]), u.alpha());
  }
  return w;
}

double objective(const UtilityFamily& u, const RealVector& weights,
                 const RealVector& s) {
  if (weights.size() != u.dim() || s.size() != u.dim()) {
    throw std::invalid_argument("objective: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (weights[j] == 0.0) continue;  // 0 * (-inf) := 0
    double g = u.g(j).value(s[j]);
    if (g == -kInf) return -kInf;
    total += weights[j] * g;
  }
  return total;
}

double objective(const UtilityFamily& u, const QueueVector& q,
                 const RealVector& s) {
  return objective(u, weight(u, q), s);
}

}  // namespace maxweight
