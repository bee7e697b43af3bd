#include "maxweight/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "maxweight/capacity.hpp"
#include "maxweight/simulator.hpp"

namespace maxweight {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

FractionalSchedule sigma_star(const UtilityFamily& u, const ScheduleSet& s,
                              const RealVector& q, double tol) {
  if (q.size() != s.dim()) {
    throw std::invalid_argument("sigma_star: dimension mismatch");
  }
  RealVector w(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j] < 0) throw std::invalid_argument("sigma_star: negative state");
    w[j] = q[j] == 0.0 ? 0.0 : std::pow(q[j], u.alpha());
  }
  return maximize(u, w, s, tol).schedule;
}

double lyapunov(const UtilityFamily& u, const RealVector& rho,
                const RealVector& q) {
  if (rho.size() != u.dim() || q.size() != u.dim()) {
    throw std::invalid_argument("lyapunov: dimension mismatch");
  }
  const double a1 = 1.0 + u.alpha();
  double total = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    double gp = u.g(j).derivative(rho[j]);
    if (!std::isfinite(gp)) {
      throw std::domain_error("lyapunov: g' undefined at rho_j = 0");
    }
    total += gp * std::pow(q[j], a1) / a1;
  }
  return total;
}

LyapunovCertificate certificate(const UtilityFamily& u, const ScheduleSet& s,
                                const RealVector& abar, double capacity_slack) {
  if (abar.size() != u.dim() || u.dim() != s.dim()) {
    throw std::invalid_argument("certificate: dimension mismatch");
  }
  if (!(capacity_slack > 0.0)) {
    throw std::domain_error("certificate: no slack (epsilon must be > 0)");
  }
  LyapunovCertificate cert;
  cert.epsilon = capacity_slack;
  cert.rho.resize(abar.size());
  for (std::size_t j = 0; j < abar.size(); ++j) {
    cert.rho[j] = (1.0 + capacity_slack) * abar[j];
  }
  // rho must still be inside the hull; slack() also enforces abar > 0.
  if (slack(cert.rho, s).slack < -1e-9) {
    throw std::domain_error("certificate: epsilon exceeds the capacity slack");
  }
  const double alpha = u.alpha();
  const double a1 = 1.0 + alpha;
  cert.gamma = std::pow(a1, 1.0 / a1) / static_cast<double>(u.dim());
  double kl = 0.0;
  for (std::size_t j = 0; j < abar.size(); ++j) {
    kl = std::max(kl, u.g(j).derivative(cert.rho[j]) / a1);
  }
  cert.K_L = kl;
  cert.T = a1 * std::pow(kl, 1.0 / a1) /
           (capacity_slack * std::pow(cert.gamma, alpha));
  return cert;
}

FluidTrajectory integrate(const RealVector& q0, const RealVector& abar,
                          const UtilityFamily& u, const ScheduleSet& s,
                          double h, double t_end, double tol,
                          const std::optional<RealVector>& rho) {
  const std::size_t dim = s.dim();
  if (q0.size() != dim || abar.size() != dim || u.dim() != dim) {
    throw std::invalid_argument("integrate: dimension mismatch");
  }
  if (!(h > 0.0)) throw std::invalid_argument("integrate: step h must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("integrate: t_end must be >= 0");
  for (double v : q0) {
    if (v < 0) throw std::invalid_argument("integrate: negative initial state");
  }

  auto lyap = [&](const RealVector& q) {
    return rho ? lyapunov(u, *rho, q) : kNan;
  };

  FluidTrajectory out;
  RealVector q = q0;
  const std::int64_t n_steps = static_cast<std::int64_t>(std::ceil(t_end / h - 1e-12));
  out.steps.push_back({0.0, q, lyap(q)});

  for (std::int64_t k = 0; k < n_steps; ++k) {
    if (l1_norm(q) == 0.0) {
      out.absorbed = true;
      out.absorbed_at = static_cast<double>(k) * h;
      return out;
    }
    FractionalSchedule sol = sigma_star(u, s, q, tol);
    for (std::size_t j = 0; j < dim; ++j) {
      if (q[j] == 0.0) continue;  // frozen at the boundary
      q[j] = std::max(q[j] + h * (abar[j] - sol.point[j]), 0.0);
    }
    out.steps.push_back({static_cast<double>(k + 1) * h, q, lyap(q)});
  }
  if (l1_norm(q) == 0.0) {
    out.absorbed = true;
    out.absorbed_at = static_cast<double>(n_steps) * h;
  }
  return out;
}

QueueVector scale_initial_state(const RealVector& shape, std::int64_t c) {
  if (shape.empty()) throw std::invalid_argument("scale_initial_state: empty shape");
  double total = 0.0;
  for (double v : shape) {
    if (v < 0) throw std::invalid_argument("scale_initial_state: negative shape");
    total += v;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("scale_initial_state: shape must have positive mass");
  }
  const std::size_t dim = shape.size();
  QueueVector q(dim, 0);
  std::vector<std::pair<double, std::size_t>> rem(dim);
  std::int64_t assigned = 0;
  for (std::size_t j = 0; j < dim; ++j) {
    double exact = static_cast<double>(c) * shape[j] / total;
    q[j] = static_cast<std::int64_t>(std::floor(exact));
    assigned += q[j];
    rem[j] = {exact - std::floor(exact), j};
  }
  // Hand out the remainder by largest fractional part, index order on ties.
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::int64_t k = 0; k < c - assigned; ++k) {
    q[rem[static_cast<std::size_t>(k) % dim].second] += 1;
  }
  return q;
}

std::vector<ScaledComparison> compare_scaled(const CompareInputs& in,
                                             const std::vector<std::int64_t>& c_list,
                                             double t_end, std::uint64_t seed) {
  if (!(t_end > 0.0)) throw std::invalid_argument("compare_scaled: t_end must be > 0");
  std::vector<ScaledComparison> out;
  out.reserve(c_list.size());
  const RealVector& abar = in.arrivals.mean();

  for (std::size_t ci = 0; ci < c_list.size(); ++ci) {
    std::int64_t c = c_list[ci];
    if (c <= 0) throw std::invalid_argument("compare_scaled: c must be positive");
    QueueVector Q0 = scale_initial_state(in.q0_shape, c);
    RealVector q0(Q0.size());
    for (std::size_t j = 0; j < Q0.size(); ++j) {
      q0[j] = static_cast<double>(Q0[j]) / static_cast<double>(c);
    }

    FluidTrajectory fl =
        integrate(q0, abar, in.u, in.s, in.h, t_end, in.tol, std::nullopt);

    std::int64_t horizon =
        static_cast<std::int64_t>(std::ceil(static_cast<double>(c) * t_end));
    SimOptions opt;
    opt.tol = in.tol;
    opt.record_every = 1;
    SimTrace trace = run(in.u, in.s, in.arrivals, Q0, horizon,
                         derive_seed(seed, 100 + ci), opt);

    // Walk the fluid step grid; past absorption the fluid state is zero.
    double sup = 0.0;
    RealVector zero(Q0.size(), 0.0);
    std::int64_t n_steps = static_cast<std::int64_t>(std::ceil(t_end / in.h - 1e-12));
    RealVector scaled(Q0.size());
    for (std::int64_t k = 0; k <= n_steps; ++k) {
      double t = static_cast<double>(k) * in.h;
      if (t > t_end) t = t_end;
      const RealVector& q =
          k < static_cast<std::int64_t>(fl.steps.size()) ? fl.steps[static_cast<std::size_t>(k)].q : zero;
      std::int64_t slot = std::min(
          static_cast<std::int64_t>(std::floor(static_cast<double>(c) * t)), horizon);
      const QueueVector& Q = trace.records[static_cast<std::size_t>(slot)].queue;
      for (std::size_t j = 0; j < Q.size(); ++j) {
        scaled[j] = static_cast<double>(Q[j]) / static_cast<double>(c);
      }
      sup = std::max(sup, l1_distance(scaled, q));
    }
    out.push_back({c, sup});
  }
  return out;
}

void FluidTrajectory::write_csv(std::ostream& out) const {
  const std::size_t dim = steps.empty() ? 0 : steps.front().q.size();
  out << "t";
  for (std::size_t j = 1; j <= dim; ++j) out << ",q_" << j;
  out << ",L\n";
  char buf[64];
  for (const auto& st : steps) {
    std::snprintf(buf, sizeof(buf), "%.17g", st.t);
    out << buf;
    for (double v : st.q) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << "," << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", st.lyapunov);
    out << "," << buf << "\n";
  }
}

}  // namespace maxweight
