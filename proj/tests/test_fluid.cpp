#include "maxweight/fluid.hpp"

#include <stdexcept>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "maxweight/capacity.hpp"

using namespace maxweight;

namespace {

ScheduleSet unit_pair() { return ScheduleSet({{0, 0}, {1, 0}, {0, 1}}); }

double l1(const RealVector& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace

TEST_CASE("sigma_star picks the heavier queue under LINEAR weights") {
  UtilityFamily u(1.0, {GFunction::linear(), GFunction::linear()});
  FractionalSchedule s = sigma_star(u, unit_pair(), {0.7, 0.2});
  CHECK(std::abs(s.point[0] - 1.0) <= 1e-8);
  CHECK(std::abs(s.point[1]) <= 1e-8);
}

TEST_CASE("sigma_star proportional-fair split at q = (3, 1)") {
  UtilityFamily u(1.0, {GFunction::log(), GFunction::log()});
  FractionalSchedule s = sigma_star(u, unit_pair(), {3.0, 1.0}, 1e-10);
  CHECK(std::abs(s.point[0] - 0.75) <= 1e-5);
  CHECK(std::abs(s.point[1] - 0.25) <= 1e-5);
}

TEST_CASE("sigma_star at the origin is the zero schedule") {
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 2);
  FractionalSchedule s = sigma_star(u, unit_pair(), {0.0, 0.0});
  CHECK(s.point[0] == 0.0);
  CHECK(s.point[1] == 0.0);
}

TEST_CASE("sigma_star rejects bad states") {
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 2);
  CHECK_THROWS_AS(sigma_star(u, unit_pair(), {-0.1, 0.2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sigma_star(u, unit_pair(), {0.1}), std::invalid_argument);
}

TEST_CASE("lyapunov reference values") {
  UtilityFamily lin = UtilityFamily::uniform(1.0, GFunction::linear(), 2);
  CHECK(lyapunov(lin, {0.4, 0.4}, {1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(lyapunov(lin, {0.4, 0.4}, {1.0, 0.0}) == doctest::Approx(0.5));

  // g = log: g'(rho) = 1/rho, so L = sum q^2 / (2 rho)
  UtilityFamily lg = UtilityFamily::uniform(1.0, GFunction::log(), 2);
  CHECK(lyapunov(lg, {0.5, 0.5}, {1.0, 1.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(lyapunov(lg, {0.0, 0.5}, {1.0, 1.0}), std::domain_error);
}

TEST_CASE("certificate worked example: two queues, LINEAR, alpha = 1") {
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 2);
  RealVector abar = {0.4, 0.4};
  double eps = slack(abar, unit_pair()).slack;
  CHECK(std::abs(eps - 0.25) <= 1e-9);

  LyapunovCertificate cert = certificate(u, unit_pair(), abar, eps);
  CHECK(std::abs(cert.gamma - std::sqrt(2.0) / 2.0) <= 1e-12);
  CHECK(cert.K_L == 0.5);
  CHECK(std::abs(cert.T - 8.0) <= 1e-6);
  CHECK(std::abs(cert.rho[0] - 0.5) <= 1e-12);

  // halving epsilon doubles T for this family
  LyapunovCertificate half = certificate(u, unit_pair(), abar, eps / 2.0);
  CHECK(std::abs(half.T - 16.0) <= 1e-6);
}

TEST_CASE("certificate gamma scales with the number of queues") {
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 4);
  ScheduleSet s({{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0},
                 {0, 0, 0, 1}});
  LyapunovCertificate cert = certificate(u, s, {0.1, 0.1, 0.1, 0.1}, 0.5);
  CHECK(std::abs(cert.gamma - std::sqrt(2.0) / 4.0) <= 1e-12);
}

TEST_CASE("certificate validation") {
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 2);
  CHECK_THROWS_AS(certificate(u, unit_pair(), {0.4, 0.4}, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(certificate(u, unit_pair(), {0.4, 0.4}, -0.1),
                  std::domain_error);
  // (1 + 0.6) * 0.4 * 2 = 1.28 > 1: rho escapes the hull
  CHECK_THROWS_AS(certificate(u, unit_pair(), {0.4, 0.4}, 0.6),
                  std::domain_error);
}

TEST_CASE("single queue drains linearly and is absorbed near t = 2") {
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 1);
  ScheduleSet s({{0}, {1}});
  double h = 1e-3;
  FluidTrajectory tr = integrate({1.0}, {0.5}, u, s, h, 2.5);
  CHECK(tr.absorbed);
  CHECK(tr.absorbed_at >= 2.0 - 1e-9);
  CHECK(tr.absorbed_at <= 2.0 + 2.0 * h);
  // constant drift, so Euler is exact along the way
  for (const FluidStep& st : tr.steps) {
    if (st.t > 1.9) break;
    CHECK(std::abs(st.q[0] - (1.0 - 0.5 * st.t)) <= 1e-9);
  }
  CHECK(tr.steps.back().q[0] == 0.0);
  CHECK(std::isnan(tr.steps.front().lyapunov));
}

TEST_CASE("symmetric LOG pair empties together near t = 2") {
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::log(), 2);
  double h = 1e-3;
  FluidTrajectory tr =
      integrate({0.5, 0.5}, {0.25, 0.25}, u, unit_pair(), h, 3.0);
  CHECK(tr.absorbed);
  CHECK(std::abs(tr.absorbed_at - 2.0) <= 10.0 * h);
  for (const FluidStep& st : tr.steps) {
    CHECK(std::abs(st.q[0] - st.q[1]) <= 1e-9);
  }
}

TEST_CASE("an empty coordinate stays frozen at zero") {
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 2);
  FluidTrajectory tr = integrate({1.0, 0.0}, {0.3, 0.0}, u, unit_pair(),
                                 1e-3, 2.0);
  for (const FluidStep& st : tr.steps) CHECK(st.q[1] == 0.0);
  CHECK(tr.absorbed);
  // drain rate 0.7 from 1.0
  CHECK(std::abs(tr.absorbed_at - 1.0 / 0.7) <= 5e-3);
}

TEST_CASE("absorbed trajectory ends at its absorption step") {
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 1);
  ScheduleSet s({{0}, {1}});
  FluidTrajectory tr = integrate({0.1}, {0.0}, u, s, 1e-2, 50.0);
  CHECK(tr.absorbed);
  CHECK(tr.steps.back().t == doctest::Approx(tr.absorbed_at));
  CHECK(l1(tr.steps.back().q) == 0.0);
  // the remaining 49+ seconds are skipped, not recorded as zeros
  CHECK(tr.steps.size() < 20);
}

// Discrete Lyapunov drift. With rho = (1 + eps) abar interior, each Euler
// step must obey
//   (L(q_{k+1}) - L(q_k)) / h <= -eps * sum_j abar_j g'_j(rho_j) q_j^alpha + err
// where err covers the second-order Taylor term (O(h^min(alpha,1))) and
// the solver's duality gap. Checked with a factor-2 cushion on err.
static void check_drift(const UtilityFamily& u, const ScheduleSet& s,
                        const RealVector& abar, const RealVector& q0,
                        double eps) {
  double h = 1e-3;
  RealVector rho(abar.size());
  for (std::size_t j = 0; j < abar.size(); ++j) rho[j] = (1.0 + eps) * abar[j];
  FluidTrajectory tr = integrate(q0, abar, u, s, h, 1.0, 1e-10, rho);

  double alpha = u.alpha();
  double cushion = 1e-6;
  for (std::size_t j = 0; j < abar.size(); ++j) {
    double dmax = abar[j] + 4.0;  // vertex entries in these scenarios are <= 4
    cushion += 2.0 * std::pow(h, std::min(alpha, 1.0)) * u.g(j).derivative(rho[j]) *
               (1.0 + dmax * dmax + std::pow(dmax, 1.0 + alpha));
  }
  for (std::size_t k = 0; k + 1 < tr.steps.size(); ++k) {
    const RealVector& q = tr.steps[k].q;
    double drop =
        (tr.steps[k + 1].lyapunov - tr.steps[k].lyapunov) / h;
    double bound = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      bound -= eps * abar[j] * u.g(j).derivative(rho[j]) * std::pow(q[j], alpha);
    }
    CHECK(drop <= bound + cushion);
  }
}

TEST_CASE("drift inequality holds along Euler trajectories") {
  ScheduleSet pair = unit_pair();
  RealVector abar = {0.4, 0.4};
  double eps = slack(abar, pair).slack / 2.0;

  SUBCASE("LINEAR alpha 1") {
    check_drift(UtilityFamily::uniform(1.0, GFunction::linear(), 2), pair,
                abar, {0.7, 0.3}, eps);
  }
  SUBCASE("LOG alpha 1") {
    check_drift(UtilityFamily::uniform(1.0, GFunction::log(), 2), pair, abar,
                {0.6, 0.4}, eps);
  }
  SUBCASE("SQRT alpha 0.5") {
    check_drift(UtilityFamily::uniform(0.5, GFunction::sqrt(), 2), pair, abar,
                {0.5, 0.5}, eps);
  }
  SUBCASE("POWER:2 alpha 2") {
    check_drift(UtilityFamily::uniform(2.0, GFunction::power(2.0), 2), pair,
                abar, {0.8, 0.2}, eps);
  }
}

TEST_CASE("Lyapunov value is nonincreasing along a drain (2h tolerance)") {
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::log(), 2);
  RealVector abar = {0.3, 0.35};
  double eps = slack(abar, unit_pair()).slack / 2.0;
  RealVector rho = {(1.0 + eps) * 0.3, (1.0 + eps) * 0.35};
  FluidTrajectory tr =
      integrate({0.25, 0.75}, abar, u, unit_pair(), 1e-3, 6.0, 1e-8, rho);
  CHECK(tr.absorbed);
  for (std::size_t k = 0; k + 1 < tr.steps.size(); ++k) {
    CHECK(tr.steps[k + 1].lyapunov <= tr.steps[k].lyapunov + 2e-3);
  }
}

TEST_CASE("compare_scaled: zero arrivals drain at the fluid rate") {
  CompareInputs in{UtilityFamily::uniform(1.0, GFunction::linear(), 1),
                   ScheduleSet({{0}, {1}}),
                   ArrivalModel::deterministic({0}),
                   {1.0}};
  std::vector<ScaledComparison> out = compare_scaled(in, {10, 40}, 1.2, 7);
  REQUIRE(out.size() == 2);
  CHECK(out[0].c == 10);
  // Q(floor(c t))/c lags 1 - t by at most 1/c; Euler is exact here
  CHECK(out[0].sup_distance <= 1.5 / 10.0);
  CHECK(out[1].sup_distance <= 1.5 / 40.0);
  CHECK(out[1].sup_distance < out[0].sup_distance);
}

TEST_CASE("scale_initial_state largest-remainder rounding") {
  QueueVector q = scale_initial_state({1.0, 1.0}, 5);
  CHECK(q == QueueVector{3, 2});  // tie broken toward the lower index
  CHECK(scale_initial_state({0.2, 0.8}, 10) == QueueVector{2, 8});
  CHECK(scale_initial_state({1.0, 1.0, 1.0}, 7) == QueueVector{3, 2, 2});
  CHECK_THROWS_AS(scale_initial_state({0.0, 0.0}, 5), std::invalid_argument);
  CHECK_THROWS_AS(scale_initial_state({-1.0, 2.0}, 5), std::invalid_argument);
}

TEST_CASE("scale_initial_state preserves the total and tracks the shape") {
  RealVector shape = {0.13, 0.42, 0.05, 0.4};
  for (std::int64_t c : {1, 17, 100, 999}) {
    QueueVector q = scale_initial_state(shape, c);
    std::int64_t total = 0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      total += q[j];
      CHECK(std::abs(static_cast<double>(q[j]) - static_cast<double>(c) * shape[j]) < 1.0);
    }
    CHECK(total == c);
  }
}

TEST_CASE("fluid CSV layout") {
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 1);
  ScheduleSet s({{0}, {1}});
  FluidTrajectory tr =
      integrate({1.0}, {0.5}, u, s, 0.5, 1.0, 1e-8, RealVector{0.75});
  std::ostringstream os;
  tr.write_csv(os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,q_1,L");
  std::getline(is, line);
  CHECK(line == "0,1,0.5");  // L = q^2/2 under LINEAR g
}
