#include "maxweight/simulator.hpp"

#include <stdexcept>
#include <sstream>

#include "doctest.h"

using namespace maxweight;

namespace {

ScheduleSet two_queue_units() {
  return ScheduleSet({{0, 0}, {1, 0}, {0, 1}});
}

UtilityFamily lin2() {
  return UtilityFamily::uniform(1.0, GFunction::linear(), 2);
}

}  // namespace

TEST_CASE("zero arrivals drain at one job per slot") {
  ArrivalModel none = ArrivalModel::deterministic({0, 0});
  SimTrace tr = run(lin2(), two_queue_units(), none, {3, 3}, 10, 5);
  // one unit of work leaves per slot while anything is queued
  for (std::int64_t t = 0; t <= 6; ++t) {
    CHECK(l1_norm(tr.records[t].queue) == 6 - t);
  }
  for (std::int64_t t = 6; t <= 10; ++t) {
    CHECK(l1_norm(tr.records[t].queue) == 0);
  }
  CHECK(tr.summary.service_total == QueueVector{3, 3});
  CHECK(tr.summary.arrival_total == QueueVector{0, 0});
}

TEST_CASE("deterministic unit arrivals exactly cancel service") {
  ScheduleSet s({{0}, {1}});
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 1);
  ArrivalModel ones = ArrivalModel::deterministic({1});
  SimTrace tr = run(u, s, ones, {2}, 50, 3);
  for (const auto& rec : tr.records) {
    CHECK(rec.queue == QueueVector{2});
  }
  CHECK(tr.summary.time_avg_l1 == 2.0);
  CHECK(tr.summary.max_l1 == 2);
}

TEST_CASE("hand-checked summary on a tiny run") {
  // Start empty with d = 1: the queue is refilled to exactly 1 each slot
  // and the policy serves it the following slot.
  ScheduleSet s({{0}, {1}});
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 1);
  ArrivalModel ones = ArrivalModel::deterministic({1});
  SimTrace tr = run(u, s, ones, {0}, 4, 0);
  CHECK(tr.summary.time_avg_l1 == 1.0);
  CHECK(tr.summary.max_l1 == 1);
  CHECK(tr.summary.fraction_below_kappa == 1.0);  // default kappa = 10
  CHECK(tr.summary.kappa == 10.0);
  CHECK(tr.summary.service_total == QueueVector{3});
  CHECK(tr.summary.arrival_total == QueueVector{4});
  for (double q : tr.summary.quarter_avg_l1) CHECK(q == 1.0);
}

TEST_CASE("flow conservation at every recorded slot") {
  ArrivalModel arr = ArrivalModel::bernoulli({0.4, 0.3});
  SimTrace tr = run(lin2(), two_queue_units(), arr, {2, 1}, 200, 99);
  QueueVector cum_a = {0, 0}, cum_s = {0, 0};
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    const StepRecord& rec = tr.records[i];
    for (std::size_t j = 0; j < 2; ++j) {
      cum_a[j] += rec.arrivals[j];
      cum_s[j] += rec.sigma[j];
      CHECK(rec.queue[j] == tr.summary.q0[j] + cum_a[j] - cum_s[j]);
      CHECK(rec.queue[j] >= 0);
    }
  }
  CHECK(cum_a == tr.summary.arrival_total);
  CHECK(cum_s == tr.summary.service_total);
}

TEST_CASE("same seed gives a bit-identical trace, different seed does not") {
  ArrivalModel arr = ArrivalModel::bernoulli({0.5, 0.5});
  SimTrace a = run(lin2(), two_queue_units(), arr, {0, 0}, 100, 42);
  SimTrace b = run(lin2(), two_queue_units(), arr, {0, 0}, 100, 42);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].queue == b.records[i].queue);
    CHECK(a.records[i].sigma == b.records[i].sigma);
    CHECK(a.records[i].sigma_bar == b.records[i].sigma_bar);
    CHECK(a.records[i].arrivals == b.records[i].arrivals);
  }

  SimTrace c = run(lin2(), two_queue_units(), arr, {0, 0}, 100, 43);
  bool same = true;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    same = same && a.records[i].queue == c.records[i].queue;
  }
  CHECK_FALSE(same);
}

TEST_CASE("horizon zero keeps only the initial state") {
  ArrivalModel arr = ArrivalModel::bernoulli({0.5, 0.5});
  SimTrace tr = run(lin2(), two_queue_units(), arr, {4, 1}, 0, 7);
  REQUIRE(tr.records.size() == 1);
  CHECK(tr.records[0].t == 0);
  CHECK(tr.records[0].queue == QueueVector{4, 1});
  CHECK(tr.summary.max_l1 == 5);
  CHECK(tr.summary.time_avg_l1 == 5.0);
}

TEST_CASE("record_every thins the trace but keeps t=0 and the end") {
  ArrivalModel arr = ArrivalModel::bernoulli({0.3, 0.3});
  SimOptions opt;
  opt.record_every = 4;
  SimTrace tr = run(lin2(), two_queue_units(), arr, {0, 0}, 10, 1, opt);
  std::vector<std::int64_t> ts;
  for (const auto& rec : tr.records) ts.push_back(rec.t);
  CHECK(ts == std::vector<std::int64_t>{0, 4, 8, 10});

  opt.record_every = 0;
  SimTrace only0 = run(lin2(), two_queue_units(), arr, {0, 0}, 10, 1, opt);
  REQUIRE(only0.records.size() == 1);
  CHECK(only0.records[0].t == 0);
  // summary still covers the whole horizon
  CHECK(only0.summary.horizon == 10);
  CHECK(only0.summary.arrival_total == tr.summary.arrival_total);
}

TEST_CASE("thinning does not change the dynamics") {
  ArrivalModel arr = ArrivalModel::bernoulli({0.4, 0.2});
  SimOptions every;
  every.record_every = 1;
  SimOptions sparse;
  sparse.record_every = 7;
  SimTrace full = run(lin2(), two_queue_units(), arr, {1, 1}, 60, 11, every);
  SimTrace thin = run(lin2(), two_queue_units(), arr, {1, 1}, 60, 11, sparse);
  for (const auto& rec : thin.records) {
    CHECK(rec.queue == full.records[rec.t].queue);
  }
  CHECK(full.summary.time_avg_l1 == thin.summary.time_avg_l1);
}

TEST_CASE("kappa override feeds the recurrence fraction") {
  ScheduleSet s({{0}, {1}});
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 1);
  ArrivalModel ones = ArrivalModel::deterministic({1});
  SimOptions opt;
  opt.kappa = 1.5;
  SimTrace tr = run(u, s, ones, {4}, 10, 0, opt);
  CHECK(tr.summary.kappa == 1.5);
  // queue stays at 4, never below 1.5
  CHECK(tr.summary.fraction_below_kappa == 0.0);
}

TEST_CASE("input validation") {
  ArrivalModel arr = ArrivalModel::bernoulli({0.5, 0.5});
  CHECK_THROWS_AS(run(lin2(), two_queue_units(), arr, {0, 0}, -1, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(run(lin2(), two_queue_units(), arr, {0, -1}, 5, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(run(lin2(), two_queue_units(), arr, {0}, 5, 0),
                  std::invalid_argument);
  ArrivalModel bad_dim = ArrivalModel::bernoulli({0.5});
  CHECK_THROWS_AS(run(lin2(), two_queue_units(), bad_dim, {0, 0}, 5, 0),
                  std::invalid_argument);
}

TEST_CASE("bernoulli stability smoke at half load") {
  ScheduleSet s({{0}, {1}});
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 1);
  ArrivalModel arr = ArrivalModel::bernoulli({0.5});
  SimOptions opt;
  opt.kappa = 5.0;
  opt.record_every = 0;
  SimTrace tr = run(u, s, arr, {0}, 100000, 12345, opt);
  CHECK(tr.summary.fraction_below_kappa > 0.0);
  // no growth trend across quarters
  CHECK(tr.summary.quarter_avg_l1[3] <=
        2.0 * tr.summary.quarter_avg_l1[1] + 1.0);
  CHECK(tr.summary.time_avg_l1 < 20.0);
}

TEST_CASE("csv layout is stable") {
  ScheduleSet s({{0}, {1}});
  UtilityFamily u = UtilityFamily::uniform(1.0, GFunction::linear(), 1);
  ArrivalModel none = ArrivalModel::deterministic({0});
  SimTrace tr = run(u, s, none, {1}, 2, 0);
  std::ostringstream out;
  tr.write_csv(out);
  CHECK(out.str() ==
        "t,Q_1,sigma_1,sbar_1\n"
        "0,1,0,0\n"
        "1,0,1,1\n"
        "2,0,0,0\n");
}
