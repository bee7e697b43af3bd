#include "maxweight/schedule_set.hpp"

#include <stdexcept>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"

using namespace maxweight;

TEST_CASE("construction sorts, dedupes and fixes the dimension") {
  ScheduleSet s({{1, 1}, {0, 0}, {2, 0}, {1, 1}, {0, 2}});
  CHECK(s.dim() == 2);
  CHECK(s.size() == 4);
  CHECK(s.vertex(0) == ScheduleVector{0, 0});
  CHECK(s.vertex(1) == ScheduleVector{0, 2});
  CHECK(s.vertex(2) == ScheduleVector{1, 1});
  CHECK(s.vertex(3) == ScheduleVector{2, 0});
  CHECK(s.contains({1, 1}));
  CHECK_FALSE(s.contains({2, 2}));
}

TEST_CASE("mismatched vertex dimensions are rejected") {
  CHECK_THROWS_AS(ScheduleSet({{1, 0}, {1, 0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(ScheduleSet(std::vector<ScheduleVector>{}),
                  std::invalid_argument);
}

TEST_CASE("validate: unit vectors plus zero pass") {
  ScheduleSet s({{0, 0}, {1, 0}, {0, 1}});
  ValidationReport rep = validate(s);
  CHECK(rep.ok);
  CHECK(rep.errors.empty());
}

TEST_CASE("validate: missing zero vector") {
  ScheduleSet s({{1, 0}, {0, 1}});
  ValidationReport rep = validate(s);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.errors.size() == 1);
  CHECK(rep.errors[0].find("zero") != std::string::npos);
}

TEST_CASE("validate: collinear vertices are rank deficient") {
  ScheduleSet s({{0, 0}, {1, 1}, {2, 2}});
  ValidationReport rep = validate(s);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.errors.size() == 1);
  CHECK(rep.errors[0].find("rank") != std::string::npos);
}

TEST_CASE("validate reports every failure, not just the first") {
  // no zero vector, a negative entry, and rank 1 in dim 2
  ScheduleSet s({{1, -1}, {2, -2}});
  ValidationReport rep = validate(s);
  CHECK_FALSE(rep.ok);
  CHECK(rep.errors.size() == 3);
}

TEST_CASE("truncate: componentwise minimum with dedup") {
  ScheduleSet s({{0, 0}, {2, 0}, {0, 2}, {1, 1}});
  ScheduleSet t = truncate(s, {1, 5});
  CHECK(t == ScheduleSet({{0, 0}, {1, 0}, {0, 2}, {1, 1}}));

  CHECK(truncate(s, {0, 0}) == ScheduleSet({{0, 0}}));

  // dominating queue leaves the set untouched
  CHECK(truncate(s, {2, 2}) == s);

  CHECK_THROWS_AS(truncate(s, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("truncate properties on random sets") {
  std::mt19937_64 rng(20240811);
  std::uniform_int_distribution<int> entry(0, 4);
  std::uniform_int_distribution<int> qlen(0, 5);
  std::uniform_int_distribution<std::size_t> dim_pick(1, 4);
  std::uniform_int_distribution<std::size_t> count_pick(1, 6);

  for (int round = 0; round < 200; ++round) {
    const std::size_t dim = dim_pick(rng);
    std::vector<ScheduleVector> verts(count_pick(rng));
    for (auto& v : verts) {
      v.resize(dim);
      for (auto& x : v) x = entry(rng);
    }
    ScheduleSet s(verts);
    QueueVector q(dim);
    for (auto& x : q) x = qlen(rng);

    ScheduleSet once = truncate(s, q);
    CHECK(truncate(once, q) == once);  // idempotent
    for (std::size_t i = 0; i < once.size(); ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        CHECK(once.vertex(i)[j] <= q[j]);
      }
    }
  }
}

TEST_CASE("text format: comments, blank lines, errors") {
  std::istringstream in(
      "# schedule set for a 2x1 system\n"
      "0 0\n"
      "\n"
      "2 0\n"
      "0 2\n");
  ScheduleSet s = parse_schedule_set(in);
  CHECK(s.dim() == 2);
  CHECK(s.size() == 3);

  std::istringstream bad("0 0\n1 -2\n");
  CHECK_THROWS_WITH_AS(parse_schedule_set(bad),
                       doctest::Contains("line 2"), std::invalid_argument);

  std::istringstream junk("0 0\n1 x\n");
  CHECK_THROWS_AS(parse_schedule_set(junk), std::invalid_argument);

  std::istringstream empty("# nothing\n\n");
  CHECK_THROWS_AS(parse_schedule_set(empty), std::invalid_argument);
}

TEST_CASE("load_schedule_set reads a file") {
  const char* path = "schedule_set_test.tmp";
  {
    std::ofstream out(path);
    out << "# three vertices\n0 0\n1 0\n0 1\n";
  }
  ScheduleSet s = load_schedule_set(path);
  CHECK(s == ScheduleSet({{0, 0}, {1, 0}, {0, 1}}));
  std::remove(path);

  CHECK_THROWS_AS(load_schedule_set("does_not_exist.txt"),
                  std::invalid_argument);
}
