#include "maxweight/schedule_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace maxweight {

ScheduleSet::ScheduleSet(std::vector<ScheduleVector> vertices) {
  if (vertices.empty()) {
    throw std::invalid_argument("schedule set needs at least one vertex");
  }
  dim_ = vertices.front().size();
  for (const auto& v : vertices) {
    if (v.size() != dim_) {
      throw std::invalid_argument("schedule set vertices disagree on dimension");
    }
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  vertices_ = std::move(vertices);
}

bool ScheduleSet::contains(const ScheduleVector& v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

namespace {

// Real rank of the vertex matrix by Gaussian elimination with partial
// pivoting. Entries are small integers, so a fixed absolute pivot floor
// is enough.
std::size_t real_rank(const std::vector<ScheduleVector>& rows, std::size_t dim) {
  std::vector<std::vector<double>> m;
  m.reserve(rows.size());
  for (const auto& r : rows) {
    m.emplace_back(r.begin(), r.end());
  }
  const double tol = 1e-9;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < dim && rank < m.size(); ++col) {
    std::size_t pivot = rank;
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      if (std::fabs(m[i][col]) > std::fabs(m[pivot][col])) pivot = i;
    }
    if (std::fabs(m[pivot][col]) <= tol) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      double f = m[i][col] / m[rank][col];
      for (std::size_t k = col; k < dim; ++k) m[i][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

ValidationReport validate(const ScheduleSet& s) {
  ValidationReport report;
  ScheduleVector zero(s.dim(), 0);
  if (!s.contains(zero)) {
    report.ok = false;
    report.errors.push_back("missing-zero-vector: idling schedule not present");
  }
  for (const auto& v : s.vertices()) {
    bool negative = std::any_of(v.begin(), v.end(),
                                [](std::int64_t x) { return x < 0; });
    if (negative) {
      report.ok = false;
      report.errors.push_back("negative-component: vertex has a negative entry");
      break;
    }
  }
  if (real_rank(s.vertices(), s.dim()) < s.dim()) {
    report.ok = false;
    report.errors.push_back(
        "rank-deficient: vertex matrix does not span all queue directions");
  }
  return report;
}

ScheduleSet truncate(const ScheduleSet& s, const QueueVector& q) {
  if (q.size() != s.dim()) {
    throw std::invalid_argument("truncate: queue dimension mismatch");
  }
  std::vector<ScheduleVector> out;
  out.reserve(s.size());
  for (const auto& v : s.vertices()) {
    ScheduleVector w(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) w[j] = std::min(v[j], q[j]);
    out.push_back(std::move(w));
  }
  return ScheduleSet(std::move(out));
}

ScheduleSet parse_schedule_set(std::istream& in) {
  std::vector<ScheduleVector> vertices;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    ScheduleVector v;
    long long x;
    while (row >> x) {
      if (x < 0) {
        throw std::invalid_argument("schedule set line " + std::to_string(lineno) +
                                    ": negative component");
      }
      v.push_back(x);
    }
    if (!row.eof()) {
      throw std::invalid_argument("schedule set line " + std::to_string(lineno) +
                                  ": expected space-separated integers");
    }
    vertices.push_back(std::move(v));
  }
  if (vertices.empty()) {
    throw std::invalid_argument("schedule set file has no vertices");
  }
  return ScheduleSet(std::move(vertices));
}

ScheduleSet load_schedule_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open schedule set file: " + path);
  }
  return parse_schedule_set(in);
}

}  // namespace maxweight
