#include "maxweight/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace maxweight {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) fail(where + ": unknown key '" + it.key() + "'");
  }
}

double as_real(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + ": expected a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where + ": expected an integer");
  return v.get<std::int64_t>();
}

RealVector as_real_vec(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) {
    fail(where + ": expected a non-empty array of numbers");
  }
  RealVector out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_real(e, where));
  return out;
}

QueueVector as_int_vec(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) {
    fail(where + ": expected a non-empty array of integers");
  }
  QueueVector out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_int(e, where));
  return out;
}

void enumerate_matchings(std::size_t n, std::size_t row,
                         std::vector<bool>& used, ScheduleVector& current,
                         std::vector<ScheduleVector>& out) {
  if (row == n) {
    out.push_back(current);
    return;
  }
  enumerate_matchings(n, row + 1, used, current, out);  // row idles
  for (std::size_t col = 0; col < n; ++col) {
    if (used[col]) continue;
    used[col] = true;
    current[row * n + col] = 1;
    enumerate_matchings(n, row + 1, used, current, out);
    current[row * n + col] = 0;
    used[col] = false;
  }
}

// Parses the schedule_set section. gen_n is set to the generator arity
// when the set came from a named generator, 0 otherwise (uniform_load
// needs it).
ScheduleSet parse_schedules(const json& cfg, std::size_t& gen_n,
                            json& resolved) {
  const json* sec = find(cfg, "schedule_set");
  if (!sec) fail("config: missing 'schedule_set'");
  check_keys(*sec, "schedule_set", {"generator", "file", "vertices"});
  const json* gen = find(*sec, "generator");
  const json* file = find(*sec, "file");
  const json* verts = find(*sec, "vertices");
  if ((gen != nullptr) + (file != nullptr) + (verts != nullptr) != 1) {
    fail("schedule_set: give exactly one of generator | file | vertices");
  }

  gen_n = 0;
  ScheduleSet s;
  json rsec;
  if (gen) {
    if (!gen->is_string()) fail("schedule_set.generator: expected a string");
    std::string name = gen->get<std::string>();
    s = make_generator(name);
    auto colon = name.rfind(':');
    gen_n = static_cast<std::size_t>(std::stoll(name.substr(colon + 1)));
    rsec["generator"] = name;
  } else if (file) {
    if (!file->is_string()) fail("schedule_set.file: expected a path string");
    s = load_schedule_set(file->get<std::string>());
    rsec["vertices"] = json(s.vertices());
  } else {
    std::vector<ScheduleVector> rows;
    if (!verts->is_array() || verts->empty()) {
      fail("schedule_set.vertices: expected a non-empty array of vertices");
    }
    for (const auto& row : *verts) {
      rows.push_back(as_int_vec(row, "schedule_set.vertices"));
    }
    s = ScheduleSet(std::move(rows));
    rsec["vertices"] = json(s.vertices());
  }

  ValidationReport rep = validate(s);
  if (!rep.ok) {
    std::string joined;
    for (const auto& e : rep.errors) {
      if (!joined.empty()) joined += "; ";
      joined += e;
    }
    fail("schedule_set: " + joined);
  }
  resolved["schedule_set"] = std::move(rsec);
  return s;
}

UtilityFamily parse_utility(const json& cfg, std::size_t dim, json& resolved) {
  double alpha = 1.0;
  std::vector<GFunction> gs;
  if (const json* sec = find(cfg, "utility")) {
    check_keys(*sec, "utility", {"alpha", "g"});
    if (const json* a = find(*sec, "alpha")) alpha = as_real(*a, "utility.alpha");
    if (const json* g = find(*sec, "g")) {
      if (g->is_string()) {
        gs.assign(dim, GFunction::parse(g->get<std::string>()));
      } else if (g->is_array()) {
        for (const auto& e : *g) {
          if (!e.is_string()) fail("utility.g: expected function names");
          gs.push_back(GFunction::parse(e.get<std::string>()));
        }
        if (gs.size() != dim) {
          fail("utility.g: expected one name or " + std::to_string(dim) +
               " names, got " + std::to_string(gs.size()));
        }
      } else {
        fail("utility.g: expected a name or a list of names");
      }
    }
  }
  if (!(alpha > 0.0)) fail("utility.alpha: must be > 0");
  if (gs.empty()) gs.assign(dim, GFunction::linear());

  json names = json::array();
  for (const auto& g : gs) names.push_back(g.name());
  resolved["utility"] = {{"alpha", alpha}, {"g", std::move(names)}};
  return UtilityFamily(alpha, std::move(gs));
}

std::optional<ArrivalModel> parse_arrivals(const json& cfg, std::size_t dim,
                                           std::size_t gen_n, json& resolved) {
  const json* sec = find(cfg, "arrivals");
  if (!sec) return std::nullopt;
  check_keys(*sec, "arrivals",
             {"kind", "rates", "jobs", "points", "uniform_load"});
  const json* k = find(*sec, "kind");
  if (!k || !k->is_string()) {
    fail("arrivals.kind: required, one of bernoulli|poisson|deterministic|batch");
  }
  const std::string kind = k->get<std::string>();

  auto rates_from = [&](const char* field) -> RealVector {
    const json* r = find(*sec, field);
    const json* ul = find(*sec, "uniform_load");
    if ((r != nullptr) == (ul != nullptr)) {
      fail("arrivals: give exactly one of '" + std::string(field) +
           "' or 'uniform_load'");
    }
    if (r) {
      RealVector rates = as_real_vec(*r, std::string("arrivals.") + field);
      if (rates.size() != dim) {
        fail("arrivals: expected " + std::to_string(dim) + " entries");
      }
      return rates;
    }
    if (gen_n == 0) {
      fail("arrivals.uniform_load: requires a generator schedule set");
    }
    double load = as_real(*ul, "arrivals.uniform_load");
    if (!(load >= 0.0)) fail("arrivals.uniform_load: must be >= 0");
    return RealVector(dim, load / static_cast<double>(gen_n));
  };

  std::optional<ArrivalModel> model;
  json rsec;
  rsec["kind"] = kind;
  if (kind == "bernoulli" || kind == "poisson") {
    RealVector rates = rates_from("rates");
    rsec["rates"] = json(rates);
    model = kind == "bernoulli" ? ArrivalModel::bernoulli(std::move(rates))
                                : ArrivalModel::poisson(std::move(rates));
  } else if (kind == "deterministic") {
    const json* jobs = find(*sec, "jobs");
    if (!jobs) fail("arrivals.jobs: required for deterministic arrivals");
    QueueVector d = as_int_vec(*jobs, "arrivals.jobs");
    if (d.size() != dim) {
      fail("arrivals.jobs: expected " + std::to_string(dim) + " entries");
    }
    rsec["jobs"] = json(d);
    model = ArrivalModel::deterministic(std::move(d));
  } else if (kind == "batch") {
    const json* pts = find(*sec, "points");
    if (!pts || !pts->is_array() || pts->empty()) {
      fail("arrivals.points: required for batch arrivals");
    }
    std::vector<BatchPoint> points;
    json rpts = json::array();
    for (const auto& p : *pts) {
      check_keys(p, "arrivals.points[]", {"prob", "jobs"});
      const json* prob = find(p, "prob");
      const json* jobs = find(p, "jobs");
      if (!prob || !jobs) fail("arrivals.points[]: need 'prob' and 'jobs'");
      BatchPoint bp;
      bp.prob = as_real(*prob, "arrivals.points[].prob");
      bp.jobs = as_int_vec(*jobs, "arrivals.points[].jobs");
      if (bp.jobs.size() != dim) {
        fail("arrivals.points[].jobs: expected " + std::to_string(dim) +
             " entries");
      }
      rpts.push_back({{"prob", bp.prob}, {"jobs", json(bp.jobs)}});
      points.push_back(std::move(bp));
    }
    rsec["points"] = std::move(rpts);
    model = ArrivalModel::batch_empirical(std::move(points));
  } else {
    fail("arrivals.kind: unknown kind '" + kind + "'");
  }
  resolved["arrivals"] = std::move(rsec);
  return model;
}

}  // namespace

ScheduleSet make_single(std::size_t n) {
  if (n < 1 || n > 64) {
    fail("single:<n> generator: n must be between 1 and 64");
  }
  std::vector<ScheduleVector> rows;
  rows.emplace_back(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    ScheduleVector e(n, 0);
    e[j] = 1;
    rows.push_back(std::move(e));
  }
  return ScheduleSet(std::move(rows));
}

ScheduleSet make_iq_switch(std::size_t n) {
  if (n < 1 || n > 5) {
    // matchings grow fast (n=5 already gives 1546 vertices in dim 25)
    fail("iq-switch:<n> generator: n must be between 1 and 5");
  }
  std::vector<ScheduleVector> rows;
  std::vector<bool> used(n, false);
  ScheduleVector current(n * n, 0);
  enumerate_matchings(n, 0, used, current, rows);
  return ScheduleSet(std::move(rows));
}

ScheduleSet make_generator(const std::string& name) {
  auto colon = name.rfind(':');
  if (colon == std::string::npos) {
    fail("generator '" + name + "': expected single:<n> or iq-switch:<n>");
  }
  const std::string base = name.substr(0, colon);
  const std::string arg = name.substr(colon + 1);
  std::size_t pos = 0;
  long long n = 0;
  try {
    n = std::stoll(arg, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != arg.size() || arg.empty() || n < 1) {
    fail("generator '" + name + "': bad arity '" + arg + "'");
  }
  if (base == "single") return make_single(static_cast<std::size_t>(n));
  if (base == "iq-switch") return make_iq_switch(static_cast<std::size_t>(n));
  fail("generator '" + name + "': unknown family '" + base + "'");
}

Scenario load_scenario(const json& config, const std::string& mode,
                       std::optional<std::uint64_t> seed_override) {
  static const char* kModes[] = {"simulate", "fluid", "certificate",
                                 "capacity", "compare-scaled"};
  if (std::find(std::begin(kModes), std::end(kModes), mode) ==
      std::end(kModes)) {
    fail("unknown mode '" + mode + "'");
  }
  check_keys(config, "config",
             {"mode", "seed", "solver", "schedule_set", "utility", "arrivals",
              "abar", "sim", "fluid", "certificate", "compare"});
  if (const json* m = find(config, "mode")) {
    if (!m->is_string() || m->get<std::string>() != mode) {
      fail("config: 'mode' disagrees with the requested mode '" + mode + "'");
    }
  }

  Scenario sc;
  sc.mode = mode;
  json resolved;
  resolved["mode"] = mode;

  if (const json* s = find(config, "seed")) {
    if (!s->is_number_integer() && !s->is_number_unsigned()) {
      fail("config.seed: expected an integer");
    }
    if (s->is_number_integer() && s->get<std::int64_t>() < 0) {
      fail("config.seed: must be >= 0");
    }
    sc.seed = s->get<std::uint64_t>();
  }
  if (seed_override) sc.seed = *seed_override;
  resolved["seed"] = sc.seed;

  if (const json* sec = find(config, "solver")) {
    check_keys(*sec, "solver", {"tol", "max_iter"});
    if (const json* t = find(*sec, "tol")) {
      sc.tol = as_real(*t, "solver.tol");
      if (!(sc.tol > 0.0)) fail("solver.tol: must be > 0");
    }
    if (const json* m = find(*sec, "max_iter")) {
      std::int64_t v = as_int(*m, "solver.max_iter");
      if (v < 1) fail("solver.max_iter: must be >= 1");
      sc.max_iter = static_cast<std::size_t>(v);
    }
  }
  resolved["solver"] = {{"tol", sc.tol}, {"max_iter", sc.max_iter}};

  std::size_t gen_n = 0;
  sc.schedules = parse_schedules(config, gen_n, resolved);
  const std::size_t dim = sc.schedules.dim();
  sc.utility = parse_utility(config, dim, resolved);
  sc.arrivals = parse_arrivals(config, dim, gen_n, resolved);

  const json* ab = find(config, "abar");
  if (ab && sc.arrivals) {
    fail("config: give one of 'abar' or 'arrivals', not both");
  }
  if (sc.arrivals) {
    sc.abar = sc.arrivals->mean();
  } else if (ab) {
    sc.abar = as_real_vec(*ab, "config.abar");
    if (sc.abar.size() != dim) {
      fail("config.abar: expected " + std::to_string(dim) + " entries");
    }
    for (double v : sc.abar) {
      if (!(v >= 0.0)) fail("config.abar: entries must be >= 0");
    }
    resolved["abar"] = json(sc.abar);
  }

  if (mode == "simulate") {
    if (!sc.arrivals) fail("simulate: 'arrivals' section required");
    const json* sec = find(config, "sim");
    if (!sec) fail("simulate: 'sim' section required");
    check_keys(*sec, "sim", {"horizon", "q0", "kappa", "record_every"});
    const json* hz = find(*sec, "horizon");
    if (!hz) fail("sim.horizon: required");
    sc.horizon = as_int(*hz, "sim.horizon");
    if (sc.horizon < 0) fail("sim.horizon: must be >= 0");
    if (const json* q = find(*sec, "q0")) {
      sc.q0 = as_int_vec(*q, "sim.q0");
      if (sc.q0.size() != dim) {
        fail("sim.q0: expected " + std::to_string(dim) + " entries");
      }
      for (auto v : sc.q0) {
        if (v < 0) fail("sim.q0: entries must be >= 0");
      }
    } else {
      sc.q0.assign(dim, 0);
    }
    if (const json* kp = find(*sec, "kappa")) {
      sc.kappa = as_real(*kp, "sim.kappa");
      if (!(sc.kappa > 0.0)) fail("sim.kappa: must be > 0");
    } else {
      sc.kappa = 10.0 * l1_norm(sc.abar) * static_cast<double>(dim);
    }
    if (const json* re = find(*sec, "record_every")) {
      sc.record_every = as_int(*re, "sim.record_every");
      if (sc.record_every < 0) fail("sim.record_every: must be >= 0");
    }
    resolved["sim"] = {{"horizon", sc.horizon},
                       {"q0", json(sc.q0)},
                       {"kappa", sc.kappa},
                       {"record_every", sc.record_every}};
  } else if (mode == "fluid") {
    if (sc.abar.empty()) fail("fluid: 'arrivals' or 'abar' required");
    const json* sec = find(config, "fluid");
    if (!sec) fail("fluid: 'fluid' section required");
    check_keys(*sec, "fluid", {"q0", "h", "t_end"});
    const json* q = find(*sec, "q0");
    if (!q) fail("fluid.q0: required");
    sc.fluid_q0 = as_real_vec(*q, "fluid.q0");
    if (sc.fluid_q0.size() != dim) {
      fail("fluid.q0: expected " + std::to_string(dim) + " entries");
    }
    for (double v : sc.fluid_q0) {
      if (!(v >= 0.0)) fail("fluid.q0: entries must be >= 0");
    }
    if (const json* hv = find(*sec, "h")) {
      sc.h = as_real(*hv, "fluid.h");
      if (!(sc.h > 0.0)) fail("fluid.h: must be > 0");
    }
    if (const json* te = find(*sec, "t_end")) {
      double v = as_real(*te, "fluid.t_end");
      if (!(v > 0.0)) fail("fluid.t_end: must be > 0");
      sc.t_end = v;
    }
    // t_end, when absent, is derived from the drain-time certificate by
    // the runner; resolved["fluid"]["t_end"] is patched there.
    resolved["fluid"] = {{"q0", json(sc.fluid_q0)}, {"h", sc.h}};
    if (sc.t_end) resolved["fluid"]["t_end"] = *sc.t_end;
  } else if (mode == "certificate" || mode == "capacity") {
    if (sc.abar.empty()) {
      fail(mode + ": 'arrivals' or 'abar' required");
    }
    if (mode == "certificate") {
      if (const json* sec = find(config, "certificate")) {
        check_keys(*sec, "certificate", {"epsilon"});
        if (const json* e = find(*sec, "epsilon")) {
          if (e->is_string()) {
            const std::string v = e->get<std::string>();
            if (v != "star" && v != "star/2") {
              fail("certificate.epsilon: expected \"star\", \"star/2\" or a number");
            }
            sc.eps_mode = v;
          } else {
            sc.eps_value = as_real(*e, "certificate.epsilon");
            if (!(sc.eps_value > 0.0)) {
              fail("certificate.epsilon: must be > 0");
            }
            sc.eps_mode = "value";
          }
        }
      }
      resolved["certificate"] = {
          {"epsilon", sc.eps_mode == "value" ? json(sc.eps_value)
                                             : json(sc.eps_mode)}};
    }
  } else {  // compare-scaled
    if (!sc.arrivals) fail("compare-scaled: 'arrivals' section required");
    const json* sec = find(config, "compare");
    if (!sec) fail("compare-scaled: 'compare' section required");
    check_keys(*sec, "compare", {"shape", "c_list", "t_end", "h", "replicates"});
    const json* sh = find(*sec, "shape");
    if (!sh) fail("compare.shape: required");
    sc.shape = as_real_vec(*sh, "compare.shape");
    if (sc.shape.size() != dim) {
      fail("compare.shape: expected " + std::to_string(dim) + " entries");
    }
    double mass = 0.0;
    for (double v : sc.shape) {
      if (!(v >= 0.0)) fail("compare.shape: entries must be >= 0");
      mass += v;
    }
    if (!(mass > 0.0)) fail("compare.shape: must have positive mass");
    if (const json* cl = find(*sec, "c_list")) {
      for (const auto& e : *cl) {
        std::int64_t c = as_int(e, "compare.c_list");
        if (c < 1) fail("compare.c_list: entries must be >= 1");
        if (!sc.c_list.empty() && c <= sc.c_list.back()) {
          fail("compare.c_list: must be strictly increasing");
        }
        sc.c_list.push_back(c);
      }
      if (sc.c_list.empty()) fail("compare.c_list: must be non-empty");
    } else {
      sc.c_list = {50, 200, 800};
    }
    if (const json* te = find(*sec, "t_end")) {
      double v = as_real(*te, "compare.t_end");
      if (!(v > 0.0)) fail("compare.t_end: must be > 0");
      sc.t_end = v;
    }
    if (const json* hv = find(*sec, "h")) {
      sc.h = as_real(*hv, "compare.h");
      if (!(sc.h > 0.0)) fail("compare.h: must be > 0");
    }
    if (const json* rp = find(*sec, "replicates")) {
      sc.replicates = as_int(*rp, "compare.replicates");
      if (sc.replicates < 1) fail("compare.replicates: must be >= 1");
    }
    resolved["compare"] = {{"shape", json(sc.shape)},
                           {"c_list", json(sc.c_list)},
                           {"h", sc.h},
                           {"replicates", sc.replicates}};
    if (sc.t_end) resolved["compare"]["t_end"] = *sc.t_end;
  }

  sc.resolved = std::move(resolved);
  return sc;
}

Scenario load_scenario_file(const std::string& path, const std::string& mode,
                            std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("config file '" + path + "': " + e.what());
  }
  return load_scenario(config, mode, seed_override);
}

}  // namespace maxweight
