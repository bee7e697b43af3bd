#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "maxweight/capacity.hpp"
#include "maxweight/fluid.hpp"
#include "maxweight/rng.hpp"
#include "maxweight/scenario.hpp"
#include "maxweight/simulator.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace maxweight;

json cert_json(const LyapunovCertificate& c) {
  return {{"epsilon", c.epsilon},
          {"rho", json(c.rho)},
          {"gamma", c.gamma},
          {"K_L", c.K_L},
          {"T", c.T}};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

json run_simulate(const Scenario& sc, const fs::path& out_dir) {
  SimOptions opt;
  opt.tol = sc.tol;
  opt.max_iter = sc.max_iter;
  opt.kappa = sc.kappa;
  opt.record_every = sc.record_every;
  SimTrace trace = run(sc.u(), sc.schedules, *sc.arrivals, sc.q0, sc.horizon,
                       sc.seed, opt);

  std::ofstream csv(out_dir / "trace.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write trace.csv");
  trace.write_csv(csv);
  csv.close();

  const SimSummary& s = trace.summary;
  json out;
  out["mode"] = "simulate";
  out["horizon"] = s.horizon;
  out["q0"] = json(s.q0);
  out["time_avg_l1"] = s.time_avg_l1;
  out["max_l1"] = s.max_l1;
  out["kappa"] = s.kappa;
  out["fraction_below_kappa"] = s.fraction_below_kappa;
  out["quarter_avg_l1"] = json(std::vector<double>(s.quarter_avg_l1.begin(),
                                                   s.quarter_avg_l1.end()));
  out["service_total"] = json(s.service_total);
  out["arrival_total"] = json(s.arrival_total);
  out["files"] = {{"trace", "trace.csv"}, {"summary", "summary.json"}};
  out["config"] = sc.resolved;
  write_file(out_dir / "summary.json", out.dump(2) + "\n");
  return out;
}

json run_fluid(Scenario sc, const fs::path& out_dir) {
  // The Lyapunov column and the default horizon both come from the
  // half-slack certificate, when the arrival rate admits one.
  std::optional<LyapunovCertificate> cert;
  std::optional<double> eps_star;
  bool positive = true;
  for (double v : sc.abar) positive = positive && v > 0.0;
  if (positive) {
    double es = slack(sc.abar, sc.schedules).slack;
    eps_star = es;
    if (es > 0.0) cert = certificate(sc.u(), sc.schedules, sc.abar, es / 2.0);
  }
  double t_end;
  if (sc.t_end) {
    t_end = *sc.t_end;
  } else {
    if (!cert) {
      throw std::invalid_argument(
          "fluid.t_end: required when the arrival rate has no capacity slack");
    }
    t_end = 1.25 * cert->T;
  }
  sc.resolved["fluid"]["t_end"] = t_end;

  std::optional<RealVector> rho;
  if (cert) rho = cert->rho;
  FluidTrajectory traj = integrate(sc.fluid_q0, sc.abar, sc.u(), sc.schedules,
                                   sc.h, t_end, sc.tol, rho);

  std::ofstream csv(out_dir / "fluid.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write fluid.csv");
  traj.write_csv(csv);
  csv.close();

  json out;
  out["mode"] = "fluid";
  out["steps"] = traj.steps.size();
  out["t_end"] = t_end;
  out["h"] = sc.h;
  out["absorbed"] = traj.absorbed;
  if (traj.absorbed) out["absorbed_at"] = traj.absorbed_at;
  out["final_q"] = json(traj.steps.back().q);
  if (eps_star) out["epsilon_star"] = *eps_star;
  if (cert) out["certificate"] = cert_json(*cert);
  out["files"] = {{"trajectory", "fluid.csv"}, {"summary", "summary.json"}};
  out["config"] = sc.resolved;
  write_file(out_dir / "summary.json", out.dump(2) + "\n");
  return out;
}

json run_certificate(const Scenario& sc, const fs::path& out_dir) {
  double eps_star = slack(sc.abar, sc.schedules).slack;
  if (eps_star <= 0.0) {
    throw std::domain_error(
        "certificate: arrival rate has no capacity slack (epsilon* <= 0)");
  }
  double eps = eps_star;
  if (sc.eps_mode == "star/2") {
    eps = eps_star / 2.0;
  } else if (sc.eps_mode == "value") {
    eps = sc.eps_value;
  }
  LyapunovCertificate main = certificate(sc.u(), sc.schedules, sc.abar, eps);
  LyapunovCertificate half =
      certificate(sc.u(), sc.schedules, sc.abar, eps_star / 2.0);

  json out = cert_json(main);
  json full;
  full["mode"] = "certificate";
  for (auto& [k, v] : out.items()) full[k] = v;
  full["epsilon_star"] = eps_star;
  full["default_half_slack"] = cert_json(half);
  full["files"] = {{"certificate", "certificate.json"}};
  full["config"] = sc.resolved;
  write_file(out_dir / "certificate.json", full.dump(2) + "\n");
  return full;
}

json run_capacity(const Scenario& sc, const fs::path& out_dir) {
  CapacityResult res = slack(sc.abar, sc.schedules);
  json witness = json::array();
  for (const auto& [vertex, w] : res.witness) {
    witness.push_back({{"weight", w}, {"vertex", json(vertex)}});
  }
  json out;
  out["mode"] = "capacity";
  out["slack"] = res.slack;
  out["abar"] = json(sc.abar);
  out["witness"] = std::move(witness);
  out["files"] = {{"capacity", "capacity.json"}};
  out["config"] = sc.resolved;
  write_file(out_dir / "capacity.json", out.dump(2) + "\n");
  return out;
}

json run_compare(Scenario sc, const fs::path& out_dir) {
  double t_end;
  if (sc.t_end) {
    t_end = *sc.t_end;
  } else {
    double es = slack(sc.abar, sc.schedules).slack;
    if (es <= 0.0) {
      throw std::invalid_argument(
          "compare.t_end: required when the arrival rate has no capacity slack");
    }
    t_end = 1.5 * certificate(sc.u(), sc.schedules, sc.abar, es / 2.0).T;
  }
  sc.resolved["compare"]["t_end"] = t_end;

  CompareInputs in{sc.u(), sc.schedules, *sc.arrivals, sc.shape, sc.h, sc.tol};
  std::vector<std::vector<ScaledComparison>> per_seed;
  for (std::int64_t r = 0; r < sc.replicates; ++r) {
    per_seed.push_back(
        compare_scaled(in, sc.c_list, t_end,
                       derive_seed(sc.seed, static_cast<std::uint64_t>(r))));
  }

  std::string csv = "c,replicate,sup_distance\n";
  char buf[64];
  for (std::size_t ci = 0; ci < sc.c_list.size(); ++ci) {
    for (std::size_t r = 0; r < per_seed.size(); ++r) {
      std::snprintf(buf, sizeof(buf), "%lld,%zu,%.17g",
                    static_cast<long long>(sc.c_list[ci]), r,
                    per_seed[r][ci].sup_distance);
      csv += buf;
      csv += "\n";
    }
  }
  write_file(out_dir / "compare.csv", csv);

  json medians = json::array();
  json raw = json::array();
  for (std::size_t ci = 0; ci < sc.c_list.size(); ++ci) {
    std::vector<double> d;
    json row = json::array();
    for (const auto& rep : per_seed) {
      d.push_back(rep[ci].sup_distance);
      row.push_back(rep[ci].sup_distance);
    }
    std::sort(d.begin(), d.end());
    std::size_t n = d.size();
    double med = n % 2 == 1 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
    medians.push_back(med);
    raw.push_back(std::move(row));
  }

  json out;
  out["mode"] = "compare-scaled";
  out["c_list"] = json(sc.c_list);
  out["t_end"] = t_end;
  out["replicates"] = sc.replicates;
  out["median_sup_distance"] = std::move(medians);
  out["sup_distance"] = std::move(raw);
  out["files"] = {{"distances", "compare.csv"}, {"summary", "summary.json"}};
  out["config"] = sc.resolved;
  write_file(out_dir / "summary.json", out.dump(2) + "\n");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MaxWeight-(alpha,g) scheduling experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed_flag = 0;
  bool quiet = false;

  std::vector<CLI::Option*> seed_opts;
  for (const char* name : {"simulate", "fluid", "certificate", "capacity",
                           "compare-scaled"}) {
    CLI::App* sub = app.add_subcommand(name, "");
    sub->add_option("--config", config_path, "JSON scenario file")
        ->required();
    sub->add_option("--out", out_dir, "output directory (default: .)");
    seed_opts.push_back(
        sub->add_option("--seed", seed_flag, "override the config seed"));
    sub->add_flag("--quiet", quiet, "suppress the summary line on stdout");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string mode = sub->get_name();
    std::optional<std::uint64_t> seed_override;
    for (CLI::Option* o : seed_opts) {
      if (o->count() > 0) seed_override = seed_flag;
    }

    Scenario sc = load_scenario_file(config_path, mode, seed_override);
    fs::path out = out_dir;
    fs::create_directories(out);

    json summary;
    if (mode == "simulate") {
      summary = run_simulate(sc, out);
    } else if (mode == "fluid") {
      summary = run_fluid(std::move(sc), out);
    } else if (mode == "certificate") {
      summary = run_certificate(sc, out);
    } else if (mode == "capacity") {
      summary = run_capacity(sc, out);
    } else {
      summary = run_compare(std::move(sc), out);
    }
    if (!quiet) std::cout << summary.dump() << "\n";
    return 0;
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::cout << err.dump() << "\n";
    return 1;
  }
}
