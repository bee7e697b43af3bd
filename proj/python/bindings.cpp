// pybind11 surface for the maxweight library. Mirrors the C++ API with
// vectors passed as plain lists; heavy lifting stays in maxweight_core.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "maxweight/capacity.hpp"
#include "maxweight/fluid.hpp"
#include "maxweight/policy.hpp"
#include "maxweight/scenario.hpp"
#include "maxweight/simulator.hpp"
#include "maxweight/solver.hpp"

namespace py = pybind11;
using namespace maxweight;

namespace {

UtilityFamily build_family(double alpha, const py::object& g, std::size_t dim) {
  if (py::isinstance<py::str>(g)) {
    return UtilityFamily::uniform(alpha, GFunction::parse(g.cast<std::string>()),
                                  dim);
  }
  std::vector<GFunction> gs;
  for (const auto& item : g.cast<py::sequence>()) {
    gs.push_back(GFunction::parse(item.cast<std::string>()));
  }
  return UtilityFamily(alpha, std::move(gs));
}

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIterExceeded: return "max_iter_exceeded";
    default: return "stalled";
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "MaxWeight-(alpha,g) scheduling: solver, policy, simulator, fluid model";

  py::class_<GFunction>(m, "GFunction")
      .def_static("parse", &GFunction::parse, py::arg("text"))
      .def("value", &GFunction::value, py::arg("s"))
      .def("derivative", &GFunction::derivative, py::arg("s"))
      .def_property_readonly("name", &GFunction::name)
      .def("__repr__",
           [](const GFunction& g) { return "GFunction(" + g.name() + ")"; });

  py::class_<UtilityFamily>(m, "UtilityFamily")
      .def(py::init([](double alpha, const py::object& g, std::size_t dim) {
             return build_family(alpha, g, dim);
           }),
           py::arg("alpha"), py::arg("g"), py::arg("dim"),
           "g is a family name (applied to every queue) or a per-queue list")
      .def_property_readonly("alpha", &UtilityFamily::alpha)
      .def_property_readonly("dim", &UtilityFamily::dim)
      .def("g",
           [](const UtilityFamily& u, std::size_t j) { return u.g(j); },
           py::arg("j"));

  py::class_<ScheduleSet>(m, "ScheduleSet")
      .def(py::init<std::vector<ScheduleVector>>(), py::arg("vertices"))
      .def_property_readonly("dim", &ScheduleSet::dim)
      .def("__len__", &ScheduleSet::size)
      .def("vertex", &ScheduleSet::vertex, py::arg("i"))
      .def("vertices",
           [](const ScheduleSet& s) {
             std::vector<ScheduleVector> out;
             for (std::size_t i = 0; i < s.size(); ++i) {
               out.push_back(s.vertex(i));
             }
             return out;
           })
      .def("contains", &ScheduleSet::contains, py::arg("v"))
      .def("__repr__", [](const ScheduleSet& s) {
        std::ostringstream os;
        os << "ScheduleSet(dim=" << s.dim() << ", size=" << s.size() << ")";
        return os.str();
      });

  m.def("validate", [](const ScheduleSet& s) { return validate(s).errors; },
        py::arg("schedules"),
        "Structural check; returns a list of error strings (empty = ok)");
  m.def("truncate", &maxweight::truncate, py::arg("schedules"), py::arg("q"));
  m.def("load_schedule_set", &load_schedule_set, py::arg("path"));
  m.def("make_single", &make_single, py::arg("n"));
  m.def("make_iq_switch", &make_iq_switch, py::arg("n"));
  m.def("make_generator", &make_generator, py::arg("name"));

  m.def("weight", &weight, py::arg("u"), py::arg("q"));
  m.def("objective",
        py::overload_cast<const UtilityFamily&, const RealVector&,
                          const RealVector&>(&objective),
        py::arg("u"), py::arg("weights"), py::arg("s"));

  py::class_<SolverReport>(m, "SolverReport")
      .def_readonly("iterations", &SolverReport::iterations)
      .def_readonly("duality_gap", &SolverReport::duality_gap)
      .def_readonly("objective_value", &SolverReport::objective_value)
      .def_readonly("infeasible_log", &SolverReport::infeasible_log)
      .def_property_readonly("status", [](const SolverReport& r) {
        return status_name(r.status);
      })
      .def("converged", &SolverReport::converged);

  py::class_<FractionalSchedule>(m, "FractionalSchedule")
      .def_readonly("point", &FractionalSchedule::point)
      .def_readonly("support", &FractionalSchedule::support);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("schedule", &SolveResult::schedule)
      .def_readonly("report", &SolveResult::report);

  m.def("maximize", &maximize, py::arg("u"), py::arg("weights"),
        py::arg("schedules"), py::arg("tol") = 1e-8,
        py::arg("max_iter") = 10000);
  m.def("brute_force_max", &brute_force_max, py::arg("u"), py::arg("weights"),
        py::arg("schedules"), py::arg("grid"));

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &Rng::uniform);
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));

  m.def("decide", &decide, py::arg("u"), py::arg("schedules"), py::arg("q"),
        py::arg("tol") = 1e-8, py::arg("max_iter") = 10000);
  m.def("sample", &sample, py::arg("decision"), py::arg("rng"));

  py::class_<PolicyDecision>(m, "PolicyDecision")
      .def_readonly("sigma_bar", &PolicyDecision::sigma_bar)
      .def_readonly("sigma", &PolicyDecision::sigma);
  m.def("decide_and_sample", &decide_and_sample, py::arg("u"),
        py::arg("schedules"), py::arg("q"), py::arg("rng"),
        py::arg("tol") = 1e-8, py::arg("max_iter") = 10000);

  py::class_<ArrivalModel>(m, "ArrivalModel")
      .def_static("bernoulli", &ArrivalModel::bernoulli, py::arg("rates"))
      .def_static("poisson", &ArrivalModel::poisson, py::arg("rates"))
      .def_static("deterministic", &ArrivalModel::deterministic, py::arg("jobs"))
      .def_static("batch_empirical",
                  [](const std::vector<std::pair<double, QueueVector>>& pts) {
                    std::vector<BatchPoint> bp;
                    for (const auto& [prob, jobs] : pts) {
                      bp.push_back({prob, jobs});
                    }
                    return ArrivalModel::batch_empirical(std::move(bp));
                  },
                  py::arg("points"), "points: list of (prob, jobs) pairs")
      .def("mean", &ArrivalModel::mean)
      .def("sample", &ArrivalModel::sample, py::arg("rng"))
      .def_property_readonly("kind", &ArrivalModel::kind_name);

  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("t", &StepRecord::t)
      .def_readonly("queue", &StepRecord::queue)
      .def_readonly("sigma", &StepRecord::sigma)
      .def_readonly("sigma_bar", &StepRecord::sigma_bar)
      .def_readonly("arrivals", &StepRecord::arrivals);

  py::class_<SimSummary>(m, "SimSummary")
      .def_readonly("horizon", &SimSummary::horizon)
      .def_readonly("q0", &SimSummary::q0)
      .def_readonly("time_avg_l1", &SimSummary::time_avg_l1)
      .def_readonly("max_l1", &SimSummary::max_l1)
      .def_readonly("kappa", &SimSummary::kappa)
      .def_readonly("fraction_below_kappa", &SimSummary::fraction_below_kappa)
      .def_readonly("quarter_avg_l1", &SimSummary::quarter_avg_l1)
      .def_readonly("service_total", &SimSummary::service_total)
      .def_readonly("arrival_total", &SimSummary::arrival_total);

  py::class_<SimTrace>(m, "SimTrace")
      .def_readonly("records", &SimTrace::records)
      .def_readonly("summary", &SimTrace::summary)
      .def("to_csv", [](const SimTrace& tr) {
        std::ostringstream os;
        tr.write_csv(os);
        return os.str();
      });

  m.def("run",
        [](const UtilityFamily& u, const ScheduleSet& s,
           const ArrivalModel& arrivals, const QueueVector& q0,
           std::int64_t horizon, std::uint64_t seed, double tol,
           std::size_t max_iter, double kappa, std::int64_t record_every) {
          SimOptions opt;
          opt.tol = tol;
          opt.max_iter = max_iter;
          opt.kappa = kappa;
          opt.record_every = record_every;
          return run(u, s, arrivals, q0, horizon, seed, opt);
        },
        py::arg("u"), py::arg("schedules"), py::arg("arrivals"), py::arg("q0"),
        py::arg("horizon"), py::arg("seed"), py::arg("tol") = 1e-8,
        py::arg("max_iter") = 10000, py::arg("kappa") = 0.0,
        py::arg("record_every") = 1);

  py::class_<CapacityResult>(m, "CapacityResult")
      .def_readonly("slack", &CapacityResult::slack)
      .def_readonly("witness", &CapacityResult::witness);
  m.def("slack", &slack, py::arg("abar"), py::arg("schedules"));

  py::class_<LyapunovCertificate>(m, "LyapunovCertificate")
      .def_readonly("epsilon", &LyapunovCertificate::epsilon)
      .def_readonly("rho", &LyapunovCertificate::rho)
      .def_readonly("gamma", &LyapunovCertificate::gamma)
      .def_readonly("K_L", &LyapunovCertificate::K_L)
      .def_readonly("T", &LyapunovCertificate::T);
  m.def("certificate", &certificate, py::arg("u"), py::arg("schedules"),
        py::arg("abar"), py::arg("capacity_slack"));

  py::class_<FluidStep>(m, "FluidStep")
      .def_readonly("t", &FluidStep::t)
      .def_readonly("q", &FluidStep::q)
      .def_readonly("lyapunov", &FluidStep::lyapunov);

  py::class_<FluidTrajectory>(m, "FluidTrajectory")
      .def_readonly("steps", &FluidTrajectory::steps)
      .def_readonly("absorbed", &FluidTrajectory::absorbed)
      .def_readonly("absorbed_at", &FluidTrajectory::absorbed_at)
      .def("to_csv", [](const FluidTrajectory& tr) {
        std::ostringstream os;
        tr.write_csv(os);
        return os.str();
      });

  m.def("sigma_star", &sigma_star, py::arg("u"), py::arg("schedules"),
        py::arg("q"), py::arg("tol") = 1e-8);
  m.def("lyapunov", &lyapunov, py::arg("u"), py::arg("rho"), py::arg("q"));
  m.def("integrate", &integrate, py::arg("q0"), py::arg("abar"), py::arg("u"),
        py::arg("schedules"), py::arg("h"), py::arg("t_end"),
        py::arg("tol") = 1e-8, py::arg("rho") = std::nullopt);

  py::class_<ScaledComparison>(m, "ScaledComparison")
      .def_readonly("c", &ScaledComparison::c)
      .def_readonly("sup_distance", &ScaledComparison::sup_distance);
  m.def("compare_scaled",
        [](const UtilityFamily& u, const ScheduleSet& s,
           const ArrivalModel& arrivals, const RealVector& q0_shape,
           const std::vector<std::int64_t>& c_list, double t_end,
           std::uint64_t seed, double h, double tol) {
          CompareInputs in{u, s, arrivals, q0_shape, h, tol};
          return compare_scaled(in, c_list, t_end, seed);
        },
        py::arg("u"), py::arg("schedules"), py::arg("arrivals"),
        py::arg("q0_shape"), py::arg("c_list"), py::arg("t_end"),
        py::arg("seed"), py::arg("h") = 1e-3, py::arg("tol") = 1e-8);
  m.def("scale_initial_state", &scale_initial_state, py::arg("shape"),
        py::arg("c"));
}
