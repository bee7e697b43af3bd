"""MaxWeight-(alpha,g) scheduling for single-hop switched networks.

Thin wrapper over the C++ core: schedule sets, the away-step
conditional-gradient solver, per-slot randomized policy, discrete-time
simulator, fluid integrator with Lyapunov certificates, and the
capacity-slack LP.
"""

from ._core import (
    ArrivalModel,
    CapacityResult,
    FluidStep,
    FluidTrajectory,
    FractionalSchedule,
    GFunction,
    LyapunovCertificate,
    PolicyDecision,
    Rng,
    ScaledComparison,
    ScheduleSet,
    SimSummary,
    SimTrace,
    SolveResult,
    SolverReport,
    StepRecord,
    UtilityFamily,
    brute_force_max,
    certificate,
    compare_scaled,
    decide,
    decide_and_sample,
    derive_seed,
    integrate,
    load_schedule_set,
    lyapunov,
    make_generator,
    make_iq_switch,
    make_single,
    maximize,
    objective,
    run,
    sample,
    scale_initial_state,
    sigma_star,
    slack,
    truncate,
    validate,
    weight,
)

__version__ = "0.1.0"

__all__ = [
    "ArrivalModel",
    "CapacityResult",
    "FluidStep",
    "FluidTrajectory",
    "FractionalSchedule",
    "GFunction",
    "LyapunovCertificate",
    "PolicyDecision",
    "Rng",
    "ScaledComparison",
    "ScheduleSet",
    "SimSummary",
    "SimTrace",
    "SolveResult",
    "SolverReport",
    "StepRecord",
    "UtilityFamily",
    "brute_force_max",
    "certificate",
    "compare_scaled",
    "decide",
    "decide_and_sample",
    "derive_seed",
    "integrate",
    "load_schedule_set",
    "lyapunov",
    "make_generator",
    "make_iq_switch",
    "make_single",
    "maximize",
    "objective",
    "run",
    "sample",
    "scale_initial_state",
    "sigma_star",
    "slack",
    "truncate",
    "validate",
    "weight",
]
