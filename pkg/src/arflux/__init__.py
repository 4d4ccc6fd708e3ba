"""Aw-Rascle traffic flow with a pointwise flux constraint at x = 0:
exact constrained Riemann solvers, invariant-domain and total-variation
analysis, and the matching constrained Godunov schemes."""

from .errors import (
    ArfluxError,
    DegenerateSpeeds,
    NegativeVelocity,
    NonphysicalCell,
    SolverContradiction,
    VacuumIntermediate,
    ZeroRightVelocity,
)
from .model import (
    Flux2,
    PressureLaw,
    StatePV,
    StateRY,
    eigenvalues,
    flux,
    lax1_velocity,
    lax2_velocity,
    riemann_invariants,
    to_conserved,
    to_primitive,
)
from .riemann import (
    Wave,
    WaveFan,
    WaveKind,
    check2_state,
    flux_at_zero,
    i1_roots,
    intermediate_state,
    left_trace_at_zero,
    right_trace_at_zero,
    sample,
    solve_classical,
    solve_rs1,
    solve_rs2,
)
from .domains import (
    CounterexampleKind,
    DomainBox,
    contains,
    counterexample_state,
    h_q,
    is_invariant_rs1,
    is_invariant_rs2,
    is_invariant_unconstrained_bound,
    vbar,
)
from .tv import TVReport, compare_solvers, random_campaign, tv_of_fan
from .fvm import (
    ConservationLedger,
    SchemeKind,
    SimGrid,
    SimState,
    cfl_dt,
    constrained_flux_rs1,
    godunov_flux,
    run,
    step_classical,
    step_rs1,
    step_rs2_freeze,
    step_rs2_ghost,
)

__version__ = "0.1.0"
