"""Invariant regions for the constrained Riemann solvers.

A candidate region is the box {v1 <= v <= v2, w1 <= v + p(rho) <= w2} in
Riemann-invariant coordinates; it is always invariant for the
unconstrained solver.  The auxiliary function

    h_q(v) = p(q/v) + v

is the w-level of the flux isoline rho*v = q at speed v.  h_q is strictly
convex with a unique minimizer vbar, which reduces every "h_q >= bound on
an interval" condition to at most two endpoint evaluations plus one at
the clamped minimizer.

Exact characterizations (under the precondition that h_q dips below w2
somewhere in [v1, v2]):

* conserving solver (RS1):  h_q(v1) >= w2  and  h_q(v2) >= w2
* density-only solver (RS2): h_q(v1) >= w2  and  h_q(v) >= w1 on [v1, v2]

``counterexample_state`` reproduces the states used to show necessity:
a state on the top level w = w2 whose own constrained solution leaves
the box.
"""

import enum
from dataclasses import dataclass
from typing import Optional

from .model import PressureLaw, StatePV, w_of
from .riemann import left_trace_at_zero, right_trace_at_zero, solve_rs1, solve_rs2
from .rootfind import bisect_root, expand_bracket_up, shrink_bracket_down

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class DomainBox:
    """Candidate invariant region parameterized by velocity bounds (v1, v2)
    and bounds (w1, w2) on w = v + p(rho)."""

    v1: float
    v2: float
    w1: float
    w2: float

    def __post_init__(self):
        if not (0.0 < self.v1 < self.v2):
            raise ValueError(f"need 0 < v1 < v2, got {self.v1}, {self.v2}")
        if not (0.0 < self.w1 < self.w2):
            raise ValueError(f"need 0 < w1 < w2, got {self.w1}, {self.w2}")
        if not self.v2 < self.w2:
            raise ValueError(
                f"need v2 < w2 so the box has interior states, got {self.v2}, {self.w2}"
            )


def contains(box: DomainBox, s: StatePV, p: PressureLaw, tol: float = 1e-10) -> bool:
    w = w_of(s, p)
    return (box.v1 - tol <= s.v <= box.v2 + tol
            and box.w1 - tol <= w <= box.w2 + tol)


def h_q(v: float, q: float, p: PressureLaw) -> float:
    """w-level of the constraint isoline rho*v = q at speed v."""
    return p(q / v) + v


def h_q_prime(v: float, q: float, p: PressureLaw) -> float:
    return 1.0 - (q / v ** 2) * p.deriv(q / v)


def vbar(q: float, p: PressureLaw) -> float:
    """Unique minimizer of h_q, by bisection on the strictly increasing
    derivative h_q' (residual <= 1e-12)."""
    def hp(v):
        return h_q_prime(v, q, p)

    lo = shrink_bracket_down(hp, max(q, 1.0))
    hi = expand_bracket_up(hp, max(lo, max(q, 1.0)))
    return bisect_root(hp, lo, hi)


def _min_h_on_box(box: DomainBox, q: float, p: PressureLaw) -> float:
    """min of h_q over [v1, v2]; by unimodality this is h_q at the
    minimizer clamped into the interval."""
    v = min(max(vbar(q, p), box.v1), box.v2)
    return h_q(v, q, p)


def is_invariant_unconstrained_bound(box: DomainBox, q: float, p: PressureLaw,
                                     tol: float = DEFAULT_TOL) -> bool:
    """True when h_q >= w2 on all of [v1, v2]: the constraint can never
    bind inside the box, so both solvers stay classical and the box is
    invariant."""
    return _min_h_on_box(box, q, p) >= box.w2 - tol


def is_invariant_rs1(box: DomainBox, q: float, p: PressureLaw,
                     tol: float = DEFAULT_TOL) -> bool:
    """Exact invariance test for the conserving solver."""
    if is_invariant_unconstrained_bound(box, q, p, tol):
        return True
    return (h_q(box.v1, q, p) >= box.w2 - tol
            and h_q(box.v2, q, p) >= box.w2 - tol)


def is_invariant_rs2(box: DomainBox, q: float, p: PressureLaw,
                     tol: float = DEFAULT_TOL) -> bool:
    """Exact invariance test for the density-only solver."""
    if is_invariant_unconstrained_bound(box, q, p, tol):
        return True
    return (h_q(box.v1, q, p) >= box.w2 - tol
            and _min_h_on_box(box, q, p) >= box.w1 - tol)


class CounterexampleKind(enum.Enum):
    """Which necessary condition is being violated, and on which side of
    x = 0 the escaping trace appears."""

    RS1_LEFT = "rs1_left"    # h_q(v1) < w2: left trace exits below v1
    RS1_RIGHT = "rs1_right"  # h_q(v2) < w2: right trace exits above v2
    RS2_LEFT = "rs2_left"    # h_q(v1) < w2: left trace exits below v1
    RS2_RIGHT = "rs2_right"  # h_q < w1 somewhere: right trace exits below w1


def counterexample_state(box: DomainBox, q: float, p: PressureLaw,
                         which: CounterexampleKind,
                         tol: float = DEFAULT_TOL) -> Optional[StatePV]:
    """A state s in the box (on the top level w = w2) such that the
    relevant constrained solver applied to (s, s) produces a trace at
    x = 0 outside the box.  Returns None when the corresponding
    invariance condition holds (or the constraint never binds)."""
    if is_invariant_unconstrained_bound(box, q, p, tol):
        return None
    vb = min(max(vbar(q, p), box.v1), box.v2)
    if which in (CounterexampleKind.RS1_LEFT, CounterexampleKind.RS1_RIGHT,
                 CounterexampleKind.RS2_LEFT):
        edge = box.v1 if which is not CounterexampleKind.RS1_RIGHT else box.v2
        if h_q(edge, q, p) >= box.w2 - tol:
            return None
        # for RS2 the escaping left trace is exhibited from the minimizer
        v_sel = edge if which is not CounterexampleKind.RS2_LEFT else vb
    else:
        if h_q(vb, q, p) >= box.w1 - tol:
            return None
        v_sel = vb
    return StatePV(p.inverse(box.w2 - v_sel), v_sel)


def counterexample_exits(box: DomainBox, s: StatePV, q: float, p: PressureLaw,
                         which: CounterexampleKind) -> bool:
    """Re-run the solver on (s, s) and confirm the advertised trace
    actually leaves the box (verification path for the tests)."""
    if which in (CounterexampleKind.RS1_LEFT, CounterexampleKind.RS1_RIGHT):
        fan = solve_rs1(s, s, q, p)
    else:
        fan = solve_rs2(s, s, q, p)
    if which in (CounterexampleKind.RS1_LEFT, CounterexampleKind.RS2_LEFT):
        trace = left_trace_at_zero(fan)
    else:
        trace = right_trace_at_zero(fan)
    return not contains(box, trace, p)
