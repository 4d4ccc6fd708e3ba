"""Exact Riemann solvers.

``solve_classical`` is the unconstrained Aw-Rascle solver (1-wave to the
intermediate state, then a 2-contact).  ``solve_rs1`` and ``solve_rs2``
impose the flux constraint rho*v <= q at x = 0:

* RS1 conserves both rho and y across x = 0 and does so by inserting a
  stationary *non-entropic* shock between the two densities at which the
  1-curve through the left state carries flux exactly q.
* RS2 conserves only rho: the right trace sits on the 2-curve through
  the right state (density q/v_r), so w generally jumps across x = 0.

Solutions are self-similar; ``sample`` evaluates a wave fan at any ray
xi = x/t.
"""

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import SolverContradiction, VacuumIntermediate, ZeroRightVelocity
from .model import Flux2, PressureLaw, StatePV, RHO_MIN, flux, eigenvalues, w_of
from .rootfind import bisect_root

#: f1 = q exactly (within this) counts as "constraint satisfied": classical.
TIE_TOL = 1e-12

#: Densities closer than this are the same state (no wave emitted).
RHO_TOL = 1e-12

#: Admissibility slack on wave-speed signs for the glued constrained fans.
SPEED_TOL = 1e-10


class WaveKind(enum.Enum):
    SHOCK1 = "shock1"
    RAREFACTION1 = "rarefaction1"
    CONTACT2 = "contact2"
    NONCLASSICAL_STATIONARY = "nonclassical_stationary"


@dataclass(frozen=True)
class Wave:
    kind: WaveKind
    left: StatePV
    right: StatePV
    speed_lo: float
    speed_hi: float

    @property
    def speed(self) -> float:
        """Single speed of a discontinuity (lo == hi)."""
        return self.speed_lo


@dataclass(frozen=True)
class WaveFan:
    """Self-similar solution: ordered waves with nondecreasing speeds.

    delta_f2 records the jump of the second flux component across x = 0
    (zero except for the RS2 nonclassical interface).
    """

    left: StatePV
    right: StatePV
    pressure: PressureLaw
    waves: Tuple[Wave, ...] = ()
    delta_f2: float = 0.0

    def sample(self, xi: float, side: str = "right") -> StatePV:
        return sample(self, xi, side)


def intermediate_state(l: StatePV, r: StatePV, p: PressureLaw) -> StatePV:
    """Intersection of the 1-curve through l with the 2-curve through r:
    v = v_r and p(rho) = w_l - v_r.

    Raises VacuumIntermediate when w_l <= v_r (the curves only meet at
    rho = 0, which is outside the admissible domain).
    """
    wl = w_of(l, p)
    if wl <= r.v + 1e-12:
        raise VacuumIntermediate(
            f"w_l={wl} <= v_r={r.v}: 1-wave reaches vacuum before the 2-curve"
        )
    return StatePV(p.inverse(wl - r.v), r.v)


def _one_wave(l: StatePV, m: StatePV, p: PressureLaw) -> Tuple[Wave, ...]:
    """1-family wave connecting l to m (same w), or nothing if l == m."""
    if abs(m.rho - l.rho) <= RHO_TOL * max(1.0, l.rho, m.rho):
        return ()
    if m.rho > l.rho:
        sigma = (m.rho * m.v - l.rho * l.v) / (m.rho - l.rho)
        return (Wave(WaveKind.SHOCK1, l, m, sigma, sigma),)
    lam_l, _ = eigenvalues(l, p)
    lam_m, _ = eigenvalues(m, p)
    return (Wave(WaveKind.RAREFACTION1, l, m, lam_l, lam_m),)


def solve_classical(l: StatePV, r: StatePV, p: PressureLaw) -> WaveFan:
    """Unconstrained Riemann solution: 1-wave to (rho_m, v_r), then a
    2-contact to r (each omitted when degenerate)."""
    m = intermediate_state(l, r, p)
    waves = _one_wave(l, m, p)
    if abs(m.rho - r.rho) > RHO_TOL * max(1.0, m.rho, r.rho):
        waves = waves + (Wave(WaveKind.CONTACT2, m, r, r.v, r.v),)
    return WaveFan(l, r, p, waves)


def _rarefaction_interior(wave: Wave, xi: float, p: PressureLaw) -> StatePV:
    """State inside a 1-rarefaction at ray xi: rho solves
    w0 - p(rho) - rho*p'(rho) = xi on the curve v = w0 - p(rho)."""
    w0 = w_of(wave.left, p)
    rho = p.sonic_density(w0 - xi)
    return StatePV(rho, w0 - p(rho))


def rarefaction_density_bisect(w0: float, xi: float, rho_lo: float,
                               rho_hi: float, p: PressureLaw) -> float:
    """Bisection reference for the rarefaction interior density (the
    closed-form path above is checked against this in the tests)."""
    return bisect_root(lambda rho: w0 - p(rho) - rho * p.deriv(rho) - xi,
                       rho_lo, rho_hi)


def sample(fan: WaveFan, xi: float, side: str = "right") -> StatePV:
    """Evaluate the fan at ray xi = x/t.

    When xi coincides with a discontinuity speed the right state is
    returned; pass side="left" for the left trace (used to read the
    upstream side of the stationary nonclassical shock).
    """
    state = fan.left
    for wave in fan.waves:
        if wave.kind is WaveKind.RAREFACTION1:
            if xi <= wave.speed_lo:
                return state
            if xi >= wave.speed_hi:
                state = wave.right
                continue
            return _rarefaction_interior(wave, xi, fan.pressure)
        crossed = xi >= wave.speed if side == "right" else xi > wave.speed
        if crossed:
            state = wave.right
        else:
            return state
    return state


def left_trace_at_zero(fan: WaveFan) -> StatePV:
    return sample(fan, 0.0, side="left")


def right_trace_at_zero(fan: WaveFan) -> StatePV:
    return sample(fan, 0.0, side="right")


def flux_at_zero(fan: WaveFan, p: PressureLaw) -> Flux2:
    """Flux trace at x = 0 (right trace by convention).

    For a classical discontinuity sitting exactly at xi = 0 both sides
    carry the same flux (Rankine-Hugoniot); this is asserted to 1e-10.
    """
    for wave in fan.waves:
        if wave.kind in (WaveKind.SHOCK1, WaveKind.CONTACT2) and abs(wave.speed) <= 1e-14:
            fl, fr = flux(wave.left, p), flux(wave.right, p)
            if abs(fl.f1 - fr.f1) > 1e-10 or abs(fl.f2 - fr.f2) > 1e-10:
                raise SolverContradiction(
                    f"stationary {wave.kind.value} violates Rankine-Hugoniot"
                )
    return flux(sample(fan, 0.0), p)


def i1_roots(l: StatePV, q: float, p: PressureLaw) -> Optional[Tuple[float, float]]:
    """Densities on the 1-curve through l carrying flux exactly q.

    g(rho) = rho*(w_l - p(rho)) - q is strictly concave with maximizer
    rho* = sonic_density(w_l).  Returns (rho_check1, rho_hat) with
    rho_check1 <= rho_hat, or None when the level q is unattainable.
    A tangency (g(rho*) ~ 0) returns the double root.
    """
    wl = w_of(l, p)

    def g(rho):
        return rho * (wl - p(rho)) - q

    rho_star = p.sonic_density(wl)
    g_star = g(rho_star)
    if g_star < -1e-12:
        return None
    if g_star <= 1e-12:
        return rho_star, rho_star
    rho_max = p.inverse(wl)  # v = 0 endpoint of the admissible branch
    rho_check1 = bisect_root(g, RHO_MIN, rho_star)
    rho_hat = bisect_root(g, rho_star, rho_max)
    return rho_check1, rho_hat


def check2_state(r: StatePV, q: float) -> StatePV:
    """Point of the 2-curve through r with flux q: (q/v_r, v_r)."""
    if r.v <= 1e-12:
        raise ZeroRightVelocity(
            f"v_r={r.v}: the 2-curve through r carries zero flux"
        )
    return StatePV(q / r.v, r.v)


def _interface_states(l: StatePV, q: float, p: PressureLaw) -> Tuple[StatePV, StatePV]:
    """(rho_hat, v_hat) and (rho_check1, v_check1) on the 1-curve through l.

    Velocities are taken as w_l - p(rho) so that w is preserved exactly;
    the flux then equals q up to the root-finding residual.
    """
    roots = i1_roots(l, q, p)
    if roots is None or roots[1] - roots[0] <= RHO_TOL:
        raise SolverContradiction(
            "constraint violated but the flux level set is degenerate"
        )
    wl = w_of(l, p)
    hat = StatePV(roots[1], wl - p(roots[1]))
    chk1 = StatePV(roots[0], wl - p(roots[0]))
    return hat, chk1


def _glue_constrained(l: StatePV, r: StatePV, hat: StatePV, chk: StatePV,
                      q: float, p: PressureLaw, delta_f2: float) -> WaveFan:
    left_fan = solve_classical(l, hat, p)
    right_fan = solve_classical(chk, r, p)
    for wv in left_fan.waves:
        if wv.speed_hi > SPEED_TOL:
            raise SolverContradiction(
                f"left piece emits a wave of positive speed {wv.speed_hi}"
            )
    for wv in right_fan.waves:
        if wv.speed_lo < -SPEED_TOL:
            raise SolverContradiction(
                f"right piece emits a wave of negative speed {wv.speed_lo}"
            )
    if abs(flux(hat, p).f1 - q) > 1e-10 or abs(flux(chk, p).f1 - q) > 1e-10:
        raise SolverContradiction("interface traces do not carry flux q")
    jump = Wave(WaveKind.NONCLASSICAL_STATIONARY, hat, chk, 0.0, 0.0)
    return WaveFan(l, r, p, left_fan.waves + (jump,) + right_fan.waves, delta_f2)


def solve_rs1(l: StatePV, r: StatePV, q: float, p: PressureLaw) -> WaveFan:
    """Constrained solver conserving both rho and y at x = 0.

    If the classical flux trace at x = 0 already satisfies the bound
    (ties included), the classical fan is returned unchanged.  Otherwise
    the fan is glued from the classical solution to (rho_hat, v_hat) on
    the left, the stationary nonclassical shock down to
    (rho_check1, v_check1), and the classical solution onward to r.
    """
    classical = solve_classical(l, r, p)
    if flux(sample(classical, 0.0), p).f1 <= q + TIE_TOL:
        return classical
    hat, chk1 = _interface_states(l, q, p)
    fan = _glue_constrained(l, r, hat, chk1, q, p, delta_f2=0.0)
    if abs(w_of(chk1, p) - w_of(l, p)) > 1e-10:
        raise SolverContradiction("w is not constant across x = 0")
    return fan


def solve_rs2(l: StatePV, r: StatePV, q: float, p: PressureLaw) -> WaveFan:
    """Constrained solver conserving only rho at x = 0.

    The right interface trace is (q/v_r, v_r), so the jump at x = 0 keeps
    f1 = q on both sides but changes f2 by delta_f2 (recorded on the fan).
    """
    classical = solve_classical(l, r, p)
    if flux(sample(classical, 0.0), p).f1 <= q + TIE_TOL:
        return classical
    hat, _ = _interface_states(l, q, p)
    chk2 = check2_state(r, q)
    delta_f2 = flux(chk2, p).f2 - flux(hat, p).f2
    return _glue_constrained(l, r, hat, chk2, q, p, delta_f2=delta_f2)


def validate_fan(fan: WaveFan, p: PressureLaw, tol: float = 1e-10) -> None:
    """Structural checks used by the tests: shared middle states, weakly
    ordered speeds, per-kind invariants.  Raises SolverContradiction."""
    prev_state = fan.left
    prev_speed = -float("inf")
    for wave in fan.waves:
        if (abs(wave.left.rho - prev_state.rho) > tol
                or abs(wave.left.v - prev_state.v) > tol):
            raise SolverContradiction("adjacent waves do not share a state")
        if wave.speed_lo < prev_speed - tol:
            raise SolverContradiction("wave speeds are not weakly ordered")
        if wave.kind is WaveKind.SHOCK1:
            if abs(w_of(wave.left, p) - w_of(wave.right, p)) > tol:
                raise SolverContradiction("1-shock does not preserve w")
            if not wave.left.rho < wave.right.rho:
                raise SolverContradiction("1-shock violates the entropy ordering")
            rh = (wave.right.rho * wave.right.v - wave.left.rho * wave.left.v) \
                / (wave.right.rho - wave.left.rho)
            if abs(rh - wave.speed) > tol:
                raise SolverContradiction("1-shock speed is not Rankine-Hugoniot")
        elif wave.kind is WaveKind.RAREFACTION1:
            if abs(w_of(wave.left, p) - w_of(wave.right, p)) > tol:
                raise SolverContradiction("1-rarefaction does not preserve w")
            if not wave.left.rho > wave.right.rho:
                raise SolverContradiction("1-rarefaction densities not decreasing")
            if not wave.speed_lo < wave.speed_hi:
                raise SolverContradiction("1-rarefaction speeds not increasing")
        elif wave.kind is WaveKind.CONTACT2:
            if abs(wave.left.v - wave.right.v) > tol or abs(wave.left.v - wave.speed) > tol:
                raise SolverContradiction("2-contact must travel at the common v")
        else:  # nonclassical stationary
            if wave.speed != 0.0:
                raise SolverContradiction("nonclassical shock must be stationary")
            if not wave.left.rho > wave.right.rho:
                raise SolverContradiction("nonclassical shock must drop the density")
        prev_state = wave.right
        prev_speed = wave.speed_hi
    if (abs(prev_state.rho - fan.right.rho) > tol
            or abs(prev_state.v - fan.right.v) > tol):
        raise SolverContradiction("fan does not end at the right datum")
