"""Godunov finite-volume engines with the flux constraint pinned to a
mesh interface.

Four schemes share one time loop:

* ``CLASSICAL``   - plain Godunov.
* ``RS1``         - conservative scheme: the Godunov flux at the x = 0
  interface is capped to (q, q * f2/f1).  Conserves rho and y and obeys a
  discrete maximum principle on w.
* ``RS2_GHOST``   - non-conservative: two different fluxes at x = 0; the
  right one prescribes f2 = q * (v_1 + p(q/v_1)) so the downstream cell
  relaxes toward the density-only trace (q/v_r, v_r).  Known failure
  mode: the projection step overestimates the velocity, so the right
  trace drifts.
* ``RS2_FREEZE``  - non-conservative: conservative rho update with the
  capped flux, then the first downstream cell's velocity is frozen by
  overwriting y_1 = rho_1 * (v_1_old + p(rho_1)).  Captures the right
  trace, at the price of a small oscillation traveling at v_r.

The interface Riemann fluxes are evaluated in closed form for the power
pressure family (vectorized); the scalar ``godunov_flux`` goes through
the exact wave-fan solver and the two are cross-checked in the tests.
"""

import enum
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateSpeeds, NonphysicalCell, VacuumIntermediate, ZeroRightVelocity
from .model import Flux2, PressureLaw, StatePV, StateRY, RHO_MIN, flux, to_primitive, w_of
from .riemann import sample, solve_classical

CFL_NUMBER = 0.5


@dataclass(frozen=True)
class SimGrid:
    """Uniform 1-D mesh whose interface between cell index n_left-1 and
    n_left sits exactly at x = 0 (the constraint location)."""

    dx: float
    n_left: int
    n_right: int

    def __post_init__(self):
        if self.dx <= 0.0:
            raise ValueError("dx must be positive")
        if self.n_left < 1 or self.n_right < 1:
            raise ValueError("need at least one cell on each side of x = 0")

    @property
    def n_cells(self) -> int:
        return self.n_left + self.n_right

    @property
    def interface_index(self) -> int:
        """Index of x = 0 in the interface arrays (length n_cells + 1)."""
        return self.n_left

    def centers(self) -> np.ndarray:
        return (np.arange(self.n_cells) + 0.5) * self.dx - self.n_left * self.dx

    def interfaces(self) -> np.ndarray:
        return np.arange(self.n_cells + 1) * self.dx - self.n_left * self.dx

    @classmethod
    def from_domain(cls, x_min: float, x_max: float, dx: float) -> "SimGrid":
        n_left = int(round(-x_min / dx))
        n_right = int(round(x_max / dx))
        if abs(n_left * dx + x_min) > 1e-12 or abs(n_right * dx - x_max) > 1e-12:
            raise ValueError("domain bounds must be integer multiples of dx")
        return cls(dx, n_left, n_right)


@dataclass
class SimState:
    """Per-cell conserved values at one time level."""

    t: float
    n: int
    rho: np.ndarray
    y: np.ndarray

    def copy(self) -> "SimState":
        return SimState(self.t, self.n, self.rho.copy(), self.y.copy())


class SchemeKind(enum.Enum):
    CLASSICAL = "classical"
    RS1 = "rs1"
    RS2_GHOST = "rs2-ghost"
    RS2_FREEZE = "rs2-freeze"


def riemann_initial_condition(grid: SimGrid, left: StatePV, right: StatePV,
                              p: PressureLaw) -> SimState:
    """Cell averages of two-state data with the jump at x = 0 (no cell
    straddles the jump by grid construction)."""
    rho = np.where(grid.centers() < 0.0, left.rho, right.rho)
    y = np.where(grid.centers() < 0.0,
                 left.rho * (left.v + p(left.rho)),
                 right.rho * (right.v + p(right.rho)))
    return SimState(t=0.0, n=0, rho=rho.astype(float), y=y.astype(float))


def decode_velocity(state: SimState, p: PressureLaw) -> np.ndarray:
    """Per-cell v = y/rho - p(rho); raises NonphysicalCell on bad cells."""
    bad = ~(state.rho > RHO_MIN)
    if bad.any():
        j = int(np.argmax(bad))
        raise NonphysicalCell(j, f"density {state.rho[j]} at or below vacuum")
    v = state.y / state.rho - p(state.rho)
    bad = v < -1e-12
    if bad.any():
        j = int(np.argmax(bad))
        raise NonphysicalCell(j, f"negative velocity {v[j]}")
    return np.maximum(v, 0.0)


def interface_flux_arrays(rho_l, v_l, rho_r, v_r, p: PressureLaw):
    """Vectorized classical Godunov flux: the exact Riemann solution of
    each (left, right) pair sampled at xi = 0.  Returns (f1, f2) arrays."""
    wl = v_l + p(rho_l)
    gap = wl - v_r
    if np.any(gap <= 1e-12):
        raise VacuumIntermediate("a local Riemann problem reaches vacuum")
    rho_m = p.inverse(gap)
    scale = np.maximum(1.0, np.maximum(rho_m, rho_l))
    same = np.abs(rho_m - rho_l) <= 1e-12 * scale
    shock = (rho_m > rho_l) & ~same
    rare = (rho_m < rho_l) & ~same
    lam_l = v_l - rho_l * p.deriv(rho_l)
    lam_m = v_r - rho_m * p.deriv(rho_m)
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma = (rho_m * v_r - rho_l * v_l) / (rho_m - rho_l)
    # default: right of the 1-wave (the 2-contact moves at v_r >= 0; at
    # v_r = 0 both of its sides carry zero flux, so the choice is moot)
    rho0 = np.array(rho_m, dtype=float)
    v0 = np.array(np.broadcast_to(v_r, np.shape(rho_m)), dtype=float)
    take_left = (shock & (sigma > 0.0)) | (rare & (lam_l >= 0.0))
    transonic = rare & (lam_l < 0.0) & (lam_m > 0.0)
    rho_s = p.sonic_density(wl)
    v_s = wl - p(rho_s)
    rho0 = np.where(take_left, rho_l, rho0)
    v0 = np.where(take_left, v_l, v0)
    rho0 = np.where(transonic, rho_s, rho0)
    v0 = np.where(transonic, v_s, v0)
    f1 = rho0 * v0
    return f1, f1 * (v0 + p(rho0))


def godunov_flux(ul: StateRY, ur: StateRY, p: PressureLaw) -> Flux2:
    """Classical Godunov flux of a single interface, via the exact
    wave-fan solver (reference implementation for the vectorized path)."""
    fan = solve_classical(to_primitive(ul, p), to_primitive(ur, p), p)
    return flux(sample(fan, 0.0), p)


def constrained_flux_rs1(f_half: Flux2, q: float) -> Flux2:
    """Cap an interface flux to the constraint level: (q, q * f2/f1).
    f2/f1 is the w-value of the interface trace, so the cap preserves w."""
    if f_half.f1 <= q or f_half.f1 <= 1e-14:
        return f_half
    return Flux2(q, q * f_half.f2 / f_half.f1)


def cfl_dt(state: SimState, grid: SimGrid, p: PressureLaw) -> float:
    """Largest dt with dt/dx * max_j max(|lambda_1|, |lambda_2|) <= 1/2."""
    v = decode_velocity(state, p)
    lam1 = v - state.rho * p.deriv(state.rho)
    speed = max(np.abs(lam1).max(), np.abs(v).max())
    if speed < 1e-14:
        raise DegenerateSpeeds("all characteristic speeds are zero")
    return CFL_NUMBER * grid.dx / speed


@dataclass(frozen=True)
class StepRecord:
    """Bookkeeping of one step for the conservation ledger."""

    n: int
    t: float
    dt: float
    f_bd_left: Tuple[float, float]
    f_bd_right: Tuple[float, float]
    y_defect_step: float  # y removed at the interface vs. a conservative update


def _all_interface_fluxes(state: SimState, p: PressureLaw):
    """Godunov fluxes at the n+1 interfaces with outflow (copy) ghosts."""
    v = decode_velocity(state, p)
    rho_l = np.concatenate(([state.rho[0]], state.rho))
    v_l = np.concatenate(([v[0]], v))
    rho_r = np.concatenate((state.rho, [state.rho[-1]]))
    v_r = np.concatenate((v, [v[-1]]))
    return interface_flux_arrays(rho_l, v_l, rho_r, v_r, p)


def _conservative_update(state: SimState, grid: SimGrid, dt: float,
                         f1: np.ndarray, f2: np.ndarray) -> SimState:
    c = dt / grid.dx
    return SimState(t=state.t + dt, n=state.n + 1,
                    rho=state.rho - c * (f1[1:] - f1[:-1]),
                    y=state.y - c * (f2[1:] - f2[:-1]))


def _record(state: SimState, dt: float, f1, f2, y_defect: float) -> StepRecord:
    return StepRecord(n=state.n, t=state.t, dt=dt,
                      f_bd_left=(float(f1[0]), float(f2[0])),
                      f_bd_right=(float(f1[-1]), float(f2[-1])),
                      y_defect_step=y_defect)


def step_classical(state: SimState, grid: SimGrid, p: PressureLaw,
                   dt: float) -> Tuple[SimState, StepRecord]:
    f1, f2 = _all_interface_fluxes(state, p)
    new = _conservative_update(state, grid, dt, f1, f2)
    return new, _record(new, dt, f1, f2, 0.0)


def step_rs1(state: SimState, grid: SimGrid, q: float, p: PressureLaw,
             dt: float) -> Tuple[SimState, StepRecord]:
    f1, f2 = _all_interface_fluxes(state, p)
    k0 = grid.interface_index
    capped = constrained_flux_rs1(Flux2(float(f1[k0]), float(f2[k0])), q)
    f1[k0], f2[k0] = capped
    new = _conservative_update(state, grid, dt, f1, f2)
    return new, _record(new, dt, f1, f2, 0.0)


def _rs2_active(f1_interface: float, q: float, activation: str) -> bool:
    """Constraint-activation test for the RS2 schemes.

    "exceeds" (default) fires when the uncapped interface flux is above
    the bound, which is the condition consistent with the capping logic.
    "below" is the alternative literal reading, kept behind this switch
    for comparison only.
    """
    if activation == "exceeds":
        return f1_interface > q
    if activation == "below":
        return f1_interface < q
    raise ValueError(f"unknown activation reading {activation!r}")


def step_rs2_ghost(state: SimState, grid: SimGrid, q: float, p: PressureLaw,
                   dt: float, activation: str = "exceeds"
                   ) -> Tuple[SimState, StepRecord]:
    f1, f2 = _all_interface_fluxes(state, p)
    k0 = grid.interface_index
    y_defect = 0.0
    if _rs2_active(float(f1[k0]), q, activation):
        v1 = decode_velocity(state, p)[k0]
        if v1 <= 1e-12:
            raise ZeroRightVelocity(
                "downstream cell at rest while the constraint is active"
            )
        f2_minus = q * f2[k0] / f1[k0]
        f2_plus = q * (v1 + p(q / v1))  # drives cell 1 toward (q/v1, v1)
        f1[k0] = q
        c = dt / grid.dx
        f2r = f2[1:].copy()
        f2l = f2[:-1].copy()
        f2r[k0 - 1] = f2_minus
        f2l[k0] = f2_plus
        new = SimState(t=state.t + dt, n=state.n + 1,
                       rho=state.rho - c * (f1[1:] - f1[:-1]),
                       y=state.y - c * (f2r - f2l))
        y_defect = dt * (f2_minus - f2_plus)
        return new, _record(new, dt, f1, f2, y_defect)
    new = _conservative_update(state, grid, dt, f1, f2)
    return new, _record(new, dt, f1, f2, 0.0)


def step_rs2_freeze(state: SimState, grid: SimGrid, q: float, p: PressureLaw,
                    dt: float, activation: str = "exceeds"
                    ) -> Tuple[SimState, StepRecord]:
    f1, f2 = _all_interface_fluxes(state, p)
    k0 = grid.interface_index
    active = _rs2_active(float(f1[k0]), q, activation)
    v1_old = decode_velocity(state, p)[k0]
    capped = constrained_flux_rs1(Flux2(float(f1[k0]), float(f2[k0])), q)
    f1[k0], f2[k0] = capped
    new = _conservative_update(state, grid, dt, f1, f2)
    y_defect = 0.0
    if active:
        # freeze the downstream velocity: overwrite the conservative y
        y_cons = float(new.y[k0])
        y_frozen = new.rho[k0] * (v1_old + p(new.rho[k0]))
        new.y[k0] = y_frozen
        y_defect = (y_cons - y_frozen) * grid.dx
    return new, _record(new, dt, f1, f2, y_defect)


@dataclass
class ConservationLedger:
    """Per-step totals and interface defect; closure identities:

        total_rho[k] - total_rho[k-1] = dt * (f1_in - f1_out)
        total_y[k]   - total_y[k-1]   = dt * (f2_in - f2_out) - defect[k]
    """

    dx: float
    n: List[int] = field(default_factory=list)
    t: List[float] = field(default_factory=list)
    dt: List[float] = field(default_factory=list)
    total_rho: List[float] = field(default_factory=list)
    total_y: List[float] = field(default_factory=list)
    y_defect_cum: List[float] = field(default_factory=list)
    f_bd_left: List[Tuple[float, float]] = field(default_factory=list)
    f_bd_right: List[Tuple[float, float]] = field(default_factory=list)

    def record_initial(self, state: SimState) -> None:
        self.n.append(0)
        self.t.append(0.0)
        self.dt.append(0.0)
        self.total_rho.append(float(state.rho.sum() * self.dx))
        self.total_y.append(float(state.y.sum() * self.dx))
        self.y_defect_cum.append(0.0)
        self.f_bd_left.append((0.0, 0.0))
        self.f_bd_right.append((0.0, 0.0))

    def record(self, rec: StepRecord, state: SimState) -> None:
        self.n.append(rec.n)
        self.t.append(rec.t)
        self.dt.append(rec.dt)
        self.total_rho.append(float(state.rho.sum() * self.dx))
        self.total_y.append(float(state.y.sum() * self.dx))
        self.y_defect_cum.append(self.y_defect_cum[-1] + rec.y_defect_step)
        self.f_bd_left.append(rec.f_bd_left)
        self.f_bd_right.append(rec.f_bd_right)

    def rho_closure_residuals(self) -> np.ndarray:
        """Per-step relative residual of the rho conservation identity."""
        tot = np.asarray(self.total_rho)
        dts = np.asarray(self.dt[1:])
        fin = np.asarray([f[0] for f in self.f_bd_left[1:]])
        fout = np.asarray([f[0] for f in self.f_bd_right[1:]])
        res = np.diff(tot) - dts * (fin - fout)
        return res / np.maximum(np.abs(tot[1:]), 1e-300)

    def y_closure_residuals(self) -> np.ndarray:
        """Per-step relative residual of the y identity, defect included."""
        tot = np.asarray(self.total_y)
        dts = np.asarray(self.dt[1:])
        fin = np.asarray([f[1] for f in self.f_bd_left[1:]])
        fout = np.asarray([f[1] for f in self.f_bd_right[1:]])
        defect = np.diff(np.asarray(self.y_defect_cum))
        res = np.diff(tot) - dts * (fin - fout) + defect
        return res / np.maximum(np.abs(tot[1:]), 1e-300)


@dataclass
class MaxPrincipleReport:
    """Range of the discrete w = y/rho over the whole run."""

    w_min_initial: float
    w_max_initial: float
    w_min_run: float
    w_max_run: float

    @property
    def overshoot(self) -> float:
        return self.w_max_run - self.w_max_initial

    @property
    def undershoot(self) -> float:
        return self.w_min_initial - self.w_min_run


@dataclass
class RunResult:
    final: SimState
    snapshots: List[Tuple[float, SimState]]
    ledger: ConservationLedger
    max_principle: MaxPrincipleReport
    scheme: SchemeKind


def _make_stepper(scheme: SchemeKind, activation: str):
    if scheme is SchemeKind.CLASSICAL:
        return lambda s, g, q, p, dt: step_classical(s, g, p, dt)
    if scheme is SchemeKind.RS1:
        return step_rs1
    if scheme is SchemeKind.RS2_GHOST:
        return lambda s, g, q, p, dt: step_rs2_ghost(s, g, q, p, dt, activation)
    return lambda s, g, q, p, dt: step_rs2_freeze(s, g, q, p, dt, activation)


def run(left: StatePV, right: StatePV, grid: SimGrid, q: Optional[float],
        p: PressureLaw, scheme: SchemeKind, t_final: float,
        snapshot_times: Sequence[float] = (),
        rs2_activation: str = "exceeds") -> RunResult:
    """Time loop: dynamic CFL dt, snapshots at the requested times (dt is
    clamped so they are hit exactly), ledger and w-range tracking."""
    if scheme is not SchemeKind.CLASSICAL:
        if q is None or q <= 0.0:
            raise ValueError("constrained schemes need q > 0")
        if abs(w_of(left, p) - w_of(right, p)) > 1e-10:
            warnings.warn(
                "Riemann data with w_l != w_r are outside the validated "
                "envelope of the constrained schemes (spurious oscillations "
                "at contact discontinuities are expected)",
                stacklevel=2,
            )
    stepper = _make_stepper(scheme, rs2_activation)
    state = riemann_initial_condition(grid, left, right, p)
    ledger = ConservationLedger(grid.dx)
    ledger.record_initial(state)
    w = state.y / state.rho
    w_min = w_min0 = float(w.min())
    w_max = w_max0 = float(w.max())
    stops = sorted({float(s) for s in snapshot_times if 0.0 < s <= t_final}
                   | {float(t_final)})
    snapshots: List[Tuple[float, SimState]] = []
    if any(abs(s) < 1e-14 for s in snapshot_times):
        snapshots.append((0.0, state.copy()))
    if t_final > 0.0:
        while state.t < t_final - 1e-13:
            dt = cfl_dt(state, grid, p)
            next_stop = min(s for s in stops if s > state.t + 1e-13)
            dt = min(dt, next_stop - state.t)
            state, rec = stepper(state, grid, q, p, dt)
            ledger.record(rec, state)
            w = state.y / state.rho
            w_min = min(w_min, float(w.min()))
            w_max = max(w_max, float(w.max()))
            if abs(state.t - next_stop) < 1e-13:
                snapshots.append((next_stop, state.copy()))
    else:
        snapshots.append((0.0, state.copy()))
    report = MaxPrincipleReport(w_min0, w_max0, w_min, w_max)
    return RunResult(final=state, snapshots=snapshots, ledger=ledger,
                     max_principle=report, scheme=scheme)


def exact_profile(fan, xs: np.ndarray, t: float, p: PressureLaw):
    """Sample an exact wave fan at cell centers xs and time t > 0.
    Returns (rho, v) arrays."""
    rho = np.empty_like(xs, dtype=float)
    v = np.empty_like(xs, dtype=float)
    for i, x in enumerate(xs):
        s = sample(fan, x / t)
        rho[i] = s.rho
        v[i] = s.v
    return rho, v


def l1_error_rho(result: RunResult, fan, grid: SimGrid, t: float,
                 p: PressureLaw) -> float:
    """L1 distance between the numerical density at time t (must be a
    snapshot time) and the exact self-similar profile."""
    for ts, snap in result.snapshots:
        if abs(ts - t) < 1e-12:
            exact_rho, _ = exact_profile(fan, grid.centers(), t, p)
            return float(np.abs(snap.rho - exact_rho).sum() * grid.dx)
    raise ValueError(f"no snapshot at t={t}")
