"""Total-variation comparison of the two constrained solvers.

The TV of a wave fan in any of rho, v, y, w is the sum of the endpoint
jumps across its waves: each quantity is monotone along a 1-rarefaction
(v and w trivially, rho by the fan structure, and y = rho*w with w
constant along the 1-curve, hence monotone in rho), so rarefactions
contribute exactly |right - left|.

For every Riemann datum the conserving solver has at least as much TV in
rho, v and y as the density-only solver, and at most as much in w.
``random_campaign`` drives these four inequalities over seeded random
data and collects any violations (expected: none).
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .errors import VacuumIntermediate, ZeroRightVelocity
from .model import PressureLaw, StatePV, w_of
from .riemann import WaveFan, solve_rs1, solve_rs2

QUANTITIES = ("rho", "v", "y", "w")


def _extractor(quantity: str, p: PressureLaw) -> Callable[[StatePV], float]:
    if quantity == "rho":
        return lambda s: s.rho
    if quantity == "v":
        return lambda s: s.v
    if quantity == "y":
        return lambda s: s.rho * (s.v + p(s.rho))
    if quantity == "w":
        return lambda s: s.v + p(s.rho)
    raise ValueError(f"unknown quantity {quantity!r}")


def tv_of_fan(fan: WaveFan, quantity: str, p: PressureLaw) -> float:
    """Exact total variation of the fan in the given quantity."""
    value = _extractor(quantity, p)
    return sum(abs(value(w.right) - value(w.left)) for w in fan.waves)


@dataclass(frozen=True)
class TVReport:
    """TV of both constrained solutions in each of rho, v, y, w."""

    tv_rho_1: float
    tv_rho_2: float
    tv_v_1: float
    tv_v_2: float
    tv_y_1: float
    tv_y_2: float
    tv_w_1: float
    tv_w_2: float

    def inequality_residuals(self) -> dict:
        """Positive residual = inequality satisfied with margin.

        rho, v, y: conserving >= density-only;  w: conserving <= density-only.
        """
        return {
            "rho": self.tv_rho_1 - self.tv_rho_2,
            "v": self.tv_v_1 - self.tv_v_2,
            "y": self.tv_y_1 - self.tv_y_2,
            "w": self.tv_w_2 - self.tv_w_1,
        }


def compare_solvers(l: StatePV, r: StatePV, q: float, p: PressureLaw) -> TVReport:
    """TV of both constrained solutions; the four comparison inequalities
    are *not* enforced here (they are theorems the tests verify)."""
    fan1 = solve_rs1(l, r, q, p)
    fan2 = solve_rs2(l, r, q, p)
    return TVReport(
        tv_rho_1=tv_of_fan(fan1, "rho", p), tv_rho_2=tv_of_fan(fan2, "rho", p),
        tv_v_1=tv_of_fan(fan1, "v", p), tv_v_2=tv_of_fan(fan2, "v", p),
        tv_y_1=tv_of_fan(fan1, "y", p), tv_y_2=tv_of_fan(fan2, "y", p),
        tv_w_1=tv_of_fan(fan1, "w", p), tv_w_2=tv_of_fan(fan2, "w", p),
    )


@dataclass(frozen=True)
class Violation:
    index: int
    l: StatePV
    r: StatePV
    q: float
    quantity: str
    residual: float
    report: TVReport


def draw_datum(rng: np.random.Generator,
               rho_range: Tuple[float, float],
               v_range: Tuple[float, float],
               q_range: Tuple[float, float],
               p: PressureLaw) -> Tuple[StatePV, StatePV, float]:
    """One admissible random Riemann datum.  Draws are rejected (and
    redrawn) when the classical solution would reach vacuum, so the
    sequence is deterministic in the rng state."""
    while True:
        rho_l, rho_r = rng.uniform(*rho_range, size=2)
        v_l, v_r = rng.uniform(*v_range, size=2)
        q = rng.uniform(*q_range)
        l, r = StatePV(rho_l, v_l), StatePV(rho_r, v_r)
        if w_of(l, p) > r.v + 1e-9:  # avoid vacuum intermediates
            return l, r, q


def random_campaign(n: int, seed: int,
                    rho_range: Tuple[float, float] = (0.1, 5.0),
                    v_range: Tuple[float, float] = (0.1, 5.0),
                    q_range: Tuple[float, float] = (0.5, 5.0),
                    p: Optional[PressureLaw] = None,
                    tol: float = 1e-9,
                    invert: bool = False) -> List[Violation]:
    """Check the four TV inequalities on n seeded random Riemann data.

    Returns the violations found (expected empty).  ``invert`` flips the
    checks, a self-test knob proving the harness can fail.
    """
    p = p or PressureLaw()
    rng = np.random.default_rng(seed)
    violations: List[Violation] = []
    for i in range(n):
        l, r, q = draw_datum(rng, rho_range, v_range, q_range, p)
        try:
            report = compare_solvers(l, r, q, p)
        except (VacuumIntermediate, ZeroRightVelocity):
            continue
        for quantity, residual in report.inequality_residuals().items():
            bad = residual < -tol if not invert else residual > tol
            if bad:
                violations.append(Violation(i, l, r, q, quantity, residual, report))
    return violations
