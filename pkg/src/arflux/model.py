"""Aw-Rascle "second order" traffic model: states, pressure law, fluxes,
eigenstructure, Lax curves and Riemann invariants.

The system in conservative variables (rho, y), y = rho*(v + p(rho)), is

    rho_t + (rho*v)_x = 0
    y_t   + (y*v)_x   = 0

with a pressure p such that p(0)=0, p'>0 and rho -> rho*p(rho) strictly
convex.  All units are dimensionless.  Vacuum (rho = 0) is excluded: the
system loses strict hyperbolicity there.
"""

from dataclasses import dataclass
from typing import NamedTuple

from .errors import NegativeVelocity

#: Densities at or below this are treated as vacuum and rejected.
RHO_MIN = 1e-10

#: Negative velocities within this tolerance are clamped to zero
#: (round-off guard when states are reconstructed from w - p(rho)).
V_CLAMP = 1e-12


@dataclass(frozen=True)
class PressureLaw:
    """Power-family pressure p(rho) = rho**gamma, gamma >= 1.

    gamma >= 1 guarantees the three structural hypotheses: p(0) = 0,
    p' > 0 on rho > 0 and strict convexity of rho*p(rho).  The methods
    accept scalars or numpy arrays.
    """

    gamma: float = 1.0

    def __post_init__(self):
        if not self.gamma >= 1.0:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")

    def __call__(self, rho):
        return rho ** self.gamma

    def deriv(self, rho):
        return self.gamma * rho ** (self.gamma - 1.0)

    def deriv2(self, rho):
        return self.gamma * (self.gamma - 1.0) * rho ** (self.gamma - 2.0)

    def inverse(self, value):
        """rho with p(rho) = value (p is strictly increasing)."""
        return value ** (1.0 / self.gamma)

    def sonic_density(self, w):
        """rho solving p(rho) + rho*p'(rho) = w.

        This is where lambda_1 vanishes on the curve v = w - p(rho), and
        also the maximizer of rho*(w - p(rho)).  Closed form for the
        power family: ((1+gamma)*rho**gamma = w).
        """
        return (w / (1.0 + self.gamma)) ** (1.0 / self.gamma)


@dataclass(frozen=True)
class StatePV:
    """Traffic state in primitive coordinates: density rho > 0, speed v >= 0."""

    rho: float
    v: float

    def __post_init__(self):
        if not self.rho > RHO_MIN:
            raise ValueError(f"density {self.rho} is at or below vacuum cutoff")
        if self.v < 0.0:
            if self.v < -V_CLAMP:
                raise ValueError(f"negative velocity {self.v}")
            object.__setattr__(self, "v", 0.0)


@dataclass(frozen=True)
class StateRY:
    """Traffic state in conserved coordinates (rho, y), y = rho*(v + p(rho))."""

    rho: float
    y: float

    def __post_init__(self):
        if not self.rho > RHO_MIN:
            raise ValueError(f"density {self.rho} is at or below vacuum cutoff")
        if self.y < 0.0:
            raise ValueError(f"negative generalized momentum {self.y}")


class Flux2(NamedTuple):
    """Flux pair (rho*v, rho*v*(v + p(rho)))."""

    f1: float
    f2: float


def to_conserved(s: StatePV, p: PressureLaw) -> StateRY:
    """(rho, v) -> (rho, y) with y = rho*(v + p(rho))."""
    return StateRY(s.rho, s.rho * (s.v + p(s.rho)))


def to_primitive(s: StateRY, p: PressureLaw) -> StatePV:
    """(rho, y) -> (rho, v) with v = y/rho - p(rho).

    Raises NegativeVelocity if y < rho*p(rho) beyond 1e-12.
    """
    v = s.y / s.rho - p(s.rho)
    if v < -1e-12:
        raise NegativeVelocity(f"y={s.y} < rho*p(rho)={s.rho * p(s.rho)}")
    return StatePV(s.rho, max(v, 0.0))


def flux(s: StatePV, p: PressureLaw) -> Flux2:
    f1 = s.rho * s.v
    return Flux2(f1, f1 * (s.v + p(s.rho)))


def eigenvalues(s: StatePV, p: PressureLaw):
    """(lambda_1, lambda_2) = (v - rho*p'(rho), v)."""
    return s.v - s.rho * p.deriv(s.rho), s.v


def lax1_velocity(rho: float, s0: StatePV, p: PressureLaw) -> float:
    """Velocity on the 1-Lax curve through s0 at density rho:
    v0 + p(rho0) - p(rho).  May be negative; callers check admissibility."""
    return s0.v + p(s0.rho) - p(rho)


def lax2_velocity(rho: float, s0: StatePV) -> float:
    """Velocity on the 2-Lax curve through s0: constant v0."""
    return s0.v


def riemann_invariants(s: StatePV, p: PressureLaw):
    """(z, w) = (v, v + p(rho))."""
    return s.v, s.v + p(s.rho)


def w_of(s: StatePV, p: PressureLaw) -> float:
    """Second Riemann invariant w = v + p(rho)."""
    return s.v + p(s.rho)
