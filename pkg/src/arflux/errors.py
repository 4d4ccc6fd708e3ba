"""Exception types shared across the package."""


class ArfluxError(Exception):
    """Base class for all arflux errors."""


class NegativeVelocity(ArfluxError):
    """Conserved state decodes to v < 0 beyond tolerance."""


class VacuumIntermediate(ArfluxError):
    """The 1-wave from the left state reaches (near-)vacuum before
    meeting the right state's 2-curve: w_l <= v_r."""


class ZeroRightVelocity(ArfluxError):
    """The 2-curve through the right state carries zero flux, so the
    constrained trace q/v_r is undefined."""


class DegenerateSpeeds(ArfluxError):
    """All characteristic speeds are (numerically) zero; no CFL step exists."""


class NonphysicalCell(ArfluxError):
    """A finite-volume cell no longer decodes to a valid state."""

    def __init__(self, index, message):
        super().__init__(f"cell {index}: {message}")
        self.index = index


class SolverContradiction(ArfluxError):
    """An internal consistency check of a constrained solver failed.

    These checks guard facts that are mathematically guaranteed (e.g. the
    flux-level set has two roots whenever the constraint is violated), so
    this error indicates a bug or data far outside the admissible domain.
    """


class BracketError(ArfluxError):
    """A root bracket could not be established or did not change sign."""
