"""Bracketed bisection.

All nonlinear inversions in this package are monotone (or concave with a
known maximizer), so plain bisection with a guaranteed bracket is the
method of record.  Closed-form fast paths exist for the power pressure
family; they are cross-checked against this routine in the tests.
"""

from .errors import BracketError

MAX_ITER = 200
RESIDUAL_TOL = 1e-12


def bisect_root(f, a, b, residual_tol=RESIDUAL_TOL, max_iter=MAX_ITER):
    """Root of f in [a, b] by bisection.

    f(a) and f(b) must have opposite (or zero) signs.  Iterates until
    |f(mid)| <= residual_tol or the interval is exhausted; hard cap of
    max_iter halvings.
    """
    fa = f(a)
    fb = f(b)
    if abs(fa) <= residual_tol:
        return a
    if abs(fb) <= residual_tol:
        return b
    if fa * fb > 0.0:
        raise BracketError(f"no sign change on [{a}, {b}]: f={fa}, {fb}")
    for _ in range(max_iter):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if abs(fm) <= residual_tol or (b - a) <= 4e-16 * max(1.0, abs(mid)):
            return mid
        if fa * fm <= 0.0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def expand_bracket_up(f, hi, grow=4.0, max_expand=200):
    """Grow hi until f(hi) > 0, assuming f is eventually positive."""
    for _ in range(max_expand):
        if f(hi) > 0.0:
            return hi
        hi *= grow
    raise BracketError("could not bracket a sign change while expanding up")


def shrink_bracket_down(f, lo, max_shrink=200):
    """Shrink lo toward 0 until f(lo) < 0, assuming f -> -inf at 0+."""
    for _ in range(max_shrink):
        if f(lo) < 0.0:
            return lo
        lo *= 0.25
    raise BracketError("could not bracket a sign change while shrinking down")
