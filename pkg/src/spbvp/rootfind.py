"""Scalar root finding on a bracket.

All implicit mesh relations in this package reduce to scalar root problems
on a known bracket.  One solver is used everywhere: Newton iteration
safeguarded by bisection, absolute residual tolerance 1e-12, at most 200
iterations.
"""
from __future__ import annotations

from typing import Callable

__all__ = ["BracketError", "solve_scalar"]

DEFAULT_TOL = 1e-12
DEFAULT_MAXITER = 200


class BracketError(ValueError):
    """The supplied interval does not bracket a sign change."""


def solve_scalar(
    f: Callable[[float], float],
    a: float,
    b: float,
    *,
    fprime: Callable[[float], float] | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAXITER,
) -> float:
    """Solve f(x) = 0 for x in [a, b].

    f(a) and f(b) must have opposite signs (or one endpoint must already be
    a root).  When ``fprime`` is given, Newton steps are taken whenever the
    iterate stays inside the current bracket; otherwise the step falls back
    to bisection.  Convergence means |f(x)| <= tol or the bracket has
    collapsed to floating-point resolution.
    """
    if not a < b:
        raise ValueError(f"empty bracket: a={a!r}, b={b!r}")
    fa = f(a)
    fb = f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise BracketError(f"no sign change on [{a!r}, {b!r}]: f(a)={fa!r}, f(b)={fb!r}")

    lo, hi = a, b
    flo = fa
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = f(x)
        if abs(fx) <= tol:
            return x
        if (fx > 0.0) == (flo > 0.0):
            lo, flo = x, fx
        else:
            hi = x
        # Newton candidate; keep it only if it lands strictly inside the bracket.
        x_new = None
        if fprime is not None:
            dfx = fprime(x)
            if dfx != 0.0:
                cand = x - fx / dfx
                if lo < cand < hi:
                    x_new = cand
        if x_new is None:
            x_new = 0.5 * (lo + hi)
        if x_new == x or not lo < x_new < hi:
            # Bracket collapsed to floating-point resolution.
            break
        x = x_new
    raise RuntimeError(
        f"root iteration stalled on [{a!r}, {b!r}]: last residual {fx!r} "
        f"exceeds tolerance {tol!r}"
    )
