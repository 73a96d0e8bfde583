"""Strictly monotone functions on finite closed intervals.

A function is screened (not proven) monotone on a dense grid, its
direction and codomain are detected from the endpoints, and it can be
inverted pointwise by a bracketing bisection that never leaves the
domain interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, NoConvergence, NonMonotone, OutOfCodomain
from .expr import Expression

DEFAULT_GRID_SIZE = 1024
DEFAULT_INVERSION_TOL = 1e-12
ITERATION_CAP = 200

Value = Union[float, np.ndarray]


@dataclass(frozen=True)
class IntervalDomain:
    """Finite closed interval [a, b] with a < b."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("interval endpoints must be finite")
        if not self.a < self.b:
            raise ValueError(f"invalid interval: need a < b, got [{self.a}, {self.b}]")


@dataclass(frozen=True)
class MonotoneFunction:
    """A continuous strictly monotone function of ``x`` on a finite interval.

    ``direction`` is +1 for increasing, -1 for decreasing; ``codomain``
    is (min, max) of the endpoint values.  ``screening`` records how
    monotonicity was checked.
    """

    body: Expression
    domain: IntervalDomain
    direction: int
    codomain: tuple[float, float]
    screening: str

    def __call__(self, x: Value) -> Value:
        out = self.body.evaluate({"x": x})
        if isinstance(x, np.ndarray):
            return np.broadcast_to(np.asarray(out, dtype=float), np.shape(x))
        return out


def build(
    body: Expression,
    domain: IntervalDomain,
    grid_size: int = DEFAULT_GRID_SIZE,
) -> MonotoneFunction:
    """Screen ``body`` for strict monotonicity on ``domain`` and package it.

    Screening samples ``grid_size`` equispaced points and additionally
    checks the sign of the symbolic derivative on the same grid when that
    derivative is evaluable.  Raises NonMonotone with witness intervals
    when the ordering flips or ties.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    xs = np.linspace(domain.a, domain.b, grid_size)
    vals = np.broadcast_to(
        np.asarray(body.evaluate({"x": xs}), dtype=float), xs.shape
    )
    diffs = np.diff(vals)
    up = np.flatnonzero(diffs > 0)
    down = np.flatnonzero(diffs < 0)

    def _pair(i: int) -> tuple[float, float]:
        return (float(xs[i]), float(xs[i + 1]))

    if len(up) and len(down):
        raise NonMonotone(
            "ordering flips on the sampling grid: increasing on "
            f"[{xs[up[0]]:.12g}, {xs[up[0] + 1]:.12g}], decreasing on "
            f"[{xs[down[0]]:.12g}, {xs[down[0] + 1]:.12g}]",
            increasing=_pair(int(up[0])),
            decreasing=_pair(int(down[0])),
        )
    if len(up) + len(down) < len(diffs):
        tie = int(np.flatnonzero(diffs == 0)[0])
        raise NonMonotone(
            f"not strictly monotone: equal values at x={xs[tie]:.12g} "
            f"and x={xs[tie + 1]:.12g}",
            increasing=_pair(int(up[0])) if len(up) else None,
            decreasing=_pair(int(down[0])) if len(down) else None,
        )
    direction = 1 if len(up) else -1

    # second screen: sign of the symbolic derivative on the same grid
    note = "derivative sign check applied"
    try:
        deriv = np.asarray(body.diff("x").evaluate({"x": xs}), dtype=float)
    except DomainError:
        note = "derivative sign check skipped (domain error)"
    else:
        bad = np.flatnonzero(direction * np.broadcast_to(deriv, xs.shape) < 0)
        if len(bad):
            k = min(int(bad[0]), grid_size - 2)
            flip, trend = _pair(k), _pair(0)
            raise NonMonotone(
                f"derivative changes sign near x={xs[bad[0]]:.12g}",
                increasing=trend if direction > 0 else flip,
                decreasing=flip if direction > 0 else trend,
            )

    fa, fb = float(vals[0]), float(vals[-1])
    codomain = (min(fa, fb), max(fa, fb))
    screening = f"screened, not proven: {grid_size}-point grid, {note}"
    return MonotoneFunction(body, domain, direction, codomain, screening)


def invert(
    f: MonotoneFunction, y: Value, tol: float = DEFAULT_INVERSION_TOL
) -> Value:
    """Solve f(x) = y for x in the domain, to |f(x) - y| <= tol*(1+|y|).

    Bracketing bisection; the bracket is valid because f is monotone and
    y lies in the codomain.  Accepts a scalar or an array of targets.
    Values exactly at the codomain endpoints map to the corresponding
    domain endpoint.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    scalar = np.ndim(y) == 0
    yv = np.atleast_1d(np.asarray(y, dtype=float)).copy()
    c, d = f.codomain
    slack = tol * (1.0 + max(abs(c), abs(d)))
    outside = (yv < c - slack) | (yv > d + slack)
    if np.any(outside):
        bad = float(yv[outside][0])
        raise OutOfCodomain(
            f"target {bad!r} outside codomain [{c!r}, {d!r}] (slack {slack:.3g})"
        )
    np.clip(yv, c, d, out=yv)

    a, b = f.domain.a, f.domain.b
    at_min, at_max = (a, b) if f.direction > 0 else (b, a)
    out = np.empty_like(yv)
    done = np.zeros(yv.shape, dtype=bool)
    hit = yv == c
    out[hit] = at_min
    done |= hit
    hit = yv == d
    out[hit] = at_max
    done |= hit

    lo = np.full_like(yv, a)
    hi = np.full_like(yv, b)
    s = float(f.direction)
    resid_tol = tol * (1.0 + np.abs(yv))
    iterations = 0
    while not done.all():
        if iterations >= ITERATION_CAP:
            raise NoConvergence(
                f"inversion did not reach tolerance {tol!r} within "
                f"{ITERATION_CAP} bisections (tol below achievable precision?)"
            )
        iterations += 1
        idx = np.flatnonzero(~done)
        mid = 0.5 * (lo[idx] + hi[idx])
        fm = np.broadcast_to(np.asarray(f(mid), dtype=float), mid.shape)
        ok = np.abs(fm - yv[idx]) <= resid_tol[idx]
        out[idx[ok]] = mid[ok]
        done[idx[ok]] = True
        rest = ~ok
        below = s * fm[rest] < s * yv[idx[rest]]
        lo[idx[rest][below]] = mid[rest][below]
        hi[idx[rest][~below]] = mid[rest][~below]
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class InverseFunction:
    """Pointwise evaluator of f^{-1} on the codomain of ``source``.

    Shares the direction of ``source`` (a function and its inverse are
    both increasing or both decreasing).
    """

    source: MonotoneFunction
    tol: float = DEFAULT_INVERSION_TOL

    @property
    def domain(self) -> IntervalDomain:
        return IntervalDomain(*self.source.codomain)

    @property
    def codomain(self) -> tuple[float, float]:
        return (self.source.domain.a, self.source.domain.b)

    @property
    def direction(self) -> int:
        return self.source.direction

    def __call__(self, y: Value) -> Value:
        return invert(self.source, y, self.tol)


def inverse_as_function(
    f: MonotoneFunction, tol: float = DEFAULT_INVERSION_TOL
) -> InverseFunction:
    """The inverse of ``f`` as an evaluator on [c, d]."""
    return InverseFunction(f, tol)
