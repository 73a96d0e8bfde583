"""Riemann-Stieltjes integration and the two identities built on it.

The integral of g against an integrator phi is the limit of midpoint-
tagged sums sum_i g(m_i) * (phi(x_{i+1}) - phi(x_i)) over uniformly
refined partitions.  Refinement stops once two successive levels agree
to the scheme tolerance.  Integrators must pass a (weak) monotonicity
screen or be declared of bounded variation by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import BVRequired, NoConvergence
from .monotone import MonotoneFunction, invert, inverse_as_function
from .quadrature import DEFAULT_TOL as DEFAULT_QUAD_TOL
from .quadrature import integrate

Value = Union[float, np.ndarray]
Evaluator = Callable[[Value], Value]

_CHUNK = 1 << 20


@dataclass(frozen=True)
class RefinementScheme:
    """Uniform refinement ladder for Stieltjes sums."""

    initial_panels: int = 16
    refinement_factor: int = 2
    max_levels: int = 24
    tol: float = 1e-8

    def __post_init__(self) -> None:
        if self.initial_panels < 1:
            raise ValueError("initial_panels must be positive")
        if self.refinement_factor < 2:
            raise ValueError("refinement_factor must be at least 2")
        if self.max_levels < 1:
            raise ValueError("max_levels must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


DEFAULT_SCHEME = RefinementScheme()


@dataclass(frozen=True)
class StieltjesResult:
    value: float
    levels: int
    panels: int
    total_variation: float | None = None


def _as_array(fn: Evaluator, x: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(fn(x), dtype=float), x.shape)


def _level_sum(g: Evaluator, phi: Evaluator, u: float, v: float, n: int) -> float:
    """Midpoint-tagged sum over n equal panels, chunked to bound memory."""
    h = (v - u) / n
    total = 0.0
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        edges = u + h * np.arange(start, stop + 1)
        edges[0] = u if start == 0 else edges[0]
        if stop == n:
            edges[-1] = v
        mids = u + h * (np.arange(start, stop) + 0.5)
        increments = np.diff(_as_array(phi, edges))
        total += float(np.sum(_as_array(g, mids) * increments))
    return total


def _grid_variation(phi: Evaluator, u: float, v: float, n: int) -> float:
    """Total variation of phi estimated on the n-panel grid."""
    h = (v - u) / n
    total = 0.0
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        edges = u + h * np.arange(start, stop + 1)
        total += float(np.sum(np.abs(np.diff(_as_array(phi, edges)))))
    return total


def screen_integrator(
    phi: Evaluator, interval: tuple[float, float], grid_size: int = 1024
) -> int:
    """Check phi is (weakly) monotone on a grid; ties are fine.

    Returns the direction (+1, -1, or 0 for constant).  Raises BVRequired
    when the ordering flips, since the sums are then only defined for
    bounded-variation integrators the caller must vouch for.
    """
    u, v = float(interval[0]), float(interval[1])
    lo, hi = (u, v) if u <= v else (v, u)
    xs = np.linspace(lo, hi, grid_size)
    vals = _as_array(phi, xs)
    diffs = np.diff(vals)
    has_up = bool(np.any(diffs > 0))
    has_down = bool(np.any(diffs < 0))
    if has_up and has_down:
        i = int(np.flatnonzero(diffs > 0)[0])
        j = int(np.flatnonzero(diffs < 0)[0])
        raise BVRequired(
            "integrator is not monotone on the sampling grid "
            f"(rises on [{xs[i]:.12g}, {xs[i + 1]:.12g}], falls on "
            f"[{xs[j]:.12g}, {xs[j + 1]:.12g}]); "
            "pass it as bounded-variation explicitly if that is intended"
        )
    return 1 if has_up else (-1 if has_down else 0)


def rs_integral_detailed(
    g: Evaluator,
    phi: Evaluator,
    interval: tuple[float, float],
    scheme: RefinementScheme = DEFAULT_SCHEME,
    assume_bv: bool = False,
) -> StieltjesResult:
    """Like :func:`rs_integral` but reports convergence level and panel
    count, plus a grid estimate of the integrator's total variation when
    ``assume_bv`` was used."""
    u, v = float(interval[0]), float(interval[1])
    if u == v:
        return StieltjesResult(0.0, 0, 0, 0.0 if assume_bv else None)
    if v < u:
        r = rs_integral_detailed(g, phi, (v, u), scheme, assume_bv)
        return StieltjesResult(-r.value, r.levels, r.panels, r.total_variation)
    if not assume_bv:
        screen_integrator(phi, (u, v))

    n = scheme.initial_panels
    previous: float | None = None
    for level in range(1, scheme.max_levels + 1):
        current = _level_sum(g, phi, u, v, n)
        if previous is not None and abs(current - previous) <= scheme.tol:
            variation = _grid_variation(phi, u, v, n) if assume_bv else None
            return StieltjesResult(current, level, n, variation)
        previous = current
        n *= scheme.refinement_factor
    raise NoConvergence(
        f"Stieltjes sums did not stabilize to {scheme.tol!r} within "
        f"{scheme.max_levels} levels (integrator insufficiently regular "
        "or tol too tight)"
    )


def rs_integral(
    g: Evaluator,
    phi: Evaluator,
    interval: tuple[float, float],
    scheme: RefinementScheme = DEFAULT_SCHEME,
    assume_bv: bool = False,
) -> float:
    """Stieltjes integral of ``g`` against ``phi`` over the oriented interval."""
    return rs_integral_detailed(g, phi, interval, scheme, assume_bv).value


def ibp_residual(
    g: Evaluator,
    f: Evaluator,
    interval: tuple[float, float],
    scheme: RefinementScheme = DEFAULT_SCHEME,
    assume_bv: bool = False,
) -> float:
    """|integral g df + integral f dg - boundary term|.

    Integration by parts says the two Stieltjes integrals sum to
    f(x)g(x) - f(a)g(a); the residual is the numerical defect.
    """
    a, x = float(interval[0]), float(interval[1])
    if a == x:
        return 0.0
    g_df = rs_integral(g, f, (a, x), scheme, assume_bv)
    f_dg = rs_integral(f, g, (a, x), scheme, assume_bv)
    boundary = float(f(x)) * float(g(x)) - float(f(a)) * float(g(a))
    return abs(g_df + f_dg - boundary)


def change_of_variable_pair(
    f: MonotoneFunction,
    c: float,
    y: float,
    scheme: RefinementScheme = DEFAULT_SCHEME,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> tuple[float, float]:
    """Both sides of the change-of-variable identity for the inverse.

    lhs integrates the inverse evaluator over [c, y] with the quadrature
    oracle; rhs substitutes t = f(x) and evaluates the Stieltjes integral
    of x against f over the image interval.  The two agree up to the
    combined tolerances.
    """
    c, y = float(c), float(y)
    if c == y:
        return (0.0, 0.0)
    lhs = integrate(inverse_as_function(f), (c, y), quad_tol).value
    x_c = invert(f, c)
    x_y = invert(f, y)
    rhs = rs_integral(lambda x: x, f, (x_c, x_y), scheme)
    return (lhs, rhs)
