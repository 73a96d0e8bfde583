"""Adaptive quadrature oracle and anchored antiderivatives.

The integrator applies an embedded 7-point Gauss / 15-point Kronrod pair
per panel and bisects any panel whose error estimate exceeds its share of
the tolerance budget (shares are proportional to subinterval length).
Panels whose estimate falls below the roundoff floor of the whole
integral are accepted as is, so mildly singular integrands such as
t^(1/3) at 0 still converge instead of subdividing forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError, MaxSubdivision
from .expr import Expression

DEFAULT_TOL = 1e-10
MAX_DEPTH = 60
_EPS = float(np.finfo(float).eps)

Value = Union[float, np.ndarray]
Evaluator = Callable[[Value], Value]

# 15-point Kronrod abscissae on [-1, 1] (positive half) and weights;
# every odd-indexed node is a 7-point Gauss node.
_XGK = np.array([
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
])
_WGK = np.array([
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278,
])
_WG = np.array([
    0.1294849661688697, 0.2797053914892767,
    0.3818300505051189, 0.4179591836734694,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 ascending nodes
_WEIGHTS_K = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_IDX = np.arange(1, 15, 2)
_WEIGHTS_G = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


def _panel(g: Evaluator, a: float, b: float) -> tuple[float, float, float]:
    """Kronrod value, |Kronrod - Gauss| error estimate, and Kronrod of |g|."""
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    nodes = center + half * _NODES
    with np.errstate(all="ignore"):
        vals = np.broadcast_to(np.asarray(g(nodes), dtype=float), nodes.shape)
    if not np.all(np.isfinite(vals)):
        bad = nodes[~np.isfinite(vals)][0]
        raise DomainError(f"integrand non-finite at {bad!r}")
    k15 = half * float(_WEIGHTS_K @ vals)
    g7 = half * float(_WEIGHTS_G @ vals[_GAUSS_IDX])
    resabs = half * float(_WEIGHTS_K @ np.abs(vals))
    return k15, abs(k15 - g7), resabs


def integrate(
    g: Evaluator, interval: tuple[float, float], tol: float = DEFAULT_TOL
) -> QuadratureResult:
    """Integrate ``g`` over the oriented ``interval`` to absolute ``tol``.

    ``g`` must accept numpy arrays.  Reversed bounds flip the sign of the
    result exactly.  Raises MaxSubdivision past depth 60.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    u, v = float(interval[0]), float(interval[1])
    if u == v:
        return QuadratureResult(0.0, 0.0, 0)
    if v < u:
        r = integrate(g, (v, u), tol)
        return QuadratureResult(-r.value, r.error_estimate, r.evaluations)

    value = 0.0
    err_total = 0.0
    evaluations = 15
    k15, err, resabs = _panel(g, u, v)
    # below this, panel estimates are roundoff of the whole integral
    floor = 50.0 * _EPS * resabs
    stack = [(u, v, tol, 0, k15, err)]
    while stack:
        a, b, budget, depth, k15, err = stack.pop()
        if err <= budget or err <= floor:
            value += k15
            err_total += err
            continue
        if depth >= MAX_DEPTH:
            raise MaxSubdivision(
                f"panel [{a!r}, {b!r}] still above budget at depth {MAX_DEPTH}; "
                "non-integrable-looking singularity or tol too tight"
            )
        mid = 0.5 * (a + b)
        for lo, hi in ((a, mid), (mid, b)):
            k, e, _ = _panel(g, lo, hi)
            evaluations += 15
            stack.append((lo, hi, 0.5 * budget, depth + 1, k, e))
    return QuadratureResult(value, err_total, evaluations)


@dataclass(frozen=True)
class Antiderivative:
    """An antiderivative F normalized to vanish at ``anchor``.

    Either ``expression`` (exact form, shifted by its anchor value) or
    ``integrand`` (quadrature-backed: F(x) = integral of f from anchor
    to x) is set, never both.
    """

    anchor: float
    expression: Expression | None = None
    integrand: Evaluator | None = None

    def __post_init__(self) -> None:
        if (self.expression is None) == (self.integrand is None):
            raise ValueError("provide exactly one of expression or integrand")

    @classmethod
    def exact(cls, expression: Expression, anchor: float) -> "Antiderivative":
        return cls(anchor=float(anchor), expression=expression)

    @classmethod
    def from_integrand(cls, integrand: Evaluator, anchor: float) -> "Antiderivative":
        return cls(anchor=float(anchor), integrand=integrand)


def antiderivative_at(F: Antiderivative, x: float, tol: float = DEFAULT_TOL) -> float:
    """F(x) under the F(anchor) = 0 normalization."""
    if F.expression is not None:
        at_x = F.expression.evaluate({"x": float(x)})
        at_anchor = F.expression.evaluate({"x": F.anchor})
        return float(at_x - at_anchor)
    return integrate(F.integrand, (F.anchor, float(x)), tol).value


def verify_exact_antiderivative(
    expression: Expression,
    f: Evaluator,
    interval: tuple[float, float],
    rtol: float = 1e-6,
    points: int = 17,
    h: float = 1e-5,
) -> None:
    """Spot-check that d/dx expression == f on an interior grid.

    Central finite differences at ``points`` interior points; raises
    InvalidAntiderivative when any point misses rtol*(1+|f|).
    """
    from .errors import InvalidAntiderivative

    a, b = float(interval[0]), float(interval[1])
    margin = max(h * 2.0, (b - a) * 1e-6)
    xs = np.linspace(a + margin, b - margin, points)
    up = np.asarray(expression.evaluate({"x": xs + h}), dtype=float)
    dn = np.asarray(expression.evaluate({"x": xs - h}), dtype=float)
    slope = (up - dn) / (2.0 * h)
    target = np.broadcast_to(np.asarray(f(xs), dtype=float), xs.shape)
    gap = np.abs(slope - target)
    bound = rtol * (1.0 + np.abs(target))
    if np.any(gap > bound):
        k = int(np.argmax(gap - bound))
        raise InvalidAntiderivative(
            f"derivative of the claimed antiderivative misses f at x={xs[k]!r}: "
            f"finite difference {slope[k]!r} vs f(x)={target[k]!r}"
        )
