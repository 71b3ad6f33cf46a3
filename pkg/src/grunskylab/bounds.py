"""Auxiliary objectives of the two difference bounds and an audit of each estimate.

``phi(u, v) = sqrt(1 - u^2 - 3 v^2) / sqrt(5) + u^3 / 6`` on
``0 <= u <= 1, 0 <= v <= sqrt((1 - u^2) / 3)``, maximal value 1/sqrt(5).

``psi(s, t) = sqrt(1 - s - 3 t) / sqrt(7) + t / 2 + s^2 / 12`` on
``0 <= s <= 1, 0 <= t <= (1 - s) / 3``, maximal value 1/sqrt(7).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coefficients import CoefficientError, log_coefficients, odd_grunsky
from .series import Series

__all__ = [
    "BoundObjective",
    "ChainReport",
    "ChainStep",
    "DomainError",
    "MaxResult",
    "PHI",
    "PSI",
    "chain_slacks",
    "maximize",
    "phi",
    "psi",
]

# Rounding overshoot tolerated outside the closed domains.
RADICAND_TOL = 1e-12
# Values within this of the incumbent maximum count as ties.
TIE_TOL = 1e-12

SQRT5 = math.sqrt(5)
SQRT7 = math.sqrt(7)


class DomainError(ValueError):
    """Point outside an objective's domain beyond rounding tolerance."""


def _root(r):
    return np.sqrt(np.maximum(r, 0.0))


def _phi_values(u, v):
    return _root(1 - u**2 - 3 * v**2) / SQRT5 + u**3 / 6


def _psi_values(s, t):
    return _root(1 - s - 3 * t) / SQRT7 + t / 2 + s**2 / 12


@dataclass(frozen=True)
class BoundObjective:
    """A function on ``{(x, y): x_lo <= x <= x_hi, 0 <= y <= y_upper(x)}``.

    ``func`` and ``y_upper`` must accept numpy arrays.
    """

    id: str
    func: Callable
    y_upper: Callable
    x_lo: float = 0.0
    x_hi: float = 1.0
    description: str = ""

    def contains(self, x: float, y: float, tol: float = 0.0) -> bool:
        if not (self.x_lo - tol <= x <= self.x_hi + tol):
            return False
        xc = min(max(x, self.x_lo), self.x_hi)
        return -tol <= y <= float(self.y_upper(xc)) + tol

    def __call__(self, x, y):
        return self.func(x, y)


PHI = BoundObjective(
    "phi",
    _phi_values,
    lambda u: _root((1 - u**2) / 3),
    description="0 <= u <= 1, 0 <= v <= sqrt((1 - u^2)/3)",
)
PSI = BoundObjective(
    "psi",
    _psi_values,
    lambda s: np.maximum(1 - s, 0.0) / 3,
    description="0 <= s <= 1, 0 <= t <= (1 - s)/3",
)
OBJECTIVES = {"phi": PHI, "psi": PSI}


def phi(u: float, v: float) -> float:
    r = 1 - u * u - 3 * v * v
    if not (-RADICAND_TOL <= u <= 1 + RADICAND_TOL and v >= -RADICAND_TOL) or r < -RADICAND_TOL:
        raise DomainError(f"({u!r}, {v!r}) lies outside the domain of phi")
    return math.sqrt(max(r, 0.0)) / SQRT5 + u**3 / 6


def psi(s: float, t: float) -> float:
    r = 1 - s - 3 * t
    if not (-RADICAND_TOL <= s <= 1 + RADICAND_TOL and t >= -RADICAND_TOL) or r < -RADICAND_TOL:
        raise DomainError(f"({s!r}, {t!r}) lies outside the domain of psi")
    return math.sqrt(max(r, 0.0)) / SQRT7 + t / 2 + s * s / 12


@dataclass(frozen=True)
class MaxResult:
    argmax: tuple[float, float]
    value: float
    grid_step: float
    refinement_rounds: int

    def to_dict(self) -> dict:
        return {
            "argmax": list(self.argmax),
            "value": self.value,
            "grid_step": self.grid_step,
            "refinement_rounds": self.refinement_rounds,
        }


def _axis(lo: float, hi: float, h: float) -> np.ndarray:
    n = int(math.floor((hi - lo) / h + 1e-9))
    pts = lo + h * np.arange(n + 1)
    if hi - pts[-1] > 1e-15:
        pts = np.append(pts, hi)
    return pts


def _candidates(obj: BoundObjective, x0, x1, y0, y1, h):
    """Feasible lattice points of the box plus the upper boundary curve inside it."""
    x0, x1 = max(x0, obj.x_lo), min(x1, obj.x_hi)
    y0 = max(y0, 0.0)
    xs = _axis(x0, x1, h)
    ys = _axis(y0, y1, h) if y1 >= y0 else np.array([y0])
    yu = np.asarray(obj.y_upper(xs), dtype=float) * np.ones_like(xs)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    mask = Y <= yu[:, None]
    px, py = X[mask], Y[mask]
    edge = (yu >= y0) & (yu <= y1)
    px = np.concatenate((px, xs[edge]))
    py = np.concatenate((py, yu[edge]))
    return px, py


def _best(obj: BoundObjective, px, py):
    vals = np.asarray(obj.func(px, py), dtype=float) * np.ones_like(px)
    vmax = vals.max()
    tied = np.flatnonzero(vals >= vmax - TIE_TOL)
    # lexicographically smallest (x, y) among the tied points
    k = tied[np.lexsort((py[tied], px[tied]))[0]]
    return float(px[k]), float(py[k]), float(vals[k])


def maximize(objective: BoundObjective | str, grid_step: float = 1e-3, rounds: int = 6) -> MaxResult:
    """Dense grid scan over the closed domain, then ``rounds`` of 10x refinement.

    Each refinement scans a box of half-width equal to the previous step
    around the incumbent.  Ties (within ``TIE_TOL``) go to the
    lexicographically smallest point, so the result is independent of scan
    order.
    """
    obj = OBJECTIVES[objective] if isinstance(objective, str) else objective
    if not 0 < grid_step <= 0.1:
        raise ValueError(f"grid_step must lie in (0, 0.1], got {grid_step!r}")
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds!r}")
    h = grid_step
    y_top = float(np.max(obj.y_upper(_axis(obj.x_lo, obj.x_hi, h))))
    px, py = _candidates(obj, obj.x_lo, obj.x_hi, 0.0, y_top, h)
    bx, by, bv = _best(obj, px, py)
    for _ in range(rounds):
        cx, cy = _candidates(obj, bx - h, bx + h, by - h, by + h, h / 10)
        cx = np.append(cx, bx)
        cy = np.append(cy, by)
        h /= 10
        bx, by, bv = _best(obj, cx, cy)
    value = float(np.asarray(obj.func(np.array([bx]), np.array([by])), dtype=float).ravel()[0])
    return MaxResult((bx, by), value, h, rounds)


@dataclass(frozen=True)
class ChainStep:
    chain: int
    step: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {
            "chain": self.chain,
            "step": self.step,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
        }


@dataclass(frozen=True)
class ChainReport:
    steps: tuple[ChainStep, ...]
    # |equality step| residuals, one per chain
    equality_residuals: tuple[float, float]

    @property
    def min_slack(self) -> float:
        return min(s.slack for s in self.steps)

    def chain(self, k: int) -> list[ChainStep]:
        return [s for s in self.steps if s.chain == k]

    def to_records(self) -> list[dict]:
        return [s.to_dict() for s in self.steps]


def _chain(k: int, links: list[tuple[str, float]]) -> list[ChainStep]:
    return [
        ChainStep(k, f"{a} <= {b}", va, vb)
        for (a, va), (b, vb) in zip(links, links[1:])
    ]


def chain_slacks(f: Series) -> ChainReport:
    """Evaluate every link of both estimates on a concrete function.

    Each link is an inequality ``lhs <= rhs``; the two equality links (the
    substitution of omega33, and the collapse of ``gamma4 - omega11 gamma3``)
    are reported as residuals instead.
    """
    if f.order < 16:
        raise CoefficientError(f"chain audit needs series order >= 16, got {f.order}")
    t = odd_grunsky(f)
    lc = log_coefficients(f, 4)
    g2, g3, g4 = lc[2], lc[3], lc[4]
    w11, w13, w15, w17 = t[1, 1], t[1, 3], t[1, 5], t[1, 7]
    m11, m13, m15, m17 = abs(w11), abs(w13), abs(w15), abs(w17)

    # first estimate
    d31 = g3 - w11 * g2
    d31_sub = w15 - w11**3 / 6
    links1 = [
        ("|g3|-|g2|", abs(g3) - abs(g2)),
        ("|g3|-|w11||g2|", abs(g3) - m11 * abs(g2)),
        ("|g3-w11*g2|", abs(d31)),
        ("|w15|+|w11|^3/6", m15 + m11**3 / 6),
        ("Phi(|w11|,|w13|)", phi(m11, m13)),
        ("1/sqrt5", 1 / SQRT5),
    ]
    steps1 = _chain(1, links1)
    # |g3 - w11 g2| = |w15 - w11^3/6| is an equality; audit it separately
    res1 = abs(d31 - d31_sub)

    # second estimate
    d43 = g4 - w11 * g3
    d43_sub = w17 + w13**2 / 2 - w11**4 / 12
    s, tt = m11**2, m13**2
    mid = math.sqrt(max(1 - s - 3 * tt - 5 * m15**2, 0.0)) / SQRT7 + tt / 2 + s**2 / 12
    links2 = [
        ("|g4|-|g3|", abs(g4) - abs(g3)),
        ("|g4|-|w11||g3|", abs(g4) - m11 * abs(g3)),
        ("|g4-w11*g3|", abs(d43)),
        ("|w17|+|w13|^2/2+|w11|^4/12", m17 + tt / 2 + s**2 / 12),
        ("sqrt(1-s-3t-5|w15|^2)/sqrt7+t/2+s^2/12", mid),
        ("Psi(|w11|^2,|w13|^2)", psi(s, tt)),
        ("1/sqrt7", 1 / SQRT7),
    ]
    steps2 = _chain(2, links2)
    res2 = abs(d43 - d43_sub)
    return ChainReport(tuple(steps1 + steps2), (res1, res2))
