"""Logarithmic and Grunsky coefficients, and checks of the identities tying them.

Conventions::

    log(f(z)/z)                     = 2 sum_{n>=1} gamma_n z**n
    log((f(t) - f(z)) / (t - z))    = sum_{p,q>=0} omega[p, q] t**p z**q

The odd table belongs to ``f2(z) = sqrt(f(z**2))`` and only keeps
``omega[2p-1, 2q-1]`` (plus the row and column at index 0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .series import BiSeries, Series, bi_log, ser_log
from .zoo import sqrt_transform

__all__ = [
    "CoefficientError",
    "GrunskyTable",
    "LogCoeffs",
    "ResidualReport",
    "TestVector",
    "gamma_from_taylor",
    "grunsky_table",
    "log_coefficients",
    "odd_grunsky",
    "omega_bounds",
    "omega33_residual",
    "quadratic_form_slack",
    "verify_eq7",
    "verify_gamma_omega",
]

# Pre-symmetrization asymmetry above which a table is flagged.
ASYMMETRY_TOL = 1e-10
# Odd index range needed by the a_2..a_5 and gamma_2..gamma_4 relations.
ODD_PMAX = 7


class CoefficientError(ValueError):
    """Raised when a series is too short or otherwise unfit for a computation."""


def _require_normalized(f: Series) -> None:
    if not f.is_normalized():
        raise CoefficientError("series must be normalized: coeffs[0] == 0 and coeffs[1] == 1")


@dataclass(frozen=True, eq=False)
class LogCoeffs:
    gamma: np.ndarray  # gamma[0] is gamma_1

    @property
    def n_max(self) -> int:
        return self.gamma.size

    def __getitem__(self, n: int) -> complex:
        """1-based access: ``lc[n]`` is gamma_n."""
        if not 1 <= n <= self.n_max:
            raise IndexError(f"gamma_{n} outside 1..{self.n_max}")
        return complex(self.gamma[n - 1])


def log_coefficients(f: Series, n_max: int) -> LogCoeffs:
    """gamma_1..gamma_{n_max}; gamma_n depends on a_{n+1}, so ``f.order >= n_max + 1``."""
    _require_normalized(f)
    if n_max < 1:
        raise CoefficientError("n_max must be >= 1")
    if f.order < n_max + 1:
        raise CoefficientError(
            f"log coefficients up to n={n_max} need series order >= {n_max + 1}, got {f.order}"
        )
    L = ser_log(f.divide_by_z())
    g = np.array(L.coeffs[1 : n_max + 1]) / 2
    g.setflags(write=False)
    return LogCoeffs(g)


def gamma_from_taylor(a2: complex, a3: complex, a4: complex, a5: complex):
    """Closed forms for gamma_1..gamma_4 in terms of a_2..a_5."""
    g1 = a2 / 2
    g2 = (a3 - a2**2 / 2) / 2
    g3 = (a4 - a2 * a3 + a2**3 / 3) / 2
    g4 = (a5 - a2 * a4 - a3**2 / 2 + a2**2 * a3 - a2**4 / 4) / 2
    return g1, g2, g3, g4


@dataclass(frozen=True, eq=False)
class GrunskyTable:
    """Symmetric table of omega[p, q] for 0 <= p, q <= p_max.

    For odd-only tables, entries with an even index >= 2 are absent and
    indexing them raises ``KeyError``.
    """

    omega: np.ndarray
    odd_only: bool = False
    asymmetry: float = 0.0

    @property
    def p_max(self) -> int:
        return self.omega.shape[0] - 1

    def has(self, p: int, q: int) -> bool:
        if not (0 <= p <= self.p_max and 0 <= q <= self.p_max):
            return False
        if self.odd_only:
            return all(i == 0 or i % 2 == 1 for i in (p, q))
        return True

    def __getitem__(self, pq: tuple[int, int]) -> complex:
        p, q = pq
        if not self.has(p, q):
            raise KeyError(pq)
        return complex(self.omega[p, q])

    def entries(self):
        """Stored ``(p, q, omega)`` with ``p <= q`` and ``p + q >= 1``."""
        for p in range(self.p_max + 1):
            for q in range(p, self.p_max + 1):
                if p + q >= 1 and self.has(p, q):
                    yield p, q, complex(self.omega[p, q])


def grunsky_table(f: Series, p_max: int) -> GrunskyTable:
    _require_normalized(f)
    if p_max < 1:
        raise CoefficientError("p_max must be >= 1")
    need = 2 * p_max + 1
    if f.order < need:
        raise CoefficientError(
            f"Grunsky table with p_max={p_max} needs series order >= {need}, got {f.order}"
        )
    L = bi_log(BiSeries.difference_quotient(f, 2 * p_max))
    w = np.array(L.table[: p_max + 1, : p_max + 1])
    asym = float(np.max(np.abs(w - w.T)))
    w = (w + w.T) / 2
    w[0, 0] = 0
    w.setflags(write=False)
    return GrunskyTable(w, odd_only=False, asymmetry=asym)


def odd_grunsky(f: Series, p_max_odd: int = ODD_PMAX) -> GrunskyTable:
    """Odd-index Grunsky table of ``sqrt(f(z**2))`` up to index ``p_max_odd``."""
    _require_normalized(f)
    if p_max_odd < 1 or p_max_odd % 2 == 0:
        raise CoefficientError(f"p_max_odd must be a positive odd integer, got {p_max_odd}")
    # f2 has order 2 * f.order and needs 2 * p_max_odd + 1
    need = p_max_odd + 1
    if f.order < need:
        raise CoefficientError(
            f"odd Grunsky table with p_max_odd={p_max_odd} needs series order >= {need}, got {f.order}"
        )
    full = grunsky_table(sqrt_transform(f), p_max_odd)
    idx = np.arange(p_max_odd + 1)
    keep = (idx == 0) | (idx % 2 == 1)
    w = np.where(np.outer(keep, keep), full.omega, 0)
    w.setflags(write=False)
    return GrunskyTable(w, odd_only=True, asymmetry=full.asymmetry)


@dataclass(frozen=True)
class TestVector:
    """Finitely supported ``x_p`` over odd indices p."""

    __test__ = False  # not a pytest class

    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for p, x in self.entries.items():
            p = int(p)
            if p < 1 or p % 2 == 0:
                raise CoefficientError(f"test vector index must be odd and positive, got {p}")
            x = complex(x)
            if not (math.isfinite(x.real) and math.isfinite(x.imag)):
                raise CoefficientError("test vector entries must be finite")
            clean[p] = x
        if not any(x != 0 for x in clean.values()):
            raise CoefficientError("test vector needs at least one nonzero entry")
        object.__setattr__(self, "entries", dict(sorted(clean.items())))


def quadratic_form_slack(table: GrunskyTable, x: TestVector):
    """Both sides of the odd Grunsky inequality over the table's range.

    ``lhs = sum_q q |sum_p omega[p, q] x_p|**2`` and ``rhs = sum_p |x_p|**2 / p``
    with p, q odd.  Returns ``(lhs, rhs, rhs - lhs)``.
    """
    if not table.odd_only:
        raise CoefficientError("quadratic_form_slack needs an odd-only table")
    if max(x.entries) > table.p_max:
        raise CoefficientError(
            f"test vector support reaches {max(x.entries)}, table stops at {table.p_max}"
        )
    lhs = 0.0
    for q in range(1, table.p_max + 1, 2):
        s = sum(table.omega[p, q] * xp for p, xp in x.entries.items())
        lhs += q * abs(s) ** 2
    rhs = sum(abs(xp) ** 2 / p for p, xp in x.entries.items())
    return lhs, rhs, rhs - lhs


@dataclass
class ResidualReport:
    """Named absolute residuals against a tolerance."""

    residuals: dict[str, float]
    tol: float

    @property
    def passed(self) -> bool:
        return all(r <= self.tol for r in self.residuals.values())

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def to_records(self) -> list[dict]:
        return [
            {"relation_id": k, "residual": v, "tol": self.tol, "pass": v <= self.tol}
            for k, v in self.residuals.items()
        ]


def _odd_pipeline(f: Series):
    if f.order < ODD_PMAX + 1:
        raise CoefficientError(
            f"identity checks need series order >= {ODD_PMAX + 1}, got {f.order}"
        )
    return odd_grunsky(f, ODD_PMAX)


def verify_eq7(f: Series, tol: float = 1e-9) -> ResidualReport:
    """Residuals of a_2..a_5 written through the odd Grunsky table of f2.

    The a_5 relation carries ``5 omega13**2`` (not ``5 omega15**2``).
    """
    t = _odd_pipeline(f)
    w11, w13, w15, w17 = t[1, 1], t[1, 3], t[1, 5], t[1, 7]
    w33, w35 = t[3, 3], t[3, 5]
    a2, a3, a4, a5 = f[2], f[3], f[4], f[5]
    res = {
        "a2": a2 - 2 * w11,
        "a3": a3 - (2 * w13 + 3 * w11**2),
        "a4": a4 - (2 * w33 + 8 * w11 * w13 + 10 / 3 * w11**3),
        "a5": a5 - (2 * w35 + 8 * w11 * w33 + 5 * w13**2 + 18 * w11**2 * w13 + 7 / 3 * w11**4),
        "zero1": 3 * w15 - 3 * w11 * w13 + w11**3 - 3 * w33,
        "zero2": w17 - w35 - w11 * w33 - w13**2 + w11**4 / 3,
    }
    return ResidualReport({k: abs(v) for k, v in res.items()}, tol)


def gamma_omega_forms(t: GrunskyTable):
    """gamma_2, gamma_3, gamma_4 written through the odd table."""
    w11, w13, w15, w17, w33 = t[1, 1], t[1, 3], t[1, 5], t[1, 7], t[3, 3]
    g2 = w13 + w11**2 / 2
    g3 = w33 + 2 * w11 * w13
    g4 = w17 + w11 * w15 + w11**2 * w13 + w13**2 / 2 + w11**4 / 4
    return g2, g3, g4


def verify_gamma_omega(f: Series, tol: float = 1e-9) -> ResidualReport:
    t = _odd_pipeline(f)
    lc = log_coefficients(f, 4)
    forms = gamma_omega_forms(t)
    res = {f"gamma{k}": abs(lc[k] - g) for k, g in zip((2, 3, 4), forms)}
    return ResidualReport(res, tol)


def omega_bounds(t: GrunskyTable) -> dict[str, float]:
    """Slack (bound minus modulus) of the four bounds on |omega_1k|, k = 1, 3, 5, 7."""
    m11, m13, m15, m17 = (abs(t[1, k]) for k in (1, 3, 5, 7))

    def root(x):
        return math.sqrt(max(x, 0.0))

    r1 = 1 - m11**2
    r3 = r1 - 3 * m13**2
    r5 = r3 - 5 * m15**2
    return {
        "omega11": 1 - m11,
        "omega13": root(r1) / math.sqrt(3) - m13,
        "omega15": root(r3) / math.sqrt(5) - m15,
        "omega17": root(r5) / math.sqrt(7) - m17,
    }


def omega33_residual(t: GrunskyTable) -> float:
    """``|omega33 - (omega15 - omega11 omega13 + omega11**3 / 3)|``."""
    w11, w13, w15, w33 = t[1, 1], t[1, 3], t[1, 5], t[3, 3]
    return abs(w33 - (w15 - w11 * w13 + w11**3 / 3))
