"""Normalized univalent functions and transforms that keep them univalent.

Base families (all classical members of S)::

    identity      z
    koebe         z / (1 - z)**2
    halfplane     z / (1 - z)
    genKoebe      z / ((1 - e^{i theta} z)(1 - e^{-i theta} z))
    starlikePow   z (1 - z)**(-2 beta),   0 <= beta <= 1

Transforms, applied left to right after the base is realized::

    rotate(theta)   e^{-i theta} f(e^{i theta} z)
    dilate(r)       f(r z) / r,                        0 < r <= 1
    automorph(a)    (f(phi_a(z)) - f(a)) / ((1 - |a|^2) f'(a)),
                    phi_a(z) = (z + a) / (1 + conj(a) z),  |a| < 1
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .series import Series, SeriesError, ser_compose, ser_exp, ser_log, ser_sqrt

__all__ = [
    "FAMILIES",
    "FamilySpec",
    "Transform",
    "ZooError",
    "automorph",
    "dilate",
    "realize",
    "rotate",
    "sqrt_transform",
    "transform_matrix",
]

FAMILIES = ("identity", "koebe", "halfplane", "genKoebe", "starlikePow")
TRANSFORM_KINDS = ("rotate", "dilate", "automorph")

# Extra input terms automorph needs beyond its output order.
AUTOMORPH_GUARD = 4
DEFAULT_TRANSFORM_CAP = 2
# Neglected tail of the Taylor shift about a, relative to unit coefficients.
_SHIFT_TAIL_TOL = 1e-18


class ZooError(ValueError):
    """Invalid family parameters or transform arguments."""


@dataclass(frozen=True)
class Transform:
    kind: str
    value: float | complex

    def validate(self) -> None:
        if self.kind not in TRANSFORM_KINDS:
            raise ZooError(f"unknown transform {self.kind!r}; expected one of {TRANSFORM_KINDS}")
        v = self.value
        if self.kind == "rotate":
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ZooError("rotate angle must be a finite real number")
        elif self.kind == "dilate":
            if not isinstance(v, (int, float)) or not 0 < v <= 1:
                raise ZooError(f"dilate requires 0 < r <= 1, got {v!r}")
        else:
            if not isinstance(v, (int, float, complex)) or not abs(v) < 1:
                raise ZooError(f"automorph requires |a| < 1, got {v!r}")

    def to_dict(self) -> dict:
        if self.kind == "rotate":
            return {"kind": "rotate", "theta": float(self.value)}
        if self.kind == "dilate":
            return {"kind": "dilate", "r": float(self.value)}
        a = complex(self.value)
        return {"kind": "automorph", "a": [a.real, a.imag]}

    @classmethod
    def from_dict(cls, d: dict) -> Transform:
        try:
            kind = d["kind"]
            if kind == "rotate":
                return cls("rotate", float(d["theta"]))
            if kind == "dilate":
                return cls("dilate", float(d["r"]))
            if kind == "automorph":
                a = d["a"]
                if isinstance(a, (list, tuple)):
                    re, im = a
                    return cls("automorph", complex(float(re), float(im)))
                return cls("automorph", complex(float(a)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ZooError(f"malformed transform {d!r}: {exc}") from None
        raise ZooError(f"unknown transform {kind!r}; expected one of {TRANSFORM_KINDS}")


@dataclass(frozen=True)
class FamilySpec:
    """A base family, its parameters and an ordered list of transforms."""

    family: str
    theta: float = 0.0
    beta: float = 0.0
    transforms: tuple[Transform, ...] = field(default_factory=tuple)

    def validate(self, transform_cap: int = DEFAULT_TRANSFORM_CAP) -> None:
        if self.family not in FAMILIES:
            raise ZooError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not math.isfinite(self.theta):
            raise ZooError("theta must be finite")
        if not 0 <= self.beta <= 1:
            raise ZooError(f"beta must lie in [0, 1], got {self.beta!r}")
        if len(self.transforms) > transform_cap:
            raise ZooError(
                f"transform list has {len(self.transforms)} entries, cap is {transform_cap}"
            )
        for t in self.transforms:
            t.validate()

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "theta": float(self.theta),
            "beta": float(self.beta),
            "transforms": [t.to_dict() for t in self.transforms],
        }

    @classmethod
    def from_dict(cls, d: dict) -> FamilySpec:
        if "family" not in d:
            raise ZooError("family spec is missing 'family'")
        try:
            return cls(
                family=str(d["family"]),
                theta=float(d.get("theta", 0.0)),
                beta=float(d.get("beta", 0.0)),
                transforms=tuple(Transform.from_dict(t) for t in d.get("transforms", [])),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ZooError):
                raise
            raise ZooError(f"malformed family spec {d!r}: {exc}") from None

    def label(self) -> str:
        parts = [self.family]
        if self.family == "genKoebe":
            parts.append(f"theta={self.theta!r}")
        if self.family == "starlikePow":
            parts.append(f"beta={self.beta!r}")
        for t in self.transforms:
            parts.append(f"{t.kind}({t.value!r})")
        return " ".join(parts)


def _require_normalized(f: Series) -> None:
    if not f.is_normalized():
        raise ZooError("input series must be normalized: coeffs[0] == 0 and coeffs[1] == 1")


def _base(spec: FamilySpec, order: int) -> Series:
    n = np.arange(order + 1, dtype=float)
    if spec.family == "identity":
        return Series.variable(order)
    if spec.family == "koebe":
        return Series(n)
    if spec.family == "halfplane":
        c = np.ones(order + 1)
        c[0] = 0
        return Series(c)
    if spec.family == "genKoebe":
        # a_{n+1} = 2 cos(theta) a_n - a_{n-1}
        c = np.zeros(order + 1)
        c[1] = 1.0
        two_cos = 2 * math.cos(spec.theta)
        for k in range(1, order):
            c[k + 1] = two_cos * c[k] - c[k - 1]
        return Series(c)
    # starlikePow: z exp(-2 beta log(1 - z))
    one_minus_z = Series.from_coeffs([1.0, -1.0], order - 1)
    return ser_exp(ser_log(one_minus_z).scale(-2 * spec.beta)).times_z()


def _shift_order(out_order: int, r: float) -> int:
    """Input order for a re-expansion about a point of modulus r.

    Picks N so that the neglected tail of the Taylor shift about ``a``,
    bounded termwise by binom(n, k) * n * r**(n - k) with k = out_order,
    stays below ``_SHIFT_TAIL_TOL``.
    """
    n_min = out_order + AUTOMORPH_GUARD
    if r == 0:
        return n_min
    k = out_order
    log_r = math.log(r)
    n = max(n_min, k + 1)
    while True:
        # log of binom(n, k) * n * r**(n - k)
        term = (
            math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
            + math.log(n) + (n - k) * log_r
        )
        ratio = (n + 1) / (n + 1 - k) * (n + 1) / n * r
        if ratio < 1 and term - math.log(1 - ratio) < math.log(_SHIFT_TAIL_TOL):
            return max(n_min, n - 1)
        n += 1


def transform_matrix(transforms) -> np.ndarray:
    """Matrix of the disk map M with ``g = normalize(f o M)`` for the whole list.

    Each transform is ``f -> normalize(f o M_t)`` where ``normalize(h) =
    (h - h(0)) / h'(0)`` and ``M_t`` is ``e^{i theta} z``, ``r z`` or
    ``phi_a``; applying them left to right gives ``M = M_1 o M_2 o ...``.
    """
    M = np.eye(2, dtype=np.complex128)
    for t in transforms:
        if t.kind == "rotate":
            Mt = np.array([[cmath.exp(1j * t.value), 0], [0, 1]])
        elif t.kind == "dilate":
            Mt = np.array([[t.value, 0], [0, 1]], dtype=np.complex128)
        else:
            a = complex(t.value)
            Mt = np.array([[1, a], [a.conjugate(), 1]])
        M = M @ Mt
    return M


def realize(spec: FamilySpec, order: int, transform_cap: int = DEFAULT_TRANSFORM_CAP) -> Series:
    """Normalized series of ``spec`` truncated at ``order``.

    The transform list is folded into one linear fractional map first, so
    the closed-form base is re-expanded once.  Chaining :func:`automorph`
    calls instead would feed the ill-conditioned high coefficients of one
    shift into the next.
    """
    if order < 1:
        raise ZooError(f"order must be >= 1, got {order}")
    spec.validate(transform_cap)
    M = transform_matrix(spec.transforms)
    (al, be), (ga, de) = M
    if be == 0 and ga == 0:
        # pure rotation and dilation: a_n -> m**(n-1) a_n with m = M'(0)
        m = al / de
        f = _base(spec, order)
        if m == 1:
            return f
        c = f.coeffs * m ** (np.arange(order + 1) - 1.0)
        c[0], c[1] = 0, 1
        return Series(c)
    center = be / de
    base = _base(spec, _shift_order(order, abs(center)))
    return _mobius_renormalize(base, center, (al * de - be * ga) / de**2, ga / de, order)


def _mobius_renormalize(f: Series, center: complex, scale: complex, pole: complex, order: int) -> Series:
    """``normalize(f o M)`` for ``M(z) = center + scale z / (1 + pole z)``."""
    b = _taylor_shift(f.coeffs, center, order)
    w = scale * (-pole) ** np.arange(order, dtype=float)
    inner = Series(np.concatenate(([0.0], w)))
    g = ser_compose(Series(b), inner).coeffs / (scale * b[1])
    g[0], g[1] = 0, 1
    return Series(g)


def rotate(f: Series, theta: float) -> Series:
    """``e^{-i theta} f(e^{i theta} z)``, i.e. ``a_n -> e^{i(n-1) theta} a_n``."""
    _require_normalized(f)
    if theta == 0:
        return f
    c = f.coeffs * np.exp(1j * theta * (np.arange(f.order + 1) - 1))
    c[0], c[1] = 0, 1
    return Series(c)


def dilate(f: Series, r: float) -> Series:
    """``f(r z) / r``, i.e. ``a_n -> r**(n-1) a_n``."""
    if not 0 < r <= 1:
        raise ZooError(f"dilate requires 0 < r <= 1, got {r!r}")
    _require_normalized(f)
    if r == 1:
        return f
    c = f.coeffs * r ** (np.arange(f.order + 1) - 1.0)
    c[0], c[1] = 0, 1
    return Series(c)


def _taylor_shift(c: np.ndarray, a: complex, m: int) -> np.ndarray:
    """First ``m + 1`` coefficients of ``p(a + w)`` in powers of ``w``.

    Repeated synthetic division of the polynomial ``p`` by ``w - a``; pass i
    fixes coefficient i, so only ``m + 1`` passes are run.
    """
    b = [complex(x) for x in c]
    n = len(b) - 1
    for i in range(min(m + 1, n)):
        for j in range(n - 1, i - 1, -1):
            b[j] += a * b[j + 1]
    return np.array(b[: m + 1], dtype=np.complex128)


def automorph(f: Series, a: complex, order: int | None = None) -> Series:
    """Koebe transform of ``f`` by the disk automorphism ``(z + a)/(1 + conj(a) z)``.

    ``f`` is re-expanded about ``a`` and composed with
    ``phi_a(z) - a = (1 - |a|^2) z / (1 + conj(a) z)``, whose geometric series
    is truncated at the output order.  The result has order ``order``
    (default ``f.order - 4``) and the input must carry four guard terms beyond
    it.  Accuracy against the untruncated function also depends on the input
    tail; :func:`realize` sizes the base order for that.
    """
    a = complex(a)
    if not abs(a) < 1:
        raise ZooError(f"automorph requires |a| < 1, got {a!r}")
    _require_normalized(f)
    if order is None:
        order = f.order - AUTOMORPH_GUARD
    if order < 1 or f.order < order + AUTOMORPH_GUARD:
        raise ZooError(
            f"automorph to order {order} needs input order >= {max(order, 1) + AUTOMORPH_GUARD}, "
            f"got {f.order}"
        )
    if a == 0:
        return f.truncate(order)
    return _mobius_renormalize(f, a, 1 - abs(a) ** 2, a.conjugate(), order)


def sqrt_transform(f: Series) -> Series:
    """Odd function ``sqrt(f(z**2))`` of order ``2 * f.order``.

    With ``f(z) = z u(z)``, ``u(0) = 1``, this is ``z * sqrt(u)(z**2)``.
    ``u`` is known to order N-1, which fixes every odd coefficient up to
    ``z**(2N-1)``; the even ones vanish identically.
    """
    _require_normalized(f)
    u = f.divide_by_z()
    try:
        root = ser_sqrt(u)
    except SeriesError as exc:  # pragma: no cover - unreachable for normalized input
        raise ZooError(str(exc)) from None
    # u(z**2) is even, so its coefficient at z**(2N-1) is exactly zero.
    out = np.zeros(2 * f.order + 1, dtype=np.complex128)
    out[1::2] = root.coeffs
    return Series(out)
