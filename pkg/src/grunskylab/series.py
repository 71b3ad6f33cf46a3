"""Truncated complex power series in one and two variables.

A :class:`Series` carries its own truncation ``order`` (the highest retained
exponent); coefficients beyond it are unknown, not zero.  Binary operations
truncate to the smaller order of their operands.

``log``, ``exp`` and ``sqrt`` are evaluated with the usual derivative
recurrences, so each coefficient is produced by one finite convolution and no
iteration is involved.  Their constant terms are pinned (1 for ``log`` and
``sqrt``, 0 for ``exp``) which fixes the principal branch.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "BiSeries",
    "Series",
    "SeriesError",
    "bi_log",
    "bi_mul",
    "ser_compose",
    "ser_exp",
    "ser_log",
    "ser_mul",
    "ser_sqrt",
]

# Admissible deviation of a pinned constant term.
CONSTANT_TOL = 1e-12


class SeriesError(ValueError):
    """Raised when an operation's precondition on its operands is violated."""


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Series:
    """Truncated power series ``c[0] + c[1] z + ... + c[order] z**order``."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.ndim != 1 or arr.size == 0:
            raise SeriesError("coefficients must form a non-empty 1-d sequence")
        if not np.all(np.isfinite(arr)):
            raise SeriesError("coefficients must be finite")
        object.__setattr__(self, "coeffs", _frozen(arr))

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[complex], order: int | None = None) -> Series:
        """Build a series, zero padding (or truncating) to ``order`` if given."""
        arr = np.asarray(list(coeffs), dtype=np.complex128)
        if order is not None:
            if order < 0:
                raise SeriesError("order must be non-negative")
            out = np.zeros(order + 1, dtype=np.complex128)
            m = min(order + 1, arr.size)
            out[:m] = arr[:m]
            arr = out
        return cls(arr)

    @classmethod
    def constant(cls, c: complex, order: int) -> Series:
        return cls.from_coeffs([c], order)

    @classmethod
    def variable(cls, order: int) -> Series:
        """The series ``z``."""
        return cls.from_coeffs([0.0, 1.0], order)

    def __getitem__(self, n: int) -> complex:
        return complex(self.coeffs[n])

    def __len__(self) -> int:
        return self.coeffs.size

    def __repr__(self) -> str:
        return f"Series(order={self.order}, coeffs={self.coeffs.tolist()!r})"

    def truncate(self, order: int) -> Series:
        if order > self.order:
            raise SeriesError(f"cannot extend a series of order {self.order} to {order}")
        return Series(self.coeffs[: order + 1])

    def scale(self, c: complex) -> Series:
        return Series(self.coeffs * c)

    def is_normalized(self) -> bool:
        return self.order >= 1 and self.coeffs[0] == 0 and self.coeffs[1] == 1

    def divide_by_z(self) -> Series:
        """``s(z)/z`` for a series with vanishing constant term; the order drops by one."""
        if self.coeffs[0] != 0:
            raise SeriesError("constant term must vanish to divide by z")
        if self.order < 1:
            raise SeriesError("order-0 series cannot be divided by z")
        return Series(self.coeffs[1:])

    def times_z(self) -> Series:
        """``z*s(z)``; the order grows by one."""
        return Series(np.concatenate(([0.0], self.coeffs)))

    def substitute_power(self, k: int) -> Series:
        """``s(z**k)`` with order ``k*order``."""
        if k < 1:
            raise SeriesError("power must be positive")
        out = np.zeros(k * self.order + 1, dtype=np.complex128)
        out[::k] = self.coeffs
        return Series(out)

    def __add__(self, other: Series) -> Series:
        n = min(self.order, other.order) + 1
        return Series(self.coeffs[:n] + other.coeffs[:n])

    def __sub__(self, other: Series) -> Series:
        n = min(self.order, other.order) + 1
        return Series(self.coeffs[:n] - other.coeffs[:n])

    def __neg__(self) -> Series:
        return Series(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Series):
            return ser_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__


def ser_mul(a: Series, b: Series) -> Series:
    """Cauchy product truncated to ``min(a.order, b.order)``."""
    n = min(a.order, b.order) + 1
    return Series(np.convolve(a.coeffs[:n], b.coeffs[:n])[:n])


def ser_compose(outer: Series, inner: Series) -> Series:
    """``outer(inner(z))`` by Horner's scheme; ``inner`` must vanish at 0."""
    if inner.coeffs[0] != 0:
        raise SeriesError("inner series must have zero constant term (branch ambiguity otherwise)")
    n = min(outer.order, inner.order)
    w = inner.coeffs[: n + 1]
    acc = np.zeros(n + 1, dtype=np.complex128)
    acc[0] = outer.coeffs[n]
    for k in range(n - 1, -1, -1):
        acc = np.convolve(acc, w)[: n + 1]
        acc[0] += outer.coeffs[k]
    return Series(acc)


def _check_unit_constant(a: Series, name: str) -> None:
    if abs(a.coeffs[0] - 1) > CONSTANT_TOL:
        raise SeriesError(f"{name} requires constant term 1, got {complex(a.coeffs[0])}")


def ser_log(a: Series) -> Series:
    """Principal logarithm of a series with constant term 1.

    Solves ``L' a = a'`` coefficient by coefficient:
    ``n L_n = n a_n - sum_{k=1}^{n-1} k L_k a_{n-k}``.
    """
    _check_unit_constant(a, "log")
    c = a.coeffs
    n = a.order
    out = np.zeros(n + 1, dtype=np.complex128)
    k = np.arange(n + 1)
    for m in range(1, n + 1):
        acc = m * c[m] - np.dot(k[1:m] * out[1:m], c[m - 1 : 0 : -1])
        out[m] = acc / m
    return Series(out)


def ser_exp(a: Series) -> Series:
    """Exponential of a series with zero constant term, via ``E' = a' E``."""
    if a.coeffs[0] != 0:
        raise SeriesError("exp requires zero constant term")
    c = a.coeffs
    n = a.order
    out = np.zeros(n + 1, dtype=np.complex128)
    out[0] = 1.0
    k = np.arange(n + 1)
    for m in range(1, n + 1):
        out[m] = np.dot(k[1 : m + 1] * c[1 : m + 1], out[m - 1 :: -1][:m]) / m
    return Series(out)


def ser_sqrt(a: Series) -> Series:
    """Principal square root of a series with constant term 1, via ``2 s s' = a'``."""
    _check_unit_constant(a, "sqrt")
    c = a.coeffs
    n = a.order
    out = np.zeros(n + 1, dtype=np.complex128)
    out[0] = 1.0
    k = np.arange(n + 1)
    for m in range(1, n + 1):
        # 2 m s_m = m a_m - 2 sum_{k=1}^{m-1} k s_k s_{m-k}
        acc = m * c[m] - 2 * np.dot(k[1:m] * out[1:m], out[m - 1 : 0 : -1])
        out[m] = acc / (2 * m)
    return Series(out)


@dataclass(frozen=True, eq=False)
class BiSeries:
    """Bivariate series in ``(t, z)`` truncated at total degree ``total_degree``.

    ``table[p, q]`` is the coefficient of ``t**p z**q``; entries with
    ``p + q > total_degree`` are held at zero.
    """

    table: np.ndarray

    def __post_init__(self):
        arr = np.array(self.table, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise SeriesError("table must be a non-empty square array")
        if not np.all(np.isfinite(arr)):
            raise SeriesError("coefficients must be finite")
        arr[~_triangle(arr.shape[0] - 1)] = 0
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    @property
    def total_degree(self) -> int:
        return self.table.shape[0] - 1

    def __getitem__(self, pq: tuple[int, int]) -> complex:
        p, q = pq
        if p < 0 or q < 0 or p + q > self.total_degree:
            raise KeyError(pq)
        return complex(self.table[p, q])

    @classmethod
    def difference_quotient(cls, f: Series, total_degree: int) -> BiSeries:
        """``(f(t) - f(z)) / (t - z) = sum_n a_n sum_{i+j=n-1} t**i z**j``."""
        if f.order < total_degree + 1:
            raise SeriesError(
                f"difference quotient to total degree {total_degree} needs order >= {total_degree + 1}"
            )
        m = total_degree
        idx = np.add.outer(np.arange(m + 1), np.arange(m + 1))
        out = np.where(idx <= m, f.coeffs[np.minimum(idx + 1, f.order)], 0)
        return cls(out)


def _triangle(m: int) -> np.ndarray:
    idx = np.add.outer(np.arange(m + 1), np.arange(m + 1))
    return idx <= m


def bi_mul(a: BiSeries, b: BiSeries) -> BiSeries:
    """Product truncated at the smaller total degree."""
    m = min(a.total_degree, b.total_degree)
    A = a.table[: m + 1, : m + 1]
    B = b.table[: m + 1, : m + 1]
    out = np.zeros((m + 1, m + 1), dtype=np.complex128)
    for i in range(m + 1):
        for j in range(m + 1 - i):
            c = A[i, j]
            if c != 0:
                out[i:, j:] += c * B[: m + 1 - i, : m + 1 - j]
    return BiSeries(out)


def bi_log(a: BiSeries) -> BiSeries:
    """Logarithm of a bivariate series with constant term 1.

    With ``u = a - 1`` the sum ``sum_k (-1)**(k+1) u**k / k`` terminates at
    ``k = total_degree`` because ``u**k`` has no terms of total degree below k.
    """
    if abs(a.table[0, 0] - 1) > CONSTANT_TOL:
        raise SeriesError(f"log requires constant term 1, got {complex(a.table[0, 0])}")
    u_tab = a.table.copy()
    u_tab[0, 0] = 0
    u = BiSeries(u_tab)
    power = u
    acc = u.table.copy()
    for k in range(2, a.total_degree + 1):
        power = bi_mul(power, u)
        acc += ((-1) ** (k + 1) / k) * power.table
    return BiSeries(acc)
