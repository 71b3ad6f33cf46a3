"""Seeded function corpora, the consecutive-difference scan and its reports."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .coefficients import (
    TestVector,
    log_coefficients,
    odd_grunsky,
    omega33_residual,
    omega_bounds,
    quadratic_form_slack,
    verify_eq7,
    verify_gamma_omega,
)
from .zoo import FAMILIES, FamilySpec, Transform, ZooError, realize

__all__ = [
    "CSV_HEADER",
    "ConfigError",
    "CorpusSpec",
    "ScanRecord",
    "ScanResult",
    "TheoremGuardError",
    "build_corpus",
    "random_test_vectors",
    "read_csv",
    "read_json",
    "report",
    "scan",
    "summarize",
    "theorem_guard",
    "verify_corpus",
]

CSV_HEADER = ["function_id", "family", "n", "abs_gamma_prev", "abs_gamma", "d_n", "bound", "slack"]
GUARD_TOL = 1e-9
MAX_AUTOMORPH_RADIUS = 0.8
MAX_TRANSFORM_DEPTH = 2


class ConfigError(ValueError):
    """Invalid corpus configuration."""


class TheoremGuardError(RuntimeError):
    """A proved difference bound failed on a corpus function."""

    def __init__(self, violations):
        self.violations = violations
        lines = [
            f"{r.function_id} n={r.n}: d_n={r.d_n!r} > {r.bound!r}" for r in violations
        ]
        super().__init__("theorem guard violated:\n  " + "\n  ".join(lines))


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 20240521
    order: int = 24
    n_max: int = 8
    counts: dict = field(
        default_factory=lambda: {
            "identity": 2,
            "koebe": 8,
            "halfplane": 6,
            "genKoebe": 24,
            "starlikePow": 16,
        }
    )
    theta_grid_size: int = 12
    beta_set: tuple = (0.0, 0.25, 0.5, 0.75, 1.0)
    r_set: tuple = (0.5, 0.75, 0.9, 1.0)
    automorph_points: tuple = (0.3, 0.5, -0.5 + 0.2j, 0.2 + 0.6j, 0.8, -0.7j)
    transform_depth_cap: int = 2

    def __post_init__(self):
        self.validate()

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def validate(self) -> None:
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.n_max < 2:
            raise ConfigError(f"n_max must be >= 2, got {self.n_max}")
        if self.order < 2 * self.n_max + 8:
            raise ConfigError(
                f"order must be >= 2*n_max + 8 = {2 * self.n_max + 8}, got {self.order}"
            )
        for fam, c in self.counts.items():
            if fam not in FAMILIES:
                raise ConfigError(f"unknown family {fam!r} in counts")
            if not isinstance(c, int) or c < 0:
                raise ConfigError(f"count for {fam} must be a non-negative integer")
        if self.theta_grid_size < 1:
            raise ConfigError("theta_grid_size must be >= 1")
        if not self.beta_set or any(not 0 <= b <= 1 for b in self.beta_set):
            raise ConfigError("beta_set must be non-empty with entries in [0, 1]")
        if not self.r_set or any(not 0 < r <= 1 for r in self.r_set):
            raise ConfigError("r_set must be non-empty with entries in (0, 1]")
        if not self.automorph_points or any(
            abs(a) > MAX_AUTOMORPH_RADIUS for a in self.automorph_points
        ):
            raise ConfigError(
                f"automorph_points must be non-empty with |a| <= {MAX_AUTOMORPH_RADIUS}"
            )
        if not 0 <= self.transform_depth_cap <= MAX_TRANSFORM_DEPTH:
            raise ConfigError(
                f"transform_depth_cap must lie in [0, {MAX_TRANSFORM_DEPTH}]"
            )

    def replace(self, **kw) -> CorpusSpec:
        d = {**self.__dict__, **kw}
        return CorpusSpec(**d)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "order": self.order,
            "n_max": self.n_max,
            "counts": dict(self.counts),
            "theta_grid_size": self.theta_grid_size,
            "beta_set": list(self.beta_set),
            "r_set": list(self.r_set),
            # + 0.0 turns -0.0 into 0.0
            "automorph_points": [
                [complex(a).real + 0.0, complex(a).imag + 0.0] for a in self.automorph_points
            ],
            "transform_depth_cap": self.transform_depth_cap,
        }

    @classmethod
    def from_dict(cls, d: dict) -> CorpusSpec:
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        kw = dict(d)
        try:
            for key in ("beta_set", "r_set"):
                if key in kw:
                    kw[key] = tuple(float(x) for x in kw[key])
            if "automorph_points" in kw:
                pts = []
                for a in kw["automorph_points"]:
                    pts.append(complex(*a) if isinstance(a, (list, tuple)) else complex(a))
                kw["automorph_points"] = tuple(pts)
            if "counts" in kw:
                kw["counts"] = dict(kw["counts"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed config: {exc}") from None
        return cls(**kw)

    @classmethod
    def load(cls, path) -> CorpusSpec:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)


def build_corpus(spec: CorpusSpec) -> list[FamilySpec]:
    """Deterministic corpus: parameter grids first, then seeded transformed copies.

    Within each family the first ``grid`` members take the fixed parameter
    grid untransformed; later members cycle the grid again and receive a
    random transform list of depth 1..transform_depth_cap.
    """
    rng = np.random.default_rng(spec.seed)
    thetas = [math.pi * j / spec.theta_grid_size for j in range(spec.theta_grid_size)]
    out = []
    for fam in FAMILIES:
        n = spec.counts.get(fam, 0)
        if fam == "genKoebe":
            grid = [{"theta": th} for th in thetas]
        elif fam == "starlikePow":
            grid = [{"beta": b} for b in spec.beta_set]
        else:
            grid = [{}]
        for i in range(n):
            params = grid[i % len(grid)]
            transforms = ()
            if i >= len(grid) and spec.transform_depth_cap > 0:
                depth = int(rng.integers(1, spec.transform_depth_cap + 1))
                transforms = tuple(_random_transform(rng, spec) for _ in range(depth))
            fs = FamilySpec(fam, transforms=transforms, **params)
            fs.validate(spec.transform_depth_cap)
            out.append(fs)
    return out


def _random_transform(rng, spec: CorpusSpec) -> Transform:
    kind = ("rotate", "dilate", "automorph")[int(rng.integers(3))]
    if kind == "rotate":
        return Transform("rotate", float(rng.uniform(0, 2 * math.pi)))
    if kind == "dilate":
        return Transform("dilate", float(spec.r_set[int(rng.integers(len(spec.r_set)))]))
    a = spec.automorph_points[int(rng.integers(len(spec.automorph_points)))]
    return Transform("automorph", complex(a))


def function_ids(corpus: list[FamilySpec]) -> list[str]:
    return [f"f{i:03d}-{fs.family}" for i, fs in enumerate(corpus)]


@dataclass(frozen=True)
class ScanRecord:
    function_id: str
    spec: FamilySpec
    n: int
    abs_gamma_prev: float
    abs_gamma: float
    d_n: float
    bound: float
    slack: float

    @classmethod
    def build(cls, function_id, spec, n, g_prev, g) -> ScanRecord:
        d = g - g_prev
        b = 1 / math.sqrt(2 * n - 1)
        return cls(function_id, spec, n, g_prev, g, d, b, b - d)

    def to_dict(self) -> dict:
        return {
            "function_id": self.function_id,
            "family": self.spec.family,
            "spec": self.spec.to_dict(),
            "n": self.n,
            "abs_gamma_prev": self.abs_gamma_prev,
            "abs_gamma": self.abs_gamma,
            "d_n": self.d_n,
            "bound": self.bound,
            "slack": self.slack,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ScanRecord:
        return cls(
            function_id=d["function_id"],
            spec=FamilySpec.from_dict(d["spec"]),
            n=int(d["n"]),
            abs_gamma_prev=float(d["abs_gamma_prev"]),
            abs_gamma=float(d["abs_gamma"]),
            d_n=float(d["d_n"]),
            bound=float(d["bound"]),
            slack=float(d["slack"]),
        )


@dataclass
class ScanResult:
    records: list[ScanRecord]
    # (function_id, reason) for functions that could not be realized
    skipped: list[tuple[str, str]] = field(default_factory=list)


def _scan_one(args):
    fid, fs, n_max, order = args
    try:
        f = realize(fs, order)
        lc = log_coefficients(f, n_max)
    except (ValueError, ArithmeticError) as exc:
        return fid, None, f"{type(exc).__name__}: {exc}"
    mods = [abs(lc[n]) for n in range(1, n_max + 1)]
    rows = [
        ScanRecord.build(fid, fs, n, mods[n - 2], mods[n - 1]) for n in range(2, n_max + 1)
    ]
    return fid, rows, None


def _parallel_map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        # map preserves input order, so output never depends on scheduling
        return list(ex.map(fn, items, chunksize=4))


def scan(corpus: list[FamilySpec], n_max: int = 8, order: int = 24, workers: int = 1) -> ScanResult:
    """One record per (function, n), n = 2..n_max, in corpus order."""
    if n_max < 2:
        raise ConfigError(f"n_max must be >= 2, got {n_max}")
    if order < n_max + 1:
        raise ConfigError(f"order {order} is too small for n_max={n_max}; need >= {n_max + 1}")
    jobs = [(fid, fs, n_max, order) for fid, fs in zip(function_ids(corpus), corpus)]
    result = ScanResult([])
    for fid, rows, reason in _parallel_map(_scan_one, jobs, workers):
        if rows is None:
            result.skipped.append((fid, reason))
        else:
            result.records.extend(rows)
    return result


def theorem_guard(records: list[ScanRecord], tol: float = GUARD_TOL) -> None:
    """Raise if any n = 3 or n = 4 record exceeds its proved bound by more than ``tol``."""
    bad = [r for r in records if r.n in (3, 4) and r.d_n > r.bound + tol]
    if bad:
        raise TheoremGuardError(bad)


def summarize(records: list[ScanRecord]) -> dict:
    """Observed maximum d_n and minimum slack for every n."""
    by_n: dict[int, list[ScanRecord]] = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r)
    out = {}
    for n in sorted(by_n):
        rows = by_n[n]
        top = max(rows, key=lambda r: r.d_n)
        out[n] = {
            "bound": rows[0].bound,
            "max_d_n": top.d_n,
            "argmax": top.function_id,
            "min_slack": min(r.slack for r in rows),
            "proved": n in (3, 4),
        }
    return out


def report(records: list[ScanRecord], fmt: str = "csv") -> bytes:
    """CSV (fixed header) or JSON rendering; floats use shortest round-trip repr."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([
                r.function_id, r.spec.family, r.n,
                repr(r.abs_gamma_prev), repr(r.abs_gamma), repr(r.d_n),
                repr(r.bound), repr(r.slack),
            ])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        return (json.dumps([r.to_dict() for r in records], indent=1) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}; expected 'csv' or 'json'")


def read_json(data: bytes) -> list[ScanRecord]:
    return [ScanRecord.from_dict(d) for d in json.loads(data)]


def read_csv(data: bytes) -> list[dict]:
    """Parse a CSV report back into typed row dicts (the FamilySpec field is not part of the CSV)."""
    rows = list(csv.DictReader(io.StringIO(data.decode("utf-8"))))
    for row in rows:
        row["n"] = int(row["n"])
        for k in CSV_HEADER[3:]:
            row[k] = float(row[k])
    return rows


def random_test_vectors(rng, count: int, support=(1, 3, 5, 7)) -> list[TestVector]:
    """Complex Gaussian test vectors on ``support``."""
    out = []
    for _ in range(count):
        z = rng.standard_normal(len(support)) + 1j * rng.standard_normal(len(support))
        out.append(TestVector(dict(zip(support, z))))
    return out


def verify_corpus(
    corpus: list[FamilySpec],
    order: int = 16,
    tol: float = 1e-9,
    n_vectors: int = 100,
    seed: int = 0,
) -> list[dict]:
    """Identity residuals and inequality violations for every corpus function.

    Each record is ``{function_id, relation_id, residual, tol, pass}``.  For
    inequalities the residual is the violation ``max(0, -slack)``.
    """
    rng = np.random.default_rng(seed)
    vectors = [TestVector({1: 1.0})] + random_test_vectors(rng, n_vectors)
    records = []
    for fid, fs in zip(function_ids(corpus), corpus):
        f = realize(fs, order)
        t = odd_grunsky(f)
        rows = []
        rows += [("eq7:" + r["relation_id"], r["residual"]) for r in verify_eq7(f, tol).to_records()]
        rows += [
            ("gamma_omega:" + r["relation_id"], r["residual"])
            for r in verify_gamma_omega(f, tol).to_records()
        ]
        rows += [("omega_bound:" + k, max(0.0, -s)) for k, s in omega_bounds(t).items()]
        rows.append(("omega33", omega33_residual(t)))
        worst = min(quadratic_form_slack(t, x)[2] for x in vectors)
        rows.append(("grunsky_form", max(0.0, -worst)))
        chains = bounds.chain_slacks(f)
        rows.append(("chain_slack", max(0.0, -chains.min_slack)))
        rows.append(("chain1_equality", chains.equality_residuals[0]))
        rows.append(("chain2_equality", chains.equality_residuals[1]))
        records += [
            {"function_id": fid, "relation_id": rid, "residual": float(res), "tol": tol,
             "pass": bool(res <= tol)}
            for rid, res in rows
        ]
    return records
