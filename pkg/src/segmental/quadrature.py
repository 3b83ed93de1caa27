"""Gauss-Legendre rules and segment measurements mu_i = integral of f over s_i."""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import EvaluationError
from .segments import Segment, SegmentSet

MAX_ORDER = 512


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int


def _legendre_and_derivative(n: int, x: np.ndarray):
    p_prev, p = np.ones_like(x), x.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def legendre_P(n: int, x):
    """Legendre polynomial P_n by recurrence."""
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.ones_like(x)
    return _legendre_and_derivative(n, x)[0]


@lru_cache(maxsize=64)
def _gauss_legendre(n: int) -> QuadratureRule:
    k = np.arange(1, n + 1)
    # Chebyshev initial guesses, descending
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = _legendre_and_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    p, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    # symmetrize against rounding
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    if n % 2 == 1:
        x[n // 2] = 0.0
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(x, w, n)


def gauss_legendre(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n)."""
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= MAX_ORDER:
        raise ValueError(f"rule order must be an integer in [1, {MAX_ORDER}], got {n!r}")
    n = int(n)
    if n == 1:
        return QuadratureRule(np.array([0.0]), np.array([2.0]), 1)
    return _gauss_legendre(n)


def _sample(f: Callable, x: np.ndarray) -> np.ndarray:
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape).astype(float)
    bad = ~np.isfinite(y)
    if bad.any():
        at = float(x[np.argmax(bad)])
        raise EvaluationError(f"function is not finite at x = {at!r}", abscissa=at)
    return y


def integrate_interval(f: Callable, a: float, b: float, rule: QuadratureRule, subdivisions: int = 1) -> float:
    """Composite mapped rule over ``subdivisions`` equal panels of [a, b]."""
    if subdivisions < 1:
        raise ValueError("subdivisions must be positive")
    edges = np.linspace(a, b, subdivisions + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * rule.nodes[None, :]).ravel()
    y = _sample(f, x).reshape(subdivisions, -1)
    return float(np.sum(half * (y @ rule.weights)))


def measure(f: Callable, seg: Segment, rule: QuadratureRule | None = None, subdivisions: int = 1) -> float:
    """Approximate the integral of ``f`` over ``seg``."""
    rule = rule or gauss_legendre(64)
    return integrate_interval(f, seg.alpha, seg.beta, rule, subdivisions)


@dataclass(frozen=True)
class MeasurementVector:
    """Segment integrals mu_1..mu_r and where they came from (``quadrature`` or ``external``)."""

    values: np.ndarray
    provenance: str = "external"

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size == 0:
            raise ValueError("measurement vector must not be empty")
        if self.provenance not in ("quadrature", "external", "exact"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    def to_csv(self) -> str:
        buf = io.StringIO()
        for i, mu in enumerate(self.values, start=1):
            buf.write(f"{i},{float(mu)!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "MeasurementVector":
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 2:
                raise ValueError(f"expected 'i,mu', got {line!r}")
            try:
                rows.append((int(parts[0]), float(parts[1])))
            except ValueError:
                if not rows:
                    continue  # header row
                raise
        if not rows:
            raise ValueError("no measurements found")
        rows.sort()
        if [i for i, _ in rows] != list(range(1, len(rows) + 1)):
            raise ValueError("measurement indices must run 1..r")
        return cls(np.array([mu for _, mu in rows]), "external")


def measure_vector(f: Callable, segset: SegmentSet, rule: QuadratureRule | None = None,
                   subdivisions: int = 1) -> MeasurementVector:
    rule = rule or gauss_legendre(64)
    values = [measure(f, s, rule, subdivisions) for s in segset.segments]
    return MeasurementVector(np.array(values), "quadrature")
