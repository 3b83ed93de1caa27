"""Interval segments, structured segment families and their classification.

A :class:`SegmentSet` is an ordered collection of closed segments
``[alpha, beta]`` inside a working interval ``[lo, hi]``.  Sets carry a
structural class:

* ``CHAIN`` - consecutive segments share endpoints and cover the interval,
* ``ARC_UNIFORM`` - ``[cos(tau + rho), cos(tau - rho)]`` with a common arc radius,
* ``LEFT_ANCHORED`` - nested segments ``[alpha, beta_i]`` with a common left end,
* ``GENERAL`` - anything else.

The chain and left-anchored tags are verified on construction, never trusted.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


class SegmentClass(enum.Enum):
    CHAIN = "chain"
    ARC_UNIFORM = "arc"
    LEFT_ANCHORED = "left"
    GENERAL = "general"


@dataclass(frozen=True)
class Segment:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError(f"segment endpoints must be finite, got [{self.alpha}, {self.beta}]")
        if not self.alpha < self.beta:
            raise ValueError(f"segment needs alpha < beta, got [{self.alpha}, {self.beta}]")

    @property
    def length(self) -> float:
        return self.beta - self.alpha

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.alpha + self.beta)


@dataclass(frozen=True)
class ArcParams:
    """Arc radius and per-segment arc midpoints (angles in radians, segment order)."""

    rho: float
    taus: tuple


@dataclass(frozen=True)
class NodeSet:
    nodes: tuple

    def __post_init__(self):
        nodes = tuple(float(v) for v in self.nodes)
        if len(nodes) == 0:
            raise ValueError("node set must not be empty")
        if any(b <= a for a, b in zip(nodes, nodes[1:])):
            raise ValueError("nodes must be pairwise distinct and sorted ascending")
        object.__setattr__(self, "nodes", nodes)

    def __len__(self):
        return len(self.nodes)

    def as_array(self) -> np.ndarray:
        return np.array(self.nodes)


@dataclass(frozen=True)
class SegmentSet:
    """Ordered segments inside ``interval`` with a verified structural class.

    ``family`` is an optional provenance label (``"eq"``, ``"cl"``, ``"clo"``)
    set by the factories; it selects which closed-form growth bounds apply.
    """

    segments: tuple
    interval: tuple = (-1.0, 1.0)
    kind: SegmentClass = SegmentClass.GENERAL
    arc: Optional[ArcParams] = None
    family: Optional[str] = None

    def __post_init__(self):
        segs = tuple(self.segments)
        if len(segs) == 0:
            raise ValueError("a segment set needs at least one segment")
        lo, hi = (float(v) for v in self.interval)
        if not lo < hi:
            raise ValueError(f"interval needs lo < hi, got ({lo}, {hi})")
        for s in segs:
            if not isinstance(s, Segment):
                raise TypeError("segments must be Segment instances")
            if s.alpha < lo or s.beta > hi:
                raise ValueError(f"segment [{s.alpha}, {s.beta}] leaves the interval [{lo}, {hi}]")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "interval", (lo, hi))

        if self.kind is SegmentClass.CHAIN and not _is_chain(segs, lo, hi):
            raise ValueError("segments do not form a chain partitioning the interval")
        if self.kind is SegmentClass.LEFT_ANCHORED and not _is_left_anchored(segs):
            raise ValueError("segments do not share a left endpoint with increasing right endpoints")
        if self.kind is SegmentClass.ARC_UNIFORM:
            if self.arc is None or len(self.arc.taus) != len(segs):
                raise ValueError("arc-uniform sets need one arc midpoint per segment")
        if self.arc is not None and len(self.arc.taus) != len(segs):
            raise ValueError("arc data does not match the number of segments")

    @classmethod
    def from_segments(cls, segments: Iterable[Segment], interval=(-1.0, 1.0), family=None) -> "SegmentSet":
        """Build a set and detect its class (chain, left-anchored or general)."""
        segs = tuple(segments)
        lo, hi = interval
        if segs and _is_chain(segs, lo, hi):
            kind = SegmentClass.CHAIN
        elif segs and _is_left_anchored(segs):
            kind = SegmentClass.LEFT_ANCHORED
        else:
            kind = SegmentClass.GENERAL
        return cls(segs, interval, kind, family=family)

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __getitem__(self, i):
        return self.segments[i]

    @property
    def r(self) -> int:
        return len(self.segments)

    @property
    def alphas(self) -> np.ndarray:
        return np.array([s.alpha for s in self.segments])

    @property
    def betas(self) -> np.ndarray:
        return np.array([s.beta for s in self.segments])

    @property
    def lengths(self) -> np.ndarray:
        return self.betas - self.alphas

    def chain_nodes(self) -> np.ndarray:
        """Nodes xi_0 < ... < xi_r of a chain set."""
        if self.kind is not SegmentClass.CHAIN:
            raise ValueError("chain nodes are only defined for chain sets")
        return np.concatenate([[self.segments[0].alpha], self.betas])

    def to_csv(self) -> str:
        buf = io.StringIO()
        for i, s in enumerate(self.segments, start=1):
            buf.write(f"{i},{s.alpha!r},{s.beta!r}\n")
        return buf.getvalue()


def _is_chain(segs: Sequence[Segment], lo: float, hi: float) -> bool:
    if segs[0].alpha != lo or segs[-1].beta != hi:
        return False
    return all(a.beta == b.alpha for a, b in zip(segs, segs[1:]))


def _is_left_anchored(segs: Sequence[Segment]) -> bool:
    a0 = segs[0].alpha
    if any(s.alpha != a0 for s in segs):
        return False
    return all(s.beta < t.beta for s, t in zip(segs, segs[1:]))


def _check_r(r) -> int:
    if isinstance(r, bool) or int(r) != r or r < 1:
        raise ValueError(f"r must be a positive integer, got {r!r}")
    return int(r)


def _chain_from_nodes(nodes: Sequence[float], interval, family=None, arc=None) -> SegmentSet:
    segs = tuple(Segment(float(a), float(b)) for a, b in zip(nodes[:-1], nodes[1:]))
    return SegmentSet(segs, interval, SegmentClass.CHAIN, arc=arc, family=family)


def make_equidistant(r: int, interval=(-1.0, 1.0)) -> SegmentSet:
    """Uniform chain with nodes ``lo + i (hi - lo) / r``."""
    r = _check_r(r)
    lo, hi = (float(v) for v in interval)
    if not lo < hi:
        raise ValueError(f"interval needs lo < hi, got ({lo}, {hi})")
    nodes = [lo + i * (hi - lo) / r for i in range(r + 1)]
    nodes[0], nodes[-1] = lo, hi
    return _chain_from_nodes(nodes, (lo, hi), family="eq")


def chebyshev_lobatto_nodes(r: int) -> np.ndarray:
    """CL nodes ``cos(pi (r - i) / r)``, i = 0..r, ascending on [-1, 1]."""
    r = _check_r(r)
    nodes = np.cos(np.pi * (r - np.arange(r + 1)) / r)
    nodes[0], nodes[-1] = -1.0, 1.0
    if r % 2 == 0:
        nodes[r // 2] = 0.0
    return nodes


def cl_arc_midpoints(r: int) -> np.ndarray:
    """Arc midpoints of the CL segments, in segment order (descending angles)."""
    r = _check_r(r)
    i = np.arange(1, r + 1)
    # midpoint of the angles pi (r - i) / r and pi (r - i + 1) / r
    return (2 * (r - i) + 1) * np.pi / (2 * r)


def make_chebyshev_lobatto(r: int) -> SegmentSet:
    """Chebyshev-Lobatto chain on [-1, 1]; also carries its arc-uniform data."""
    r = _check_r(r)
    arc = ArcParams(np.pi / (2 * r), tuple(cl_arc_midpoints(r)))
    return _chain_from_nodes(chebyshev_lobatto_nodes(r), (-1.0, 1.0), family="cl", arc=arc)


def make_cl_overlapping(r: int) -> SegmentSet:
    """Nested segments ``[-1, xi_i]`` over the CL nodes."""
    nodes = chebyshev_lobatto_nodes(r)
    segs = tuple(Segment(-1.0, float(b)) for b in nodes[1:])
    return SegmentSet(segs, (-1.0, 1.0), SegmentClass.LEFT_ANCHORED, family="clo")


def make_arc_uniform(taus: Sequence[float], rho: float, allow_wrap: bool = False) -> SegmentSet:
    """Segments ``[cos(tau_i + rho), cos(tau_i - rho)]`` of common arc radius ``rho``.

    By default every ``tau_i +- rho`` must stay in ``[0, pi]``.  With
    ``allow_wrap=True`` the arcs may run onto the lower half circle; the
    endpoints are still ``cos(tau_i -+ rho)`` and remain ordered because the
    segment length ``2 sin(tau_i) sin(rho)`` is positive.
    """
    taus = np.asarray(taus, dtype=float)
    if taus.ndim != 1 or taus.size == 0:
        raise ValueError("taus must be a non-empty sequence")
    if not (0.0 < taus[0] and taus[-1] < np.pi) or np.any(np.diff(taus) <= 0):
        raise ValueError("taus must satisfy 0 < tau_1 < ... < tau_r < pi")
    if not 0.0 < rho < np.pi:
        raise ValueError(f"rho must lie in (0, pi), got {rho}")
    # a few ulps of slack: CL midpoints reach 0 and pi only up to rounding
    slack = 4 * np.finfo(float).eps * np.pi
    if not allow_wrap and (taus[0] - rho < -slack or taus[-1] + rho > np.pi + slack):
        raise ValueError("tau_i +- rho leaves [0, pi]; pass allow_wrap=True to accept wrapped arcs")
    alphas = np.cos(taus + rho)
    betas = np.cos(taus - rho)
    segs = tuple(Segment(float(a), float(b)) for a, b in zip(alphas, betas))
    return SegmentSet(segs, (-1.0, 1.0), SegmentClass.ARC_UNIFORM, arc=ArcParams(float(rho), tuple(taus)))


def is_nonoverlapping(segset: SegmentSet) -> bool:
    """True iff every pair of segments meets in at most one point."""
    order = np.argsort(segset.alphas, kind="stable")
    segs = [segset.segments[i] for i in order]
    for a, b in zip(segs, segs[1:]):
        if b.alpha < a.beta:
            return False
    return True


def affine_map(segset: SegmentSet, target) -> SegmentSet:
    """Push a set through the increasing affine map of its interval onto ``target``."""
    lo, hi = segset.interval
    tlo, thi = (float(v) for v in target)
    if not tlo < thi:
        raise ValueError(f"target interval needs lo < hi, got ({tlo}, {thi})")
    if (tlo, thi) == (lo, hi):
        return segset
    scale = (thi - tlo) / (hi - lo)

    def phi(x):
        if x == lo:
            return tlo
        if x == hi:
            return thi
        return tlo + (x - lo) * scale

    # map shared endpoints once so chain links stay bit-identical
    cache = {}
    segs = []
    for s in segset.segments:
        a = cache.setdefault(s.alpha, phi(s.alpha))
        b = cache.setdefault(s.beta, phi(s.beta))
        segs.append(Segment(a, b))
    kind = segset.kind
    if kind is SegmentClass.ARC_UNIFORM:
        kind = SegmentClass.GENERAL
    return SegmentSet(tuple(segs), (tlo, thi), kind, arc=None, family=segset.family)


def normalized(segset: SegmentSet) -> SegmentSet:
    """The set mapped onto [-1, 1] (returned unchanged if already there)."""
    if segset.interval == (-1.0, 1.0):
        return segset
    return affine_map(segset, (-1.0, 1.0))


def parse_segments_csv(text: str, interval=None) -> SegmentSet:
    """Parse ``i,alpha,beta`` lines; the interval defaults to the segments' hull."""
    segs = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected 'i,alpha,beta', got {line!r}")
        try:
            _, a, b = int(parts[0]), float(parts[1]), float(parts[2])
        except ValueError:
            if not segs and not parts[0].lstrip("-").isdigit():
                continue  # header row
            raise
        segs.append(Segment(a, b))
    if not segs:
        raise ValueError("no segments found")
    if interval is None:
        interval = (min(s.alpha for s in segs), max(s.beta for s in segs))
    return SegmentSet.from_segments(segs, interval)
