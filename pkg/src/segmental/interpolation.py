"""Polynomial interpolation from segment integrals.

Given segments s_1..s_r and data mu_i, find p of degree r - 1 with
``integral_{s_i} p = mu_i``.  Solves go through the Chebyshev-U Vandermonde
matrix on the set mapped to [-1, 1]; arc-uniform sets use the nodal fast path
at the arc midpoints followed by a diagonal rescaling of the coefficients.
Chain and left-anchored sets additionally have closed-form Lagrange bases
built from derivatives of nodal Lagrange polynomials.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .basis import ChebExpansion, nodal_lagrange_deriv, u_matrix
from .errors import ResonantRadius, SingularSystem
from .quadrature import MeasurementVector
from .segments import SegmentClass, SegmentSet, normalized

PIVOT_TOL = 1e-12
RESONANCE_TOL = 1e-10
RESIDUAL_WARN = 1e-6

PATHS = ("vandermonde", "c1_explicit", "c2_fast", "c3_explicit")


@dataclass(frozen=True)
class VandermondeMatrix:
    entries: np.ndarray
    basis_tag: str


def vandermonde(segset: SegmentSet, basis_tag: str = "chebU") -> VandermondeMatrix:
    """Matrix of basis integrals over the segments (row i = segment, column j = basis j - 1)."""
    a, b = segset.alphas, segset.betas
    r = segset.r
    j = np.arange(1, r + 1)
    if basis_tag == "monomial":
        entries = (b[:, None] ** j - a[:, None] ** j) / j
    elif basis_tag == "chebU":
        if a.min() < -1.0 or b.max() > 1.0:
            raise ValueError("chebU Vandermonde needs endpoints in [-1, 1]; normalize the set first")
        ta, tb = np.arccos(a), np.arccos(b)
        entries = (2.0 / j) * np.sin(j * (0.5 * (ta + tb))[:, None]) * np.sin(j * (0.5 * (ta - tb))[:, None])
    else:
        raise ValueError(f"unknown basis tag {basis_tag!r}")
    return VandermondeMatrix(entries, basis_tag)


def solve_dense(matrix, rhs):
    """LU solve with partial pivoting.

    Returns ``(solution, cond_estimate)`` where the estimate is the ratio of the
    largest to the smallest pivot magnitude.  Raises :class:`SingularSystem`
    when a pivot falls below ``1e-12`` times the largest row norm.
    """
    a = np.asarray(getattr(matrix, "entries", matrix), dtype=float)
    b = np.asarray(getattr(rhs, "values", rhs), dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"right-hand side has {b.shape[0]} rows, matrix has {a.shape[0]}")
    row_norm = np.abs(a).sum(axis=1).max()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    pivots = np.abs(np.diag(lu))
    small = np.nonzero(pivots < PIVOT_TOL * row_norm)[0]
    if row_norm == 0.0 or small.size:
        idx = int(small[0]) if small.size else 0
        raise SingularSystem(f"segment set is not unisolvent: pivot {idx} is numerically zero "
                             f"({pivots[idx]:.3e})", pivot_index=idx)
    x = scipy.linalg.lu_solve((lu, piv), b)
    return x, float(pivots.max() / pivots.min())


def k_rho_eigenvalues(rho: float, n: int) -> np.ndarray:
    """sin((j+1) rho) / ((j+1) sin rho) for j = 0..n-1."""
    j1 = np.arange(1, n + 1)
    return np.sin(j1 * rho) / (j1 * np.sin(rho))


def check_resonance(rho: float, r: int, tol: float = RESONANCE_TOL) -> None:
    """Raise :class:`ResonantRadius` if rho is within ``tol`` of some k pi / j, 1 <= k < j <= r."""
    for j in range(2, r + 1):
        k = round(rho * j / np.pi)
        if 1 <= k < j and abs(rho - k * np.pi / j) < tol:
            raise ResonantRadius(f"arc radius {rho!r} equals {k}*pi/{j}: the set is not unisolvent "
                                 f"for degree {r - 1}", rho=rho, j=j, k=k)


def _c2_coefficients(segset: SegmentSet, rhs: np.ndarray):
    arc = segset.arc
    rho = arc.rho
    taus = np.asarray(arc.taus)
    r = segset.r
    if not 0.0 < rho < np.pi:
        raise ValueError(f"arc radius must lie in (0, pi), got {rho}")
    check_resonance(rho, r)
    lengths = 2.0 * np.sin(taus) * np.sin(rho)
    scaled = rhs / (lengths[:, None] if rhs.ndim == 2 else lengths)
    b, cond = solve_dense(u_matrix(r, np.cos(taus)), scaled)
    kappa = k_rho_eigenvalues(rho, r)
    a = b / (kappa[:, None] if b.ndim == 2 else kappa)
    return a, cond


def _c1_coefficients(norm: SegmentSet, rhs: np.ndarray):
    # l_{s_j} = sum_{k >= j} l'_{xi_k}; its U-coefficients follow from exact sampling
    # at r Chebyshev points of the derivative form
    xi = norm.chain_nodes()
    r = norm.r
    x = np.cos((2 * np.arange(r) + 1) * np.pi / (2 * r))
    d = np.column_stack([nodal_lagrange_deriv(xi, k, x) for k in range(r + 1)])
    basis_vals = np.cumsum(d[:, ::-1], axis=1)[:, ::-1][:, 1:]  # column j-1 = sum_{k>=j}
    coeffs, cond = solve_dense(u_matrix(r, x), basis_vals)
    return coeffs @ rhs, cond


def _c3_coefficients(norm: SegmentSet, rhs: np.ndarray):
    nodes = np.concatenate([[norm.segments[0].alpha], norm.betas])
    r = norm.r
    x = np.cos((2 * np.arange(r) + 1) * np.pi / (2 * r))
    basis_vals = np.column_stack([nodal_lagrange_deriv(nodes, k, x) for k in range(1, r + 1)])
    coeffs, cond = solve_dense(u_matrix(r, x), basis_vals)
    return coeffs @ rhs, cond


def _choose_path(segset: SegmentSet, path: Optional[str]) -> str:
    if path is None:
        if segset.kind is SegmentClass.ARC_UNIFORM:
            return "c2_fast"
        return "vandermonde"
    if path not in PATHS:
        raise ValueError(f"unknown solve path {path!r}")
    if path == "c2_fast" and segset.arc is None:
        raise ValueError("c2_fast needs arc-uniform data")
    if path == "c1_explicit" and segset.kind is not SegmentClass.CHAIN:
        raise ValueError("c1_explicit needs a chain set")
    if path == "c3_explicit" and segset.kind is not SegmentClass.LEFT_ANCHORED:
        raise ValueError("c3_explicit needs a left-anchored set")
    return path


def _solve(segset: SegmentSet, rhs: np.ndarray, path: Optional[str]):
    """U-coefficients on the reference interval for one or several data columns."""
    path = _choose_path(segset, path)
    lo, hi = segset.interval
    scale = 2.0 / (hi - lo)
    norm = normalized(segset)
    rhs = scale * rhs
    if path == "c2_fast":
        coeffs, cond = _c2_coefficients(segset, rhs)
    elif path == "c1_explicit":
        coeffs, cond = _c1_coefficients(norm, rhs)
    elif path == "c3_explicit":
        coeffs, cond = _c3_coefficients(norm, rhs)
    else:
        coeffs, cond = solve_dense(vandermonde(norm, "chebU"), rhs)
    return coeffs, cond, path


@dataclass(frozen=True)
class Diagnostics:
    residual_inf: float
    cond_estimate: float
    path: str
    warning: bool = False


@dataclass(frozen=True)
class Interpolant:
    poly: ChebExpansion
    segset: SegmentSet
    diagnostics: Diagnostics

    def __call__(self, x):
        return self.poly(x)

    @property
    def coeffs(self) -> np.ndarray:
        return np.array(self.poly.coeffs)

    def to_csv(self) -> str:
        d = self.diagnostics
        buf = io.StringIO()
        buf.write("# path,cond,residual\n")
        buf.write(f"# {d.path},{d.cond_estimate!r},{d.residual_inf!r}\n")
        for j, a in enumerate(self.poly.coeffs):
            buf.write(f"{j},{a!r}\n")
        return buf.getvalue()


def segment_integrals(poly: ChebExpansion, segset: SegmentSet) -> np.ndarray:
    return np.array([poly.integrate(s.alpha, s.beta) for s in segset.segments])


def _as_measurements(mu) -> MeasurementVector:
    if isinstance(mu, MeasurementVector):
        return mu
    return MeasurementVector(np.asarray(mu, dtype=float), "external")


def interpolate(segset: SegmentSet, mu, path: Optional[str] = None) -> Interpolant:
    """Polynomial of degree r - 1 matching the segment integrals ``mu``.

    ``path`` forces a solver (``vandermonde``, ``c1_explicit``, ``c2_fast``,
    ``c3_explicit``); by default arc-uniform sets use ``c2_fast`` and
    everything else the Vandermonde solve.
    """
    mu = _as_measurements(mu)
    if len(mu) != segset.r:
        raise ValueError(f"got {len(mu)} measurements for {segset.r} segments")
    coeffs, cond, used = _solve(segset, mu.values, path)
    poly = ChebExpansion(tuple(coeffs), segset.interval)
    residual = float(np.max(np.abs(segment_integrals(poly, segset) - mu.values)))
    warn = residual > RESIDUAL_WARN * max(1.0, float(np.max(np.abs(mu.values))))
    return Interpolant(poly, segset, Diagnostics(residual, cond, used, warn))


def interpolate_c2_fast(segset: SegmentSet, mu) -> Interpolant:
    if segset.kind is not SegmentClass.ARC_UNIFORM and segset.arc is None:
        raise ValueError("interpolate_c2_fast needs an arc-uniform set")
    return interpolate(segset, mu, path="c2_fast")


def lagrange_basis(segset: SegmentSet, path: Optional[str] = None) -> list:
    """All segmental Lagrange polynomials (integral over s_i of l_j is delta_ij)."""
    coeffs, _, _ = _solve(segset, np.eye(segset.r), path)
    return [ChebExpansion(tuple(coeffs[:, j]), segset.interval) for j in range(segset.r)]


def lagrange_generic(segset: SegmentSet, j: int) -> ChebExpansion:
    """The j-th (1-based) Lagrange polynomial from one solve with a unit data vector."""
    if not 1 <= j <= segset.r:
        raise IndexError(f"index {j} outside 1..{segset.r}")
    e = np.zeros(segset.r)
    e[j - 1] = 1.0
    coeffs, _, _ = _solve(segset, e, None)
    return ChebExpansion(tuple(coeffs), segset.interval)


def lagrange_c1(segset: SegmentSet, j: int, x):
    """j-th Lagrange polynomial of a chain: sum_{k=j}^{r} of l'_{xi_k} over nodes xi_0..xi_r."""
    if segset.kind is not SegmentClass.CHAIN:
        raise ValueError("lagrange_c1 needs a chain set")
    if not 1 <= j <= segset.r:
        raise IndexError(f"index {j} outside 1..{segset.r}")
    xi = segset.chain_nodes()
    out = sum(np.asarray(nodal_lagrange_deriv(xi, k, x)) for k in range(j, segset.r + 1))
    return out if np.ndim(out) else float(out)


def lagrange_c3(segset: SegmentSet, j: int, x):
    """j-th Lagrange polynomial of a left-anchored set: l'_{beta_j} over nodes {alpha, beta_1..beta_r}."""
    if segset.kind is not SegmentClass.LEFT_ANCHORED:
        raise ValueError("lagrange_c3 needs a left-anchored set")
    if not 1 <= j <= segset.r:
        raise IndexError(f"index {j} outside 1..{segset.r}")
    nodes = np.concatenate([[segset.segments[0].alpha], segset.betas])
    return nodal_lagrange_deriv(nodes, j, x)


def measurements_from_primitive(primitive: Callable, segset: SegmentSet) -> MeasurementVector:
    """Exact data mu_i = F(beta_i) - F(alpha_i) for an antiderivative F."""
    values = [float(primitive(s.beta)) - float(primitive(s.alpha)) for s in segset.segments]
    return MeasurementVector(np.array(values), "exact")


def measurements_of_expansion(poly: ChebExpansion, segset: SegmentSet) -> MeasurementVector:
    """Exact data for a polynomial given in the U-basis."""
    return MeasurementVector(segment_integrals(poly, segset), "exact")
