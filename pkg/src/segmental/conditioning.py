"""Lebesgue constants, operator norms and growth bounds for segmental interpolation.

Sup norms over the interval are estimated on a Chebyshev-clustered grid of
``max(4096, 200 r)`` points followed by golden-section refinement in the two
cells next to the discrete maximizer.  The result is a lower estimate of the
true supremum; ties go to the smallest abscissa.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .basis import ChebExpansion, nodal_lagrange_matrix, u_matrix
from .interpolation import k_rho_eigenvalues, lagrange_basis
from .quadrature import gauss_legendre, integrate_interval
from .segments import NodeSet, SegmentClass, SegmentSet

GOLDEN_ITERATIONS = 40
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class SupEstimate(NamedTuple):
    value: float
    argmax: float


def default_grid_size(r: int) -> int:
    return max(4096, 200 * r)


def clustered_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """Ascending images of uniform angles, clustered toward both ends."""
    t = np.cos(np.pi * np.arange(n) / (n - 1))[::-1]
    x = lo + 0.5 * (hi - lo) * (1.0 + t)
    x[0], x[-1] = lo, hi
    return x


def _golden_max(g: Callable, a: float, b: float, iterations: int = GOLDEN_ITERATIONS):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(iterations):
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - _INVPHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _INVPHI * (b - a)
            gd = g(d)
    return (c, gc) if gc >= gd else (d, gd)


def sup_on_interval(func: Callable, lo: float, hi: float, n: int) -> SupEstimate:
    """Grid-plus-refinement supremum of a vectorized function on [lo, hi]."""
    x = clustered_grid(lo, hi, n)
    vals = func(x)
    k = int(np.argmax(vals))
    best_x, best = float(x[k]), float(vals[k])

    def scalar(t):
        return float(func(np.array([t]))[0])

    for a, b in ((k - 1, k), (k, k + 1)):
        if a < 0 or b >= n:
            continue
        xr, vr = _golden_max(scalar, float(x[a]), float(x[b]))
        if vr > best:
            best_x, best = xr, vr
    return SupEstimate(best, best_x)


def basis_matrix(basis: Sequence[ChebExpansion], x) -> np.ndarray:
    """Values l_i(x_k) as an (n_points, r) array."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((x.size, len(basis)))
    groups = {}
    for i, p in enumerate(basis):
        groups.setdefault((p.domain, len(p.coeffs)), []).append(i)
    for (domain, n), idx in groups.items():
        ref = basis[idx[0]].to_reference(x)
        coeffs = np.column_stack([basis[i].coeffs for i in idx])
        out[:, idx] = u_matrix(n, ref) @ coeffs
    return out


def lebesgue_function(segset: SegmentSet, basis: Sequence[ChebExpansion], x):
    """sum_i |s_i| |l_{s_i}(x)|."""
    vals = basis_matrix(basis, x)
    out = np.abs(vals) @ segset.lengths
    return out if np.ndim(x) else float(out[0])


def lebesgue_constant(segset: SegmentSet, grid_size: Optional[int] = None,
                      basis: Optional[Sequence[ChebExpansion]] = None) -> SupEstimate:
    """Segmental Lebesgue constant sup_x sum_i |s_i| |l_{s_i}(x)| and its maximizer."""
    basis = basis if basis is not None else lagrange_basis(segset)
    n = grid_size or default_grid_size(segset.r)
    lo, hi = segset.interval
    lengths = segset.lengths
    return sup_on_interval(lambda x: np.abs(basis_matrix(basis, x)) @ lengths, lo, hi, n)


@dataclass(frozen=True)
class KernelProfile:
    """Elementary intervals between consecutive endpoints and the segments covering each."""

    breakpoints: np.ndarray
    coverage: tuple

    @classmethod
    def from_segments(cls, segset: SegmentSet) -> "KernelProfile":
        lo, hi = segset.interval
        pts = np.unique(np.concatenate([[lo, hi], segset.alphas, segset.betas]))
        cover = []
        for e0, e1 in zip(pts[:-1], pts[1:]):
            cover.append(tuple(i for i, s in enumerate(segset.segments) if s.alpha <= e0 and s.beta >= e1))
        return cls(pts, tuple(cover))

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def coverage_matrix(self, r: int) -> np.ndarray:
        c = np.zeros((len(self.coverage), r))
        for e, idx in enumerate(self.coverage):
            c[e, list(idx)] = 1.0
        return c


def operator_norm(segset: SegmentSet, grid_size: Optional[int] = None,
                  basis: Optional[Sequence[ChebExpansion]] = None) -> SupEstimate:
    """sup_x of the integral over t of |sum_i l_{s_i}(x) 1_{s_i}(t)|, exact in t."""
    basis = basis if basis is not None else lagrange_basis(segset)
    profile = KernelProfile.from_segments(segset)
    cover_t = profile.coverage_matrix(segset.r).T
    widths = profile.widths
    n = grid_size or default_grid_size(segset.r)
    lo, hi = segset.interval

    def kernel_mass(x):
        out = np.empty(x.size)
        for start in range(0, x.size, 2048):
            vals = basis_matrix(basis, x[start:start + 2048])
            out[start:start + 2048] = np.abs(vals @ cover_t) @ widths
        return out

    return sup_on_interval(kernel_mass, lo, hi, n)


def fill_distance(segset: SegmentSet) -> float:
    """sup_x min_i max(|x - alpha_i|, |x - beta_i|), evaluated exactly.

    The inner max equals |x - m_i| + |s_i| / 2 (m_i the midpoint), so the
    objective is a lower envelope of V-shaped pieces; its maximum sits at the
    interval ends or at a crossing of an ascending and a descending branch.
    """
    lo, hi = segset.interval
    m = 0.5 * (segset.alphas + segset.betas)
    h = 0.5 * segset.lengths
    # ascending branch of i meets descending branch of j: x - m_i + h_i = m_j - x + h_j
    cross = 0.5 * (m[:, None] + m[None, :] + h[None, :] - h[:, None])
    cand = np.concatenate([[lo, hi], segset.alphas, segset.betas, m, cross.ravel()])
    cand = cand[(cand >= lo) & (cand <= hi)]
    vals = np.min(np.abs(cand[:, None] - m[None, :]) + h[None, :], axis=1)
    return float(vals.max())


def modulus_of_continuity(f: Callable, delta: float, interval=(-1.0, 1.0), n: int = 4096) -> float:
    """Grid estimate (from below) of sup_{|x - y| <= delta} |f(x) - f(y)|."""
    lo, hi = interval
    if delta <= 0:
        return 0.0
    x = np.linspace(lo, hi, n)
    fx = np.asarray(f(x), dtype=float)
    step = (hi - lo) / (n - 1)
    kmax = min(int(math.floor(delta / step + 1e-12)), n - 1)
    best = 0.0
    for k in range(1, kmax + 1):
        best = max(best, float(np.max(np.abs(fx[k:] - fx[:-k]))))
    # pairs at exactly distance delta anchored at grid points
    left = x[x + delta <= hi]
    if left.size:
        best = max(best, float(np.max(np.abs(np.asarray(f(left + delta)) - fx[: left.size]))))
    right = x[x - delta >= lo]
    if right.size:
        best = max(best, float(np.max(np.abs(fx[n - right.size:] - np.asarray(f(right - delta))))))
    return best


def error_bound(segset: SegmentSet, f: Callable, delta_grid: int = 4096,
                lam: Optional[float] = None) -> float:
    """Lambda_r(S) * omega(f, h)."""
    lam = lam if lam is not None else lebesgue_constant(segset).value
    h = fill_distance(segset)
    return lam * modulus_of_continuity(f, h, segset.interval, delta_grid)


def nodal_lebesgue_constant(nodes, interval=(-1.0, 1.0), grid_size: Optional[int] = None) -> float:
    """sup_x sum_j |l_j(x)| for nodal interpolation."""
    xi = nodes.as_array() if isinstance(nodes, NodeSet) else np.asarray(NodeSet(tuple(nodes)).nodes)
    n = grid_size or default_grid_size(xi.size)
    lo, hi = interval
    return sup_on_interval(lambda x: np.abs(nodal_lagrange_matrix(xi, x)).sum(axis=1), lo, hi, n).value


def chebyshev_nodes(r: int) -> np.ndarray:
    """First-kind Chebyshev points cos((2i - 1) pi / (2r)), ascending."""
    return np.sort(np.cos((2 * np.arange(1, r + 1) - 1) * np.pi / (2 * r)))


def bound_c1_vs_nodal(segset: SegmentSet, nodal_lambda: Optional[float] = None) -> float:
    """(2 / (b - a)) max|s_i| r^3 Lambda_{r+1}(chain nodes)."""
    if segset.kind is not SegmentClass.CHAIN:
        raise ValueError("the nodal comparison bound applies to chain sets")
    a, b = segset.interval
    r = segset.r
    if nodal_lambda is None:
        nodal_lambda = nodal_lebesgue_constant(segset.chain_nodes(), segset.interval)
    return 2.0 / (b - a) * float(segset.lengths.max()) * r ** 3 * nodal_lambda


def equidistant_bounds(r: int):
    """Exponential sandwich (2^(r-1) / (pi r^2), r 2^(r+4)) for uniform segments."""
    if r < 1:
        raise ValueError("r must be positive")
    return (2.0 ** (r - 1) / (math.pi * r * r), r * 2.0 ** (r + 4))


def projection_lower_bound(r: int) -> float:
    """(1/2)((4/pi^2) ln r - 1), valid for every projection onto P_{r-1}."""
    return 0.5 * (4.0 / math.pi ** 2 * math.log(r) - 1.0)


def cl_log_bounds(r: int):
    """Lower bound and the logarithmic shape factor ln r + pi/2 for CL segments."""
    if r < 1:
        raise ValueError("r must be positive")
    return (projection_lower_bound(r), math.log(r) + math.pi / 2)


def k_rho_eigenvalue(j: int, rho: float) -> float:
    if not 0.0 < rho < math.pi:
        raise ValueError(f"rho must lie in (0, pi), got {rho}")
    return math.sin((j + 1) * rho) / ((j + 1) * math.sin(rho))


ENDPOINT_OFFSET = 1e-8


def apply_K_rho(f: Callable, rho: float, t: float, wrap: bool = False, n: int = 64) -> float:
    """Average of f over [cos(t + rho), cos(t - rho)].

    Without ``wrap`` both ``t - rho`` and ``t + rho`` must lie in [0, pi].
    With ``wrap`` any ``t`` in [0, pi] is accepted (arcs may cross onto the
    lower half circle); ``t`` in {0, pi} is replaced by the one-sided limit
    point ``t +- 1e-8``.
    """
    if not 0.0 < rho < math.pi:
        raise ValueError(f"rho must lie in (0, pi), got {rho}")
    if wrap:
        if not 0.0 <= t <= math.pi:
            raise ValueError(f"t must lie in [0, pi], got {t}")
        if t == 0.0:
            t = ENDPOINT_OFFSET
        elif t == math.pi:
            t = math.pi - ENDPOINT_OFFSET
    elif t - rho < 0.0 or t + rho > math.pi:
        raise ValueError("t +- rho leaves [0, pi]")
    a, b = math.cos(t + rho), math.cos(t - rho)
    return integrate_interval(f, a, b, gauss_legendre(n)) / (b - a)


def phi_lambda(lam: float, u):
    """Multiplier profile: lam u pi / sin(lam u pi) on [0, 1], linear decay to 0 on [1, 2]."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inner = (u > 0) & (u <= 1)
    arg = lam * u[inner] * math.pi
    out[inner] = arg / np.sin(arg)
    out[u == 0] = 1.0
    mid = (u > 1) & (u <= 2)
    out[mid] = (2.0 - u[mid]) * lam * math.pi / math.sin(lam * math.pi)
    return out


@dataclass(frozen=True)
class KInverseBounds:
    spectral_lower: float
    vinogradov_upper_estimate: float
    multiplier_norm_estimate: float
    tail_contribution: float
    truncated: bool = True
    z_max: float = 200.0


def multiplier_integral(lam: float, z_max: float = 200.0, quad_points: int = 32,
                        outer_points: int = 64, panel_width: float = 1.0):
    """Truncated (2/pi) int_0^zmax z |int_0^2 u phi(u) sin(zu) du| dz.

    Returns ``(value, tail)`` with ``tail`` the part from z in [z_max/2, z_max].
    """
    # inner rule: composite GL on [0,1] and [1,2] (kink of phi at u = 1),
    # panel count resolving the fastest oscillation sin(z_max u)
    per_unit = max(4, int(math.ceil(z_max / 4.0)))
    rule = gauss_legendre(quad_points)
    edges = np.linspace(0.0, 2.0, 2 * per_unit + 1)
    half = 0.5 * np.diff(edges)
    u = ((0.5 * (edges[:-1] + edges[1:]))[:, None] + half[:, None] * rule.nodes).ravel()
    wu = (half[:, None] * rule.weights).ravel()
    g = u * phi_lambda(lam, u) * wu

    outer = gauss_legendre(outer_points)
    n_panels = int(math.ceil(z_max / panel_width))
    z_edges = np.linspace(0.0, z_max, n_panels + 1)
    zh = 0.5 * np.diff(z_edges)
    z = ((0.5 * (z_edges[:-1] + z_edges[1:]))[:, None] + zh[:, None] * outer.nodes).ravel()
    wz = (zh[:, None] * outer.weights).ravel()
    integrand = np.empty(z.size)
    for start in range(0, z.size, 1024):
        zz = z[start:start + 1024]
        integrand[start:start + 1024] = zz * np.abs(np.sin(np.outer(zz, u)) @ g)
    contrib = 2.0 / math.pi * integrand * wz
    return float(contrib.sum()), float(contrib[z >= 0.5 * z_max].sum())


def k_inverse_norm_bounds(lam: float, r: Optional[int] = None, z_max: float = 200.0,
                          quad_points: int = 32) -> KInverseBounds:
    """Spectral lower bound lam pi / sin(lam pi) and a truncated multiplier-norm upper estimate.

    The multiplier integral is evaluated on [0, z_max] only; its convergence
    is not certified, so the tail over [z_max/2, z_max] is returned alongside.
    ``r`` is accepted for interface symmetry and does not enter the estimate,
    which concerns the supremum over all r.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    s = math.sin(lam * math.pi)
    if s < 1e-12:
        raise OverflowError("lambda too close to 1: sin(lambda pi) below 1e-12")
    lower = lam * math.pi / s
    m_norm, tail = multiplier_integral(lam, z_max, quad_points)
    return KInverseBounds(lower, lower * m_norm, m_norm, tail, True, z_max)


def k_inverse_norm_surrogate(rho: float, r: int, x_points: int = 201, y_points: int = 2000) -> float:
    """Brute-force sup-norm of the inverse of K_rho restricted to P_{r-1}.

    For each evaluation point x the linear program max (K^{-1} p)(x) subject
    to |p| <= 1 on a dense Chebyshev grid is solved in U-coefficients; the
    result is the maximum over a grid of x.
    """
    from scipy.optimize import linprog

    kappa = k_rho_eigenvalues(rho, r)
    if np.any(np.abs(kappa) < 1e-14):
        raise ValueError("K_rho is not invertible on P_{r-1} for this radius")
    y = np.cos(np.pi * np.arange(y_points) / (y_points - 1))
    uy = u_matrix(r, y)
    a_ub = np.vstack([uy, -uy])
    b_ub = np.ones(2 * y_points)
    best = 0.0
    for x in clustered_grid(-1.0, 1.0, x_points):
        c = u_matrix(r, [x])[0] / kappa
        res = linprog(-c, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * r, method="highs")
        if res.status == 0:
            best = max(best, -res.fun)
    return best


@dataclass(frozen=True)
class Bound:
    name: str
    lower: Optional[float] = None
    upper: Optional[float] = None


@dataclass(frozen=True)
class LebesgueReport:
    r: int
    lambda_const: float
    argmax_x: float
    op_norm: float
    fill_distance_h: float
    bounds: tuple = field(default_factory=tuple)
    grid_size: int = 0

    def bound(self, name: str) -> Bound:
        for b in self.bounds:
            if b.name == name:
                return b
        raise KeyError(name)

    def csv_rows(self) -> list:
        rows = []
        for b in self.bounds or (Bound("none"),):
            rows.append([self.r, self.lambda_const, self.argmax_x, self.op_norm, self.fill_distance_h,
                         b.name, "" if b.lower is None else b.lower, "" if b.upper is None else b.upper])
        return rows

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        if header:
            buf.write("r,lambda,argmax,opnorm,h,bound_name,lower,upper\n")
        for row in self.csv_rows():
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def full_report(segset: SegmentSet, grid_size: Optional[int] = None) -> LebesgueReport:
    r = segset.r
    basis = lagrange_basis(segset)
    n = grid_size or default_grid_size(r)
    lam = lebesgue_constant(segset, n, basis)
    op = operator_norm(segset, n, basis)
    bounds = [Bound("projection_lower", lower=projection_lower_bound(r))]
    if segset.kind is SegmentClass.CHAIN:
        bounds.append(Bound("chain_vs_nodal", upper=bound_c1_vs_nodal(segset)))
        if segset.family == "eq":
            lo, up = equidistant_bounds(r)
            bounds.append(Bound("equidistant", lower=lo, upper=up))
        elif segset.family == "cl":
            lo, shape = cl_log_bounds(r)
            bounds.append(Bound("cl_log_lower", lower=lo))
            # upper bound up to the (separately estimated) multiplier-norm factor
            bounds.append(Bound("cl_log_shape", upper=shape))
    return LebesgueReport(r, lam.value, lam.argmax, op.value, fill_distance(segset), tuple(bounds), n)
