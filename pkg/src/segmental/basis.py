"""Chebyshev polynomials, U-basis expansions and nodal Lagrange polynomials.

The working representation of every polynomial is an expansion in the
second-kind Chebyshev polynomials ``U_j``.  Since ``T_{j+1}' = (j + 1) U_j``,
segment integrals of ``U_j`` are differences of ``T_{j+1}`` values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .segments import NodeSet, Segment


def eval_U(j: int, x):
    """U_j(x) by the three-term recurrence (valid for any real x)."""
    if j < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    u_prev, u = np.ones_like(x), 2.0 * x
    if j == 0:
        return u_prev if u_prev.ndim else float(u_prev)
    for _ in range(j - 1):
        u_prev, u = u, 2.0 * x * u - u_prev
    return u if u.ndim else float(u)


def eval_T(j: int, x):
    """T_j(x) by the three-term recurrence."""
    if j < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    t_prev, t = np.ones_like(x), x.copy()
    if j == 0:
        return t_prev if t_prev.ndim else float(t_prev)
    for _ in range(j - 1):
        t_prev, t = t, 2.0 * x * t - t_prev
    return t if t.ndim else float(t)


def u_matrix(n: int, x) -> np.ndarray:
    """Columns U_0(x), ..., U_{n-1}(x) for a 1-D array of points."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((x.size, n))
    if n > 0:
        out[:, 0] = 1.0
    if n > 1:
        out[:, 1] = 2.0 * x
    for j in range(2, n):
        out[:, j] = 2.0 * x * out[:, j - 1] - out[:, j - 2]
    return out


def t_matrix(n: int, x) -> np.ndarray:
    """Columns T_0(x), ..., T_{n-1}(x)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((x.size, n))
    if n > 0:
        out[:, 0] = 1.0
    if n > 1:
        out[:, 1] = x
    for j in range(2, n):
        out[:, j] = 2.0 * x * out[:, j - 1] - out[:, j - 2]
    return out


def clenshaw_U(coeffs, x):
    """Sum of a_j U_j(x) by backward recurrence."""
    a = np.asarray(coeffs, dtype=float)
    x = np.asarray(x, dtype=float)
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for ak in a[::-1]:
        b1, b2 = ak + 2.0 * x * b1 - b2, b1
    return b1 if b1.ndim else float(b1)


@dataclass(frozen=True)
class ChebExpansion:
    """Polynomial ``sum_j a_j U_j(phi(x))`` with ``phi`` mapping ``domain`` onto [-1, 1].

    Trailing zero coefficients are allowed; ``len(coeffs)`` is a degree bound.
    """

    coeffs: tuple
    domain: tuple = (-1.0, 1.0)

    def __post_init__(self):
        c = tuple(float(v) for v in np.atleast_1d(np.asarray(self.coeffs, dtype=float)))
        if len(c) == 0:
            raise ValueError("expansion needs at least one coefficient")
        lo, hi = (float(v) for v in self.domain)
        if not lo < hi:
            raise ValueError("domain needs lo < hi")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "domain", (lo, hi))

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs) - 1

    @property
    def scale(self) -> float:
        """d phi / dx."""
        lo, hi = self.domain
        return 2.0 / (hi - lo)

    def to_reference(self, x):
        lo, hi = self.domain
        x = np.asarray(x, dtype=float)
        if self.domain == (-1.0, 1.0):
            return x
        return (2.0 * x - (lo + hi)) / (hi - lo)

    def __call__(self, x):
        return clenshaw_U(self.coeffs, self.to_reference(x))

    def integrate(self, alpha: float, beta: float) -> float:
        """Exact integral over [alpha, beta]."""
        ya, yb = self.to_reference(alpha), self.to_reference(beta)
        n = len(self.coeffs)
        t = t_matrix(n + 1, np.array([ya, yb]))
        j = np.arange(1, n + 1)
        per_term = (t[1, 1:] - t[0, 1:]) / j
        return float(np.dot(self.coeffs, per_term) / self.scale)


def eval_expansion(p: ChebExpansion, x):
    return p(x)


def integrate_U_over(j: int, seg: Segment) -> float:
    """Exact integral of U_j over the segment: (T_{j+1}(beta) - T_{j+1}(alpha)) / (j + 1)."""
    return (eval_T(j + 1, seg.beta) - eval_T(j + 1, seg.alpha)) / (j + 1)


def u_integral_matrix(alphas, betas, n: int) -> np.ndarray:
    """Matrix of integrals of U_0..U_{n-1} over [alpha_i, beta_i] via T differences."""
    tb = t_matrix(n + 1, betas)
    ta = t_matrix(n + 1, alphas)
    return (tb[:, 1:] - ta[:, 1:]) / np.arange(1, n + 1)


@dataclass(frozen=True)
class MonomialPoly:
    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in np.atleast_1d(np.asarray(self.coeffs, dtype=float)))
        if len(c) == 0:
            raise ValueError("polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), self.coeffs)


def _u_to_monomial_matrix(n: int) -> np.ndarray:
    # column j holds the monomial coefficients of U_j
    m = np.zeros((n, n))
    m[0, 0] = 1.0
    if n > 1:
        m[1, 1] = 2.0
    for j in range(2, n):
        m[1:, j] = 2.0 * m[:-1, j - 1]
        m[:, j] -= m[:, j - 2]
    return m


def _monomial_to_u_matrix(n: int) -> np.ndarray:
    # column k holds the U-coefficients of x^k, from x U_0 = U_1 / 2 and
    # x U_j = (U_{j+1} + U_{j-1}) / 2; all entries are non-negative
    m = np.zeros((n, n))
    m[0, 0] = 1.0
    for k in range(1, n):
        prev = m[:, k - 1]
        m[1:, k] += 0.5 * prev[:-1]
        m[:-1, k] += 0.5 * prev[1:]
    return m


def cheb_to_monomial(p: ChebExpansion) -> MonomialPoly:
    if p.domain != (-1.0, 1.0):
        raise ValueError("basis change is defined on the reference interval [-1, 1]")
    a = np.asarray(p.coeffs)
    return MonomialPoly(tuple(_u_to_monomial_matrix(a.size) @ a))


def monomial_to_cheb(p: MonomialPoly) -> ChebExpansion:
    c = np.asarray(p.coeffs)
    return ChebExpansion(tuple(_monomial_to_u_matrix(c.size) @ c))


def _check_nodes(nodes) -> np.ndarray:
    if isinstance(nodes, NodeSet):
        return nodes.as_array()
    arr = np.asarray(nodes, dtype=float)
    if np.unique(arr).size != arr.size:
        raise ValueError("nodes must be pairwise distinct")
    return arr


def nodal_lagrange(nodes, j: int, x):
    """l_j(x) = prod_{i != j} (x - xi_i) / (xi_j - xi_i)."""
    xi = _check_nodes(nodes)
    if not 0 <= j < xi.size:
        raise IndexError(f"node index {j} out of range")
    x = np.asarray(x, dtype=float)
    others = np.delete(xi, j)
    out = np.prod((x[..., None] - others) / (xi[j] - others), axis=-1)
    return out if out.ndim else float(out)


def nodal_lagrange_deriv(nodes, j: int, x):
    """l_j'(x) by the product rule; finite at the nodes themselves."""
    xi = _check_nodes(nodes)
    if not 0 <= j < xi.size:
        raise IndexError(f"node index {j} out of range")
    x = np.asarray(x, dtype=float)
    others = np.delete(xi, j)
    denom = np.prod(xi[j] - others)
    diffs = x[..., None] - others
    m = others.size
    total = np.zeros(x.shape)
    for i in range(m):
        total = total + np.prod(np.delete(diffs, i, axis=-1), axis=-1)
    out = total / denom
    return out if out.ndim else float(out)


def nodal_lagrange_deriv_quotient(nodes, j: int, x):
    """l_j'(x) = l_j(x) * sum_{i != j} 1 / (x - xi_i); singular at nodes other than xi_j."""
    xi = _check_nodes(nodes)
    x = np.asarray(x, dtype=float)
    others = np.delete(xi, j)
    out = nodal_lagrange(xi, j, x) * np.sum(1.0 / (x[..., None] - others), axis=-1)
    return out if np.ndim(out) else float(out)


def nodal_lagrange_matrix(nodes, x) -> np.ndarray:
    """Matrix with columns l_j(x) for all nodes (direct products)."""
    xi = _check_nodes(nodes)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    diffs = x[:, None] - xi[None, :]
    out = np.empty((x.size, xi.size))
    for j in range(xi.size):
        mask = np.arange(xi.size) != j
        out[:, j] = np.prod(diffs[:, mask] / (xi[j] - xi[mask]), axis=1)
    return out


def nodal_interpolant(nodes, values):
    """Callable evaluating the nodal interpolant sum_j values_j l_j(x)."""
    xi = _check_nodes(nodes)
    v = np.asarray(values, dtype=float)

    def p(x):
        x = np.asarray(x, dtype=float)
        out = nodal_lagrange_matrix(xi, x.ravel()) @ v
        return out.reshape(x.shape) if x.ndim else float(out[0])

    return p


def nodal_interpolant_deriv(nodes, values):
    """Callable evaluating the derivative of the nodal interpolant."""
    xi = _check_nodes(nodes)
    v = np.asarray(values, dtype=float)

    def dp(x):
        x = np.asarray(x, dtype=float)
        out = sum(v[k] * np.asarray(nodal_lagrange_deriv(xi, k, x)) for k in range(xi.size))
        return out if np.ndim(out) else float(out)

    return dp
