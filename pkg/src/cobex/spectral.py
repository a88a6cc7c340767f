"""Real spectral quantities: graph Laplacian, spectral gap, Cheeger-Buser.

The eigensolver is a dense cyclic Jacobi iteration.  Real operators use a
signed incidence with lexicographic orientation; the Z2 core stays unsigned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .complex import CROSS, SIMPLICIAL, Complex, degree_profile
from .errors import InvalidParameter, NumericFailure, UndefinedValue, UnsupportedOperation
from .expansion import coboundary_expansion

EIG_TOL = 1e-10
CMP_TOL = 1e-8


def graph_laplacian(g: Complex) -> np.ndarray:
    """Degree diagonal minus adjacency of the 1-skeleton."""
    n = g.count(0)
    lap = np.zeros((n, n))
    if g.top_dim < 1:
        return lap
    for e in g.boundary(1):
        if len(e) != 2:
            continue
        a, b = e
        lap[a, a] += 1
        lap[b, b] += 1
        lap[a, b] -= 1
        lap[b, a] -= 1
    return lap


def jacobi_eigh(m: np.ndarray, tol: float = EIG_TOL, max_sweeps: int = 100):
    """Eigenvalues (ascending) and eigenvectors (columns) by cyclic Jacobi rotations."""
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameter("matrix must be square")
    if not np.array_equal(a, a.T):
        raise InvalidParameter("matrix must be symmetric")
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                h = a[q, q] - a[p, p]
                if abs(h) + 100.0 * abs(apq) == abs(h):
                    # theta^2 would overflow; t ~ 1/(2 theta)
                    t = apq / h
                else:
                    theta = h / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise NumericFailure(f"Jacobi did not converge in {max_sweeps} sweeps")
    vals = np.diag(a).copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def eigenvalues_sym(m: np.ndarray, tol: float = EIG_TOL) -> list[float]:
    vals, _ = jacobi_eigh(m, tol)
    return vals.tolist()


def spectral_gap(g: Complex) -> float:
    vals = eigenvalues_sym(graph_laplacian(g))
    return vals[1] if len(vals) > 1 else 0.0


# -- R-expansion probe ----------------------------------------------------------------


def rayleigh_quotient(lap: np.ndarray, beta: np.ndarray) -> float:
    """|d beta|_2 / min_c |beta + c 1|_2."""
    centered = beta - beta.mean()
    den = float(np.linalg.norm(centered))
    if den == 0.0:
        raise UndefinedValue("constant vectors have zero quotient norm")
    return math.sqrt(max(float(beta @ lap @ beta), 0.0)) / den


@dataclass
class ProbeReport:
    sqrt_lambda1: float
    eigvec_quotient: float
    min_probe_quotient: float
    probes: int

    @property
    def ok(self) -> bool:
        rel = abs(self.eigvec_quotient - self.sqrt_lambda1) <= 1e-6 * max(self.sqrt_lambda1, 1.0)
        return rel and self.min_probe_quotient >= self.sqrt_lambda1 - CMP_TOL


def real_expansion_probe(g: Complex, probes: int = 100, seed: int = 0) -> ProbeReport:
    lap = graph_laplacian(g)
    vals, vecs = jacobi_eigh(lap)
    if len(vals) < 2 or vals[1] <= 1e-9:
        raise UndefinedValue("graph is disconnected; lambda_1 = 0")
    lam1 = float(vals[1])
    eig_q = rayleigh_quotient(lap, vecs[:, 1])
    rng = np.random.default_rng(seed)
    low = math.inf
    for _ in range(probes):
        beta = rng.standard_normal(lap.shape[0])
        low = min(low, rayleigh_quotient(lap, beta))
    return ProbeReport(math.sqrt(lam1), eig_q, low, probes)


# -- Cheeger-Buser ----------------------------------------------------------------------


@dataclass
class SpectralReport:
    lambda1: float
    max_degree: int
    h_z2: Fraction
    cheeger_lower: float
    buser_upper: float

    @property
    def lower_ok(self) -> bool:
        return self.cheeger_lower <= float(self.h_z2) + CMP_TOL

    @property
    def upper_ok(self) -> bool:
        return float(self.h_z2) <= self.buser_upper + CMP_TOL

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok


def cheeger_buser_check(g: Complex, **solver) -> SpectralReport:
    """lambda_1/2 <= h^0(G; Z2) <= sqrt(2 D lambda_1)."""
    g = g.skeleton(min(g.top_dim, 1))
    rep = coboundary_expansion(g, 0, **solver)
    if not rep.exact:
        raise NumericFailure("h^0 could not be solved exactly")
    lam1 = max(spectral_gap(g), 0.0)
    deg = degree_profile(g, 0).max_degree if g.top_dim >= 1 else 0
    return SpectralReport(lam1, deg, rep.value, lam1 / 2, math.sqrt(2 * deg * lam1))


# -- exploratory higher Laplacian -------------------------------------------------------


def signed_coboundary(x: Complex, k: int) -> np.ndarray:
    """Real d_k with lexicographic orientation: face i of a cell has sign (-1)^i."""
    if x.kind not in (SIMPLICIAL, CROSS):
        raise UnsupportedOperation("signed incidence needs vertex-ordered cells")
    if k == -1:
        return np.ones((x.count(0), 1))
    out = np.zeros((x.count(k + 1), x.count(k)))
    if k >= x.top_dim:
        return out
    for j, cell in enumerate(x.labels(k + 1)):
        for i in range(len(cell)):
            face = cell[:i] + cell[i + 1 :]
            out[j, x.index_of(k, face)] = (-1) ** i
    return out


def _orthonormal_complement(b: np.ndarray, dim: int) -> np.ndarray:
    if b.size == 0 or not b.any():
        return np.eye(dim)
    u, s, _ = np.linalg.svd(b, full_matrices=True)
    r = int((s > 1e-9 * max(s.max(), 1.0)).sum())
    return u[:, r:]


def up_down_laplacian_gap(x: Complex, k: int) -> float:
    """Smallest eigenvalue of d_k^T d_k on the orthogonal complement of im d_{k-1}.

    On that complement the down part vanishes, so this is also the smallest
    eigenvalue of the full up-down Laplacian there.  Exploratory only.
    """
    if not 0 <= k <= x.top_dim:
        raise InvalidParameter(f"k={k} out of range")
    dk = signed_coboundary(x, k)
    lower = signed_coboundary(x, k - 1)
    q = _orthonormal_complement(lower, x.count(k))
    if q.shape[1] == 0:
        raise UndefinedValue("every k-cochain is a coboundary")
    restricted = q.T @ (dk.T @ dk) @ q
    restricted = (restricted + restricted.T) / 2
    return float(eigenvalues_sym(restricted)[0])
