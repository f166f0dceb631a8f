"""Spectral side: eigendecomposition, frequency responses, equivalence checks.

The eigensolver is a hand-written cyclic Jacobi iteration, deliberately
independent of LAPACK so it can serve as an oracle for the spatial engine.
``check_equivalence`` computes a filter both ways, spatially as f(M) X and
spectrally as U g(Lambda) U^T X, and reports the worst relative deviation.
Random-walk bases are nonsymmetric but similar to a symmetric partner via
D^(1/2); the checker decomposes the partner and conjugates. Graphs with
isolated nodes (singular D^(1/2)) fall back to a dense spatial evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    InvalidParam,
    NotSymmetric,
    PoleInDomain,
    SolverDiverged,
    TooLarge,
)
from .filters import Family, FilterSpec, SolverOptions, apply_filter
from .graph import Graph, degree_vector
from .operators import Scheme, SparseOperator, build_operator

SPECTRAL_DENSE_CAP = 2048
JACOBI_OFFDIAG_TOL = 1e-10
_MAX_SWEEPS = 60

# schemes whose filters live on the [0, 2] Laplacian-eigenvalue axis
_ADJ_NORMALIZED = frozenset(
    {Scheme.ADJ_RW, Scheme.ADJ_SYM, Scheme.ADJ_RENORM, Scheme.ADJ_RW_SELF_LOOP}
)
_LAP_NORMALIZED = frozenset({Scheme.LAP_SYM, Scheme.LAP_RW})

# similarity partners: scheme -> (symmetric scheme, degree shift for D^(1/2))
_SIMILARITY = {
    Scheme.ADJ_RW: (Scheme.ADJ_SYM, 0.0),
    Scheme.ADJ_RW_SELF_LOOP: (Scheme.ADJ_RENORM, 1.0),
    Scheme.LAP_RW: (Scheme.LAP_SYM, 0.0),
}


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)


@dataclass(frozen=True)
class ResponseCurve:
    """A frequency response g sampled on an eigenvalue grid.

    axis is "laplacian" for the [0, 2] convention shared by all normalized
    bases, or "raw" for filters on unnormalized operators, whose natural
    eigenvalue range depends on the graph.
    """

    grid: np.ndarray
    values: np.ndarray
    closed_form_id: str = "custom"
    axis: str = "laplacian"

    def __post_init__(self):
        grid = np.array(self.grid, dtype=np.float64)
        values = np.array(self.values, dtype=np.float64)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise InvalidParam("grid and values must be 1-D and the same length")
        if len(grid) > 1 and not np.all(np.diff(grid) > 0):
            raise InvalidParam("response grid must be strictly increasing")
        if not np.isfinite(values).all():
            raise PoleInDomain("response values must be finite on the grid")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        grid.setflags(write=False)
        values.setflags(write=False)


def _jacobi_rotate(A, V, p, q):
    apq = A[p, q]
    if apq == 0.0:
        return
    diff = A[q, q] - A[p, p]
    if abs(diff) > 1e12 * abs(apq):
        # near-negligible pivot: first-order angle, avoids overflow in theta
        t = apq / diff
    else:
        theta = diff / (2.0 * apq)
        t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta != 0 else 1.0
    c = 1.0 / np.hypot(t, 1.0)
    s = t * c
    # two-sided rotation on rows/cols p, q; V accumulates column rotations
    col_p = A[:, p].copy()
    col_q = A[:, q].copy()
    A[:, p] = c * col_p - s * col_q
    A[:, q] = s * col_p + c * col_q
    row_p = A[p, :].copy()
    row_q = A[q, :].copy()
    A[p, :] = c * row_p - s * row_q
    A[q, :] = s * row_p + c * row_q
    A[p, q] = 0.0
    A[q, p] = 0.0
    vp = V[:, p].copy()
    vq = V[:, q].copy()
    V[:, p] = c * vp - s * vq
    V[:, q] = s * vp + c * vq


def _offdiag_norm(A) -> float:
    # summed directly; subtracting diag(A)^2 from the full norm cancels badly
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def eigendecompose(op: SparseOperator) -> SpectralDecomposition:
    """Full symmetric eigendecomposition by cyclic Jacobi rotations."""
    if not op.symmetric:
        raise NotSymmetric(f"scheme {op.scheme} is not symmetric")
    n = op.num_nodes
    if n > SPECTRAL_DENSE_CAP:
        raise TooLarge(f"dense eigensolver capped at {SPECTRAL_DENSE_CAP} nodes")
    A = op.to_dense()
    if n == 1:
        return SpectralDecomposition(A[0].copy(), np.ones((1, 1)))
    V = np.eye(n)
    for _ in range(_MAX_SWEEPS):
        if _offdiag_norm(A) <= JACOBI_OFFDIAG_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(A, V, p, q)
    if _offdiag_norm(A) > JACOBI_OFFDIAG_TOL:
        raise SolverDiverged("Jacobi sweeps did not reach the off-diagonal tolerance")
    lam = np.diag(A).copy()
    order = np.argsort(lam, kind="stable")
    return SpectralDecomposition(lam[order], V[:, order].copy())


def _eval_family(f: FilterSpec, a: np.ndarray) -> np.ndarray:
    """Evaluate the filter's scalar response at basis-operator eigenvalues a."""
    a = np.asarray(a, dtype=np.float64)
    if f.family is Family.LINEAR:
        return f.phi + f.psi * a
    if f.family is Family.POLYNOMIAL:
        return np.polynomial.polynomial.polyval(a, np.asarray(f.coeffs))
    num = np.polynomial.polynomial.polyval(a, np.asarray(f.num_coeffs))
    den = np.polynomial.polynomial.polyval(a, np.asarray((1.0,) + f.den_coeffs))
    if np.any(np.abs(den) < 1e-14):
        raise PoleInDomain("rational response has a pole at an evaluation point")
    return num / den


def frequency_response(f: FilterSpec, grid) -> ResponseCurve:
    """Closed-form response of a filter on an eigenvalue grid.

    For normalized bases the grid is on the Laplacian-eigenvalue axis
    lambda in [0, 2]; adjacency-basis filters are converted through
    a = 1 - lambda. Filters on raw operators (unnormalized adjacency or
    Laplacian) are evaluated at the grid values directly and the curve is
    flagged with axis="raw".
    """
    grid = np.asarray(grid, dtype=np.float64)
    if f.basis in _ADJ_NORMALIZED:
        values = _eval_family(f, 1.0 - grid)
        axis = "laplacian"
    elif f.basis in _LAP_NORMALIZED:
        values = _eval_family(f, grid)
        axis = "laplacian"
    elif f.basis is Scheme.IDENTITY:
        values = np.full_like(grid, float(_eval_family(f, np.array([1.0]))[0]))
        axis = "laplacian"
    else:  # raw adjacency / unnormalized Laplacian: no canonical [0, 2] axis
        values = _eval_family(f, grid)
        axis = "raw"
    return ResponseCurve(grid, values, closed_form_id=f.name, axis=axis)


def spectral_apply(response, dec: SpectralDecomposition, X) -> np.ndarray:
    """Z = U g(Lambda) U^T X.

    ``response`` may be a callable g(lambda), a ResponseCurve (interpolated
    piecewise-linearly at the eigenvalues), or a plain vector of per-
    eigenvalue gains.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    U = dec.eigenvectors
    if X.shape[0] != U.shape[0]:
        raise DimensionMismatch(
            f"decomposition has {U.shape[0]} nodes, features have {X.shape[0]} rows"
        )
    lam = dec.eigenvalues
    if callable(response):
        gains = np.asarray(response(lam), dtype=np.float64)
    elif isinstance(response, ResponseCurve):
        gains = np.interp(lam, response.grid, response.values)
    else:
        gains = np.asarray(response, dtype=np.float64)
    if gains.shape != lam.shape:
        raise DimensionMismatch("gain vector must match the eigenvalue count")
    return U @ (gains[:, None] * (U.T @ X))


@dataclass(frozen=True)
class EquivalenceReport:
    max_rel_error: float
    passed: bool
    method: str


def _dense_filter_eval(f: FilterSpec, M: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Reference evaluation of f on a dense operator matrix."""
    n = M.shape[0]
    if f.family is Family.LINEAR:
        return f.phi * X + f.psi * (M @ X)
    if f.family is Family.POLYNOMIAL:
        Z = f.coeffs[0] * X
        Y = X
        for c in f.coeffs[1:]:
            Y = M @ Y
            Z = Z + c * Y
        return Z
    B = f.num_coeffs[0] * X
    Y = X
    for c in f.num_coeffs[1:]:
        Y = M @ Y
        B = B + c * Y
    Q = np.eye(n)
    P = np.eye(n)
    for c in f.den_coeffs:
        P = P @ M
        Q = Q + c * P
    return scipy.linalg.solve(Q, B)


def check_equivalence(
    f: FilterSpec,
    g: Graph,
    X,
    tol: float = 1e-8,
    opts: SolverOptions | None = None,
    cache: dict | None = None,
) -> EquivalenceReport:
    """Compare the spatial and spectral evaluations of a filter.

    Returns the worst relative entry deviation between f(M) X computed by
    the sparse spatial engine and U g(Lambda) U^T X computed through the
    eigendecomposition (conjugated via D^(1/2) for random-walk bases).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    Z_spatial = apply_filter(f, g, X, opts=opts)

    scheme = f.basis
    method = "spectral"
    if scheme in _SIMILARITY:
        partner, shift = _SIMILARITY[scheme]
        d = degree_vector(g) + shift
        if np.any(d <= 0):
            # singular D^(1/2): verify against a dense evaluation instead
            M = build_operator(g, scheme).to_dense()
            Z_ref = _dense_filter_eval(f, M, X)
            method = "dense_spatial"
        else:
            dec = _decompose_cached(g, partner, cache)
            gains = _eval_family(f, dec.eigenvalues)
            t = np.sqrt(d)
            Z_ref = spectral_apply(gains, dec, X * t[:, None]) / t[:, None]
    else:
        dec = _decompose_cached(g, scheme, cache)
        gains = _eval_family(f, dec.eigenvalues)
        Z_ref = spectral_apply(gains, dec, X)

    scale = np.max(np.abs(Z_spatial))
    err = np.max(np.abs(Z_spatial - Z_ref)) / (scale if scale > 0 else 1.0)
    return EquivalenceReport(max_rel_error=float(err), passed=bool(err <= tol), method=method)


def _decompose_cached(g: Graph, scheme: Scheme, cache: dict | None) -> SpectralDecomposition:
    if cache is None:
        return eigendecompose(build_operator(g, scheme))
    key = (g, scheme)
    if key not in cache:
        cache[key] = eigendecompose(build_operator(g, scheme))
    return cache[key]
