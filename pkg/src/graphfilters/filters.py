"""Spatial filter families and their evaluation on graphs.

Three families, all acting through a basis operator M built from the graph:

- linear:      Z = (phi*I + psi*M) X
- polynomial:  Z = sum_j c_j M^j X
- rational:    Z solves Q(M) Z = P(M) X, denominator bias fixed at 1

Polynomial evaluation keeps the running vector Y_j = M^j X and never forms
matrix powers. Rational evaluation picks a solver (fixed point, dense
direct, or conjugate gradient) and always verifies the relative residual
contract ||Q(M) Z - P(M) X||_F <= tolerance * ||P(M) X||_F.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    BasisMismatch,
    DimensionMismatch,
    InvalidParam,
    MethodUnsupported,
    OrderTooLarge,
    SingularDenominator,
    SolverDiverged,
    UnsupportedFamily,
)
from .graph import Graph
from .operators import (
    STOCHASTIC_LIKE_SCHEMES,
    Scheme,
    SparseOperator,
    apply,
    build_operator,
)

MAX_POLY_ORDER = 128
DENSE_CAP = 2048


class Family(enum.Enum):
    LINEAR = "linear"
    POLYNOMIAL = "polynomial"
    RATIONAL = "rational"


@dataclass(frozen=True)
class FilterSpec:
    """A filter family with coefficients and the basis operator it acts on.

    Exactly one coefficient group is meaningful per family: (phi, psi) for
    linear, ``coeffs`` (ascending powers, c_0..c_K) for polynomial, and
    (num_coeffs, den_coeffs) for rational, where the denominator is
    1 + sum_j den_coeffs[j-1] * M^j with its bias fixed at 1.
    """

    family: Family
    basis: Scheme
    phi: float = 0.0
    psi: float = 0.0
    coeffs: tuple = ()
    num_coeffs: tuple = ()
    den_coeffs: tuple = ()
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if self.family is Family.POLYNOMIAL and not self.coeffs:
            raise InvalidParam("polynomial filter needs at least one coefficient")
        if self.family is Family.RATIONAL and not self.num_coeffs:
            raise InvalidParam("rational filter needs a nonempty numerator")

    def degree(self) -> int:
        """Polynomial degree of the family (total degree for rational)."""
        if self.family is Family.LINEAR:
            return 1
        if self.family is Family.POLYNOMIAL:
            return len(self.coeffs) - 1
        return len(self.num_coeffs) - 1 + len(self.den_coeffs)


def linear_filter(phi: float, psi: float, basis: Scheme, name: str = "custom") -> FilterSpec:
    return FilterSpec(Family.LINEAR, basis, phi=float(phi), psi=float(psi), name=name)


def polynomial_filter(coeffs, basis: Scheme, name: str = "custom") -> FilterSpec:
    return FilterSpec(
        Family.POLYNOMIAL, basis, coeffs=tuple(float(c) for c in coeffs), name=name
    )


def rational_filter(num_coeffs, den_coeffs, basis: Scheme, name: str = "custom") -> FilterSpec:
    return FilterSpec(
        Family.RATIONAL,
        basis,
        num_coeffs=tuple(float(c) for c in num_coeffs),
        den_coeffs=tuple(float(c) for c in den_coeffs),
        name=name,
    )


@dataclass
class SolverOptions:
    """Options for the rational solver.

    method: None picks automatically (fixed point when the denominator is
    I + d*M with a guaranteed contraction, else dense direct up to
    DENSE_CAP nodes, else conjugate gradient on symmetric bases).
    """

    max_iterations: int = 1000
    tolerance: float = 1e-10
    method: str | None = None

    def __post_init__(self):
        if self.tolerance <= 0:
            raise InvalidParam("tolerance must be positive")
        if self.max_iterations < 1:
            raise InvalidParam("max_iterations must be positive")
        if self.method not in (None, "fixed_point", "dense_direct", "conjugate_gradient"):
            raise InvalidParam(f"unknown solver method {self.method!r}")


def _as_features(X, num_nodes) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[0] != num_nodes:
        raise DimensionMismatch(
            f"features must be 2-D with {num_nodes} rows, got shape {X.shape}"
        )
    return X


def _poly_apply(op: SparseOperator, coeffs, X: np.ndarray, max_order=MAX_POLY_ORDER) -> np.ndarray:
    """sum_j coeffs[j] * op^j @ X via the running-power accumulation."""
    if len(coeffs) - 1 > max_order:
        raise OrderTooLarge(
            f"polynomial order {len(coeffs) - 1} exceeds the maximum {max_order}"
        )
    Z = coeffs[0] * X
    Y = X
    for c in coeffs[1:]:
        Y = apply(op, Y)
        if c != 0.0:
            Z = Z + c * Y
    return Z


def apply_linear(f: FilterSpec, g: Graph, X, op: SparseOperator | None = None) -> np.ndarray:
    """Z = (phi*I + psi*M) X."""
    if f.family is not Family.LINEAR:
        raise UnsupportedFamily("apply_linear expects a linear filter")
    op = op if op is not None else build_operator(g, f.basis)
    X = _as_features(X, op.num_nodes)
    return f.phi * X + f.psi * apply(op, X)


def apply_polynomial(
    f: FilterSpec, g: Graph, X, op: SparseOperator | None = None, max_order=MAX_POLY_ORDER
) -> np.ndarray:
    """Z = sum_j c_j M^j X."""
    if f.family is not Family.POLYNOMIAL:
        raise UnsupportedFamily("apply_polynomial expects a polynomial filter")
    op = op if op is not None else build_operator(g, f.basis)
    X = _as_features(X, op.num_nodes)
    return _poly_apply(op, f.coeffs, X, max_order=max_order)


def _den_apply(op: SparseOperator, den_coeffs, Z: np.ndarray) -> np.ndarray:
    """Q(M) Z with Q = I + sum_j den_coeffs[j-1] M^j."""
    return _poly_apply(op, (1.0,) + tuple(den_coeffs), Z)


def _pick_method(f: FilterSpec, op: SparseOperator) -> str:
    den = f.den_coeffs
    single = len(den) == 1 or (len(den) >= 1 and not any(den[1:]))
    if (
        single
        and den
        and abs(den[0]) < 1.0
        and op.scheme in STOCHASTIC_LIKE_SCHEMES
    ):
        return "fixed_point"
    if op.num_nodes <= DENSE_CAP:
        return "dense_direct"
    if op.symmetric:
        return "conjugate_gradient"
    raise MethodUnsupported(
        "no rational solver applies: nonsymmetric basis above the dense cap"
    )


def _solve_fixed_point(op, den_coeffs, B, opts) -> np.ndarray:
    # (I + d*M) Z = B  as the contraction  Z <- B - d * M Z
    d = den_coeffs[0]
    if any(den_coeffs[1:]) or not (abs(d) < 1.0 and op.scheme in STOCHASTIC_LIKE_SCHEMES):
        raise MethodUnsupported(
            "fixed point needs a single-term denominator I + d*M with |d| < 1 "
            "on a degree-normalized scheme"
        )
    bnorm = np.linalg.norm(B)
    if bnorm == 0.0:
        return np.zeros_like(B)
    Z = B
    for _ in range(opts.max_iterations):
        Znew = B - d * apply(op, Z)
        # Znew - Z equals the residual B - Q(M) Z exactly
        if np.linalg.norm(Znew - Z) <= opts.tolerance * bnorm:
            return Znew
        Z = Znew
        if not np.isfinite(Z).all():
            raise SolverDiverged("fixed-point iteration diverged")
    raise SolverDiverged(
        f"fixed point did not reach tolerance in {opts.max_iterations} iterations"
    )


def _solve_dense_direct(op, den_coeffs, B) -> np.ndarray:
    n = op.num_nodes
    if n > DENSE_CAP:
        raise MethodUnsupported(f"dense direct solver is capped at {DENSE_CAP} nodes")
    M = op.to_dense()
    Q = np.eye(n)
    P = np.eye(n)
    for c in den_coeffs:
        P = P @ M
        if c != 0.0:
            Q = Q + c * P
    try:
        return scipy.linalg.solve(Q, B)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise SingularDenominator(str(exc)) from exc


def _solve_cg(op, den_coeffs, B, opts) -> np.ndarray:
    if not op.symmetric:
        raise MethodUnsupported("conjugate gradient needs a symmetric basis operator")
    bnorm = np.linalg.norm(B)
    if bnorm == 0.0:
        return np.zeros_like(B)

    def qmat(V):
        return _den_apply(op, den_coeffs, V)

    Z = np.zeros_like(B)
    R = B.copy()
    P = R.copy()
    rs = np.einsum("ij,ij->j", R, R)
    for _ in range(opts.max_iterations):
        QP = qmat(P)
        pq = np.einsum("ij,ij->j", P, QP)
        alpha = np.where(pq > 0, rs / np.where(pq == 0, 1.0, pq), 0.0)
        Z = Z + alpha * P
        R = R - alpha * QP
        rs_new = np.einsum("ij,ij->j", R, R)
        if np.sqrt(rs_new.sum()) <= opts.tolerance * bnorm:
            return Z
        beta = np.where(rs > 0, rs_new / np.where(rs == 0, 1.0, rs), 0.0)
        P = R + beta * P
        rs = rs_new
        if not np.isfinite(rs).all():
            raise SolverDiverged("conjugate gradient diverged")
    raise SolverDiverged(
        f"conjugate gradient did not reach tolerance in {opts.max_iterations} iterations"
    )


def apply_rational(
    f: FilterSpec,
    g: Graph,
    X,
    opts: SolverOptions | None = None,
    op: SparseOperator | None = None,
) -> np.ndarray:
    """Solve Q(M) Z = P(M) X and verify the residual contract."""
    if f.family is not Family.RATIONAL:
        raise UnsupportedFamily("apply_rational expects a rational filter")
    opts = opts or SolverOptions()
    op = op if op is not None else build_operator(g, f.basis)
    X = _as_features(X, op.num_nodes)
    B = _poly_apply(op, f.num_coeffs, X)

    if not f.den_coeffs:
        return B  # denominator is identically 1

    method = opts.method or _pick_method(f, op)
    if method == "fixed_point":
        Z = _solve_fixed_point(op, f.den_coeffs, B, opts)
    elif method == "dense_direct":
        Z = _solve_dense_direct(op, f.den_coeffs, B)
    else:
        Z = _solve_cg(op, f.den_coeffs, B, opts)

    bnorm = np.linalg.norm(B)
    residual = np.linalg.norm(_den_apply(op, f.den_coeffs, Z) - B)
    if bnorm > 0 and residual > opts.tolerance * bnorm:
        raise SolverDiverged(
            f"residual {residual / bnorm:.3e} exceeds tolerance {opts.tolerance:.1e}"
        )
    return Z


def apply_filter(
    f: FilterSpec, g: Graph, X, opts: SolverOptions | None = None,
    op: SparseOperator | None = None,
) -> np.ndarray:
    """Evaluate any filter family on a graph signal."""
    if f.family is Family.LINEAR:
        return apply_linear(f, g, X, op=op)
    if f.family is Family.POLYNOMIAL:
        return apply_polynomial(f, g, X, op=op)
    return apply_rational(f, g, X, opts=opts, op=op)


def _linear_coeffs(f: FilterSpec) -> tuple:
    if f.family is Family.LINEAR:
        return (f.phi, f.psi)
    return f.coeffs


def compose(f1: FilterSpec, f2: FilterSpec) -> FilterSpec:
    """The filter equal to applying f2 first, then f1 (coefficient convolution)."""
    if f1.basis is not f2.basis:
        raise BasisMismatch(f"cannot compose filters on {f1.basis} and {f2.basis}")
    for f in (f1, f2):
        if f.family is Family.RATIONAL:
            raise UnsupportedFamily("rational filters do not compose into this form")
    a = _linear_coeffs(f1)
    b = _linear_coeffs(f2)
    conv = np.convolve(a, b)
    last = np.max(np.nonzero(conv)[0]) if np.any(conv) else 0
    conv = tuple(float(c) for c in conv[: last + 1])
    if f1.family is Family.LINEAR and f2.family is Family.LINEAR and len(conv) <= 2:
        phi = conv[0]
        psi = conv[1] if len(conv) > 1 else 0.0
        return linear_filter(phi, psi, f1.basis)
    return polynomial_filter(conv, f1.basis)
