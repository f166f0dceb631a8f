"""Normalized graph operators in compressed sparse row form.

Each operator is an adjacency or Laplacian under one normalization scheme:

====================  =============================  =========
scheme                matrix                         symmetric
====================  =============================  =========
ADJ_RAW               A                              yes
ADJ_RW                D^-1 A                         no
ADJ_SYM               D^-1/2 A D^-1/2                yes
ADJ_RENORM            Dh^-1/2 (A+I) Dh^-1/2          yes
ADJ_RW_SELF_LOOP      Dh^-1 (A+I)                    no
LAP_UNNORM            D - A                          yes
LAP_SYM               I - ADJ_SYM                    yes
LAP_RW                I - ADJ_RW                     no
IDENTITY              I                              yes
====================  =============================  =========

with D the weighted degree matrix and Dh = D + I the self-loop-augmented
degree. Inverse powers of zero degrees are defined as 0, so isolated nodes
produce zero rows in the plain normalized operators.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, UnsupportedScheme
from .graph import Graph, degree_vector


class Scheme(enum.Enum):
    """Normalization scheme tags."""

    ADJ_RAW = "adj_raw"
    ADJ_RW = "adj_rw"
    ADJ_SYM = "adj_sym"
    ADJ_RENORM = "adj_renorm"
    ADJ_RW_SELF_LOOP = "adj_rw_self_loop"
    LAP_UNNORM = "lap_unnorm"
    LAP_SYM = "lap_sym"
    LAP_RW = "lap_rw"
    IDENTITY = "identity"


_ADJACENCY_SCHEMES = (
    Scheme.ADJ_RAW,
    Scheme.ADJ_RW,
    Scheme.ADJ_SYM,
    Scheme.ADJ_RENORM,
    Scheme.ADJ_RW_SELF_LOOP,
)
_LAPLACIAN_SCHEMES = (Scheme.LAP_UNNORM, Scheme.LAP_SYM, Scheme.LAP_RW)

_SYMMETRIC_SCHEMES = frozenset(
    {
        Scheme.ADJ_RAW,
        Scheme.ADJ_SYM,
        Scheme.ADJ_RENORM,
        Scheme.LAP_UNNORM,
        Scheme.LAP_SYM,
        Scheme.IDENTITY,
    }
)

# Schemes whose spectral radius is bounded by 1 (row-stochastic operators and
# their symmetric similarity partners); used by the fixed-point solver guard.
STOCHASTIC_LIKE_SCHEMES = frozenset(
    {Scheme.ADJ_RW, Scheme.ADJ_SYM, Scheme.ADJ_RENORM, Scheme.ADJ_RW_SELF_LOOP}
)


@dataclass(frozen=True)
class SparseOperator:
    """A graph operator stored in CSR form and tagged with its scheme."""

    num_nodes: int
    indptr: np.ndarray
    indices: np.ndarray
    values: np.ndarray
    scheme: Scheme
    symmetric: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "symmetric", self.scheme in _SYMMETRIC_SCHEMES)
        for arr in (self.indptr, self.indices, self.values):
            arr.setflags(write=False)
        csr = sp.csr_matrix(
            (self.values, self.indices, self.indptr),
            shape=(self.num_nodes, self.num_nodes),
        )
        object.__setattr__(self, "_csr", csr)

    @property
    def nnz(self) -> int:
        return len(self.values)

    def to_dense(self) -> np.ndarray:
        return self._csr.toarray()

    def __matmul__(self, X: np.ndarray) -> np.ndarray:
        return apply(self, X)


def _from_coo(num_nodes, rows, cols, vals, scheme) -> SparseOperator:
    coo = sp.coo_matrix((vals, (rows, cols)), shape=(num_nodes, num_nodes))
    csr = coo.tocsr()
    csr.sort_indices()
    return SparseOperator(
        num_nodes=num_nodes,
        indptr=csr.indptr.astype(np.int64),
        indices=csr.indices.astype(np.int64),
        values=csr.data.astype(np.float64),
        scheme=scheme,
    )


def _inv_power(deg: np.ndarray, power: float) -> np.ndarray:
    # 0 where degree is 0: keeps normalized operators well-defined
    out = np.zeros_like(deg)
    nz = deg > 0
    out[nz] = deg[nz] ** -power
    return out


def normalized_adjacency(g: Graph, scheme: Scheme) -> SparseOperator:
    """Adjacency operator of ``g`` under the given normalization scheme."""
    if scheme not in _ADJACENCY_SCHEMES:
        raise UnsupportedScheme(f"{scheme} is not an adjacency scheme")
    rows, cols, w = g.edge_arrays()
    n = g.num_nodes
    deg = degree_vector(g)

    if scheme is Scheme.ADJ_RAW:
        return _from_coo(n, rows, cols, w, scheme)
    if scheme is Scheme.ADJ_RW:
        vals = _inv_power(deg, 1.0)[rows] * w
        return _from_coo(n, rows, cols, vals, scheme)
    if scheme is Scheme.ADJ_SYM:
        dis = _inv_power(deg, 0.5)
        vals = dis[rows] * w * dis[cols]
        return _from_coo(n, rows, cols, vals, scheme)

    # self-loop variants normalize A + I by Dh = D + I
    dh = deg + 1.0
    loops = np.arange(n)
    all_rows = np.concatenate([rows, loops])
    all_cols = np.concatenate([cols, loops])
    all_w = np.concatenate([w, np.ones(n)])
    if scheme is Scheme.ADJ_RENORM:
        dis = dh**-0.5
        vals = dis[all_rows] * all_w * dis[all_cols]
    else:  # ADJ_RW_SELF_LOOP
        vals = all_w / dh[all_rows]
    return _from_coo(n, all_rows, all_cols, vals, scheme)


def laplacian(g: Graph, scheme: Scheme) -> SparseOperator:
    """Laplacian operator of ``g`` under the given normalization scheme."""
    if scheme not in _LAPLACIAN_SCHEMES:
        raise UnsupportedScheme(f"{scheme} is not a Laplacian scheme")
    n = g.num_nodes
    loops = np.arange(n)
    if scheme is Scheme.LAP_UNNORM:
        rows, cols, w = g.edge_arrays()
        deg = degree_vector(g)
        all_rows = np.concatenate([rows, loops])
        all_cols = np.concatenate([cols, loops])
        vals = np.concatenate([-w, deg])
        return _from_coo(n, all_rows, all_cols, vals, scheme)

    # I minus the normalized adjacency, reusing its exact entry values
    base = normalized_adjacency(
        g, Scheme.ADJ_SYM if scheme is Scheme.LAP_SYM else Scheme.ADJ_RW
    )
    rows = np.repeat(np.arange(n), np.diff(base.indptr))
    all_rows = np.concatenate([rows, loops])
    all_cols = np.concatenate([base.indices, loops])
    vals = np.concatenate([-base.values, np.ones(n)])
    return _from_coo(n, all_rows, all_cols, vals, scheme)


def identity_operator(num_nodes: int) -> SparseOperator:
    """The identity as a SparseOperator."""
    n = num_nodes
    return _from_coo(n, np.arange(n), np.arange(n), np.ones(n), Scheme.IDENTITY)


def build_operator(g: Graph, scheme: Scheme) -> SparseOperator:
    """Dispatch to the right constructor for any scheme tag."""
    if scheme in _ADJACENCY_SCHEMES:
        return normalized_adjacency(g, scheme)
    if scheme in _LAPLACIAN_SCHEMES:
        return laplacian(g, scheme)
    if scheme is Scheme.IDENTITY:
        return identity_operator(g.num_nodes)
    raise UnsupportedScheme(f"unknown scheme {scheme!r}")


def apply(op: SparseOperator, X: np.ndarray) -> np.ndarray:
    """Sparse-times-dense product op @ X."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise DimensionMismatch(f"features must be 1-D or 2-D, got {X.ndim}-D")
    if X.shape[0] != op.num_nodes:
        raise DimensionMismatch(
            f"operator has {op.num_nodes} nodes, features have {X.shape[0]} rows"
        )
    return op._csr @ X
