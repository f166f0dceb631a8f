"""Walk-operator closed forms, Monte-Carlo checks, smoothing, benchmarks.

The random-walk co-occurrence estimator counts, for every walk position
with a complete forward window, the pairs (current node, node s steps
ahead) for s = 0..t, keyed by the current node and row-normalized. By the
Markov property its expectation is exactly the window-averaged transition
operator (1/(t+1)) * sum_{s=0..t} (D^-1 A)^s, which is what the closed
form ``deepwalk_operator`` builds, so the deviation between the two is
pure sampling noise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    InvalidConfig,
    InvalidParam,
    IsolatedNode,
    UnknownModel,
)
from .filters import FilterSpec, apply_filter, polynomial_filter
from .graph import Graph, build_graph, degree_vector
from .operators import Scheme, build_operator

WALK_BUDGET = 10_000_000


@dataclass(frozen=True)
class WalkConfig:
    """Random-walk sampling configuration.

    walk_length counts steps (a walk visits walk_length + 1 nodes) and
    defaults to the window size t, the shortest walk with one complete
    window. p and q are the return and in-out parameters of the biased
    walk's closed form; they do not affect the sampler.
    """

    t: int
    num_walks: int
    walk_length: int | None = None
    rng_seed: int = 0
    p: float = 1.0
    q: float = 1.0

    def __post_init__(self):
        if self.t < 1:
            raise InvalidConfig("window t must be a positive integer")
        if self.num_walks < 1:
            raise InvalidConfig("num_walks must be a positive integer")
        if self.walk_length is None:
            object.__setattr__(self, "walk_length", self.t)
        if self.walk_length < self.t:
            raise InvalidConfig("walk_length must be at least the window t")
        if self.p <= 0 or self.q <= 0:
            raise InvalidConfig("p and q must be positive")


@dataclass(frozen=True)
class WalkCheckReport:
    empirical: np.ndarray
    expected: np.ndarray
    max_abs_dev: float


@dataclass(frozen=True)
class SmoothingProfile:
    depths: tuple
    energy: tuple
    pairwise_spread: tuple
    connected: bool


@dataclass(frozen=True)
class BenchTable:
    """Median apply times (seconds) per graph size for one filter."""

    sizes: tuple
    nnz: tuple
    times: tuple
    filter_degree: int
    feature_dim: int
    repetitions: int


def _require_no_isolated(g: Graph) -> np.ndarray:
    deg = degree_vector(g)
    if np.any(deg == 0):
        raise IsolatedNode("walk operators need every node to have degree > 0")
    return deg


def deepwalk_operator(g: Graph, t: int) -> FilterSpec:
    """Window-averaged transition operator as a polynomial filter.

    Coefficients are 1/(t+1) on powers 0..t of the random-walk operator;
    the last one is set to 1 - sum(others) so they add to exactly 1.
    """
    if t < 0:
        raise InvalidParam("window t must be nonnegative")
    _require_no_isolated(g)
    c = 1.0 / (t + 1)
    coeffs = [c] * (t + 1)
    coeffs[-1] = 1.0 - c * t
    return polynomial_filter(coeffs, Scheme.ADJ_RW, name="deepwalk")


def _dense_walk_matrix(g: Graph, t: int) -> np.ndarray:
    M = build_operator(g, Scheme.ADJ_RW).to_dense()
    spec = deepwalk_operator(g, t)
    out = spec.coeffs[0] * np.eye(g.num_nodes)
    P = np.eye(g.num_nodes)
    for c in spec.coeffs[1:]:
        P = P @ M
        out = out + c * P
    return out


def node2vec_operator(g: Graph, p: float, q: float) -> np.ndarray:
    """Dense closed form (1/p) I + M + (1/q)(M^2 - M) with M = D^-1 A."""
    if p <= 0 or q <= 0:
        raise InvalidParam("p and q must be positive")
    _require_no_isolated(g)
    M = build_operator(g, Scheme.ADJ_RW).to_dense()
    M2 = M @ M
    return (1.0 / p) * np.eye(g.num_nodes) + M + (1.0 / q) * (M2 - M)


def _simulate_counts(g: Graph, cfg: WalkConfig) -> np.ndarray:
    """Co-occurrence counts over complete windows, sharded per start node."""
    n = g.num_nodes
    op = build_operator(g, Scheme.ADJ_RW)
    indptr, indices, values = op.indptr, op.indices, op.values
    # per-row cumulative transition probabilities, shifted by the row index
    # so one global searchsorted can invert the CDF for every walker at once
    cum = np.copy(values)
    for i in range(n):
        row = slice(indptr[i], indptr[i + 1])
        c = np.cumsum(values[row])
        c[-1] = 1.0
        cum[row] = c + i
    steps = cfg.walk_length
    counts = np.zeros((n, n))
    for node in range(n):
        rng = np.random.default_rng(cfg.rng_seed + node)
        draws = rng.random((cfg.num_walks, steps))
        walk = np.empty((cfg.num_walks, steps + 1), dtype=np.int64)
        walk[:, 0] = node
        cur = walk[:, 0]
        for step in range(steps):
            idx = np.searchsorted(cum, cur + draws[:, step], side="left")
            cur = indices[idx]
            walk[:, step + 1] = cur
        for i in range(steps - cfg.t + 1):
            for s in range(cfg.t + 1):
                np.add.at(counts, (walk[:, i], walk[:, i + s]), 1)
    return counts


def monte_carlo_walk_check(
    g: Graph, cfg: WalkConfig, budget: int = WALK_BUDGET
) -> WalkCheckReport:
    """Empirical window co-occurrence versus the closed-form operator."""
    _require_no_isolated(g)
    if cfg.num_walks * g.num_nodes > budget:
        raise BudgetExceeded(
            f"{cfg.num_walks} walks x {g.num_nodes} nodes exceeds the budget {budget}"
        )
    counts = _simulate_counts(g, cfg)
    totals = counts.sum(axis=1, keepdims=True)
    empirical = counts / np.where(totals == 0, 1.0, totals)
    expected = _dense_walk_matrix(g, cfg.t)
    dev = float(np.max(np.abs(empirical - expected)))
    return WalkCheckReport(empirical=empirical, expected=expected, max_abs_dev=dev)


def dirichlet_energy(g: Graph, Z) -> float:
    """sum over edges w_uv * ||Z_u - Z_v||^2 (= trace(Z^T L Z))."""
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim == 1:
        Z = Z[:, None]
    if Z.shape[0] != g.num_nodes:
        raise DimensionMismatch(
            f"graph has {g.num_nodes} nodes, features have {Z.shape[0]} rows"
        )
    rows, cols, w = g.edge_arrays()
    if len(rows) == 0:
        return 0.0
    diffs = Z[rows] - Z[cols]
    # both orientations are stored, so halve the directed sum
    return float(0.5 * np.sum(w * np.einsum("ij,ij->i", diffs, diffs)))


def _pairwise_spread(Z: np.ndarray) -> float:
    if Z.shape[0] < 2:
        return 0.0
    return float(np.mean(pdist(Z)))


def _is_connected(g: Graph) -> bool:
    rows, cols, _ = g.edge_arrays()
    m = scipy.sparse.coo_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(g.num_nodes, g.num_nodes)
    )
    parts, _ = connected_components(m, directed=False)
    return parts == 1


def oversmoothing_profile(g: Graph, X, model: str, depths, alpha: float = 0.2) -> SmoothingProfile:
    """Dirichlet energy and mean pairwise distance across stacking depth.

    model "gcn" or "sgc": depth K applies the renormalized adjacency K
    times. model "ppnp": depth K runs K steps of the restart iteration
    Z <- (1 - alpha) M Z + alpha X from Z = X, whose limit keeps an alpha
    share of the original features and therefore resists collapse.
    """
    depths = [int(d) for d in depths]
    if not depths or any(d < 0 for d in depths):
        raise InvalidParam("depths must be nonnegative integers")
    if any(b <= a for a, b in zip(depths, depths[1:])):
        raise InvalidParam("depths must be strictly ascending")
    if model not in ("gcn", "sgc", "ppnp"):
        raise UnknownModel(f"no smoothing profile for model {model!r}")

    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if model == "ppnp":
        if not 0.0 < alpha <= 1.0:
            raise InvalidParam("ppnp needs alpha in (0, 1]")
        op = build_operator(g, Scheme.ADJ_RW_SELF_LOOP)
    else:
        op = build_operator(g, Scheme.ADJ_RENORM)

    energies, spreads = [], []
    Z = X
    depth_now = 0
    for target_depth in depths:
        while depth_now < target_depth:
            if model == "ppnp":
                Z = (1.0 - alpha) * (op @ Z) + alpha * X
            else:
                Z = op @ Z
            depth_now += 1
        energies.append(dirichlet_energy(g, Z))
        spreads.append(_pairwise_spread(Z))
    return SmoothingProfile(
        depths=tuple(depths),
        energy=tuple(energies),
        pairwise_spread=tuple(spreads),
        connected=_is_connected(g),
    )


def benchmark_graph(n: int, degree: int = 16, seed: int = 0) -> Graph:
    """Random degree-regular graph for timing runs."""
    import networkx as nx

    gx = nx.random_regular_graph(degree, n, seed=seed)
    return build_graph([(int(u), int(v)) for u, v in gx.edges()], num_nodes=n)


def bench_filter(
    f: FilterSpec, sizes, F: int = 32, repetitions: int = 9, seed: int = 0, degree: int = 16
) -> BenchTable:
    """Median wall time of one filter application per graph size.

    Graphs are random degree-regular so nonzeros grow linearly with size;
    operator construction is excluded from the timed region. The default
    feature width keeps the working set of the smallest stock size inside
    cache, so the medians track arithmetic rather than a cache cliff.
    """
    sizes = [int(s) for s in sizes]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InvalidParam("sizes must be ascending")
    times, nnzs = [], []
    for n in sizes:
        g = benchmark_graph(n, degree=degree, seed=seed)
        op = build_operator(g, f.basis)
        rng = np.random.default_rng(seed + n)
        X = rng.standard_normal((n, F))
        apply_filter(f, g, X, op=op)  # warmup outside the timed region
        reps = []
        for _ in range(repetitions):
            start = time.perf_counter()
            apply_filter(f, g, X, op=op)
            reps.append(time.perf_counter() - start)
        times.append(float(np.median(reps)))
        nnzs.append(op.nnz)
    return BenchTable(
        sizes=tuple(sizes),
        nnz=tuple(nnzs),
        times=tuple(times),
        filter_degree=f.degree(),
        feature_dim=F,
        repetitions=repetitions,
    )


def loglog_slope(xs, ys) -> float:
    """Slope of log(ys) against log(xs) by least squares."""
    return float(np.polyfit(np.log(np.asarray(xs, dtype=np.float64)),
                            np.log(np.asarray(ys, dtype=np.float64)), 1)[0])
