"""Shared test utilities: independent dense oracles and graph builders.

Everything here is deliberately written against plain numpy dense
matrices, not against the package's sparse kernels, so tests compare two
genuinely different computations of the same quantity.
"""

from __future__ import annotations

import numpy as np

from graphfilters import Family, FilterSpec, Graph, Scheme, build_graph


def dense_adjacency(g: Graph) -> np.ndarray:
    A = np.zeros((g.num_nodes, g.num_nodes))
    for u, v, w in g.edges:
        A[int(u), int(v)] = w
    return A


def dense_operator(g: Graph, scheme: Scheme) -> np.ndarray:
    """Reference construction of every normalization scheme."""
    A = dense_adjacency(g)
    n = g.num_nodes
    d = A.sum(axis=1)
    eye = np.eye(n)

    def dinv(vec, power):
        out = np.zeros_like(vec)
        nz = vec > 0
        out[nz] = vec[nz] ** -power
        return np.diag(out)

    if scheme is Scheme.ADJ_RAW:
        return A
    if scheme is Scheme.ADJ_RW:
        return dinv(d, 1.0) @ A
    if scheme is Scheme.ADJ_SYM:
        return dinv(d, 0.5) @ A @ dinv(d, 0.5)
    if scheme is Scheme.ADJ_RENORM:
        Ah = A + eye
        return dinv(d + 1.0, 0.5) @ Ah @ dinv(d + 1.0, 0.5)
    if scheme is Scheme.ADJ_RW_SELF_LOOP:
        return dinv(d + 1.0, 1.0) @ (A + eye)
    if scheme is Scheme.LAP_UNNORM:
        return np.diag(d) - A
    if scheme is Scheme.LAP_SYM:
        return eye - dinv(d, 0.5) @ A @ dinv(d, 0.5)
    if scheme is Scheme.LAP_RW:
        return eye - dinv(d, 1.0) @ A
    if scheme is Scheme.IDENTITY:
        return eye
    raise AssertionError(scheme)


def dense_filter_matrix(f: FilterSpec, g: Graph) -> np.ndarray:
    """f(M) as a dense matrix, via numpy only."""
    M = dense_operator(g, f.basis)
    n = g.num_nodes
    eye = np.eye(n)
    if f.family is Family.LINEAR:
        return f.phi * eye + f.psi * M
    if f.family is Family.POLYNOMIAL:
        out = np.zeros((n, n))
        P = eye
        for i, c in enumerate(f.coeffs):
            if i > 0:
                P = P @ M
            out = out + c * P
        return out
    num = np.zeros((n, n))
    P = eye
    for i, c in enumerate(f.num_coeffs):
        if i > 0:
            P = P @ M
        num = num + c * P
    den = eye.copy()
    P = eye
    for c in f.den_coeffs:
        P = P @ M
        den = den + c * P
    return np.linalg.solve(den, num)


def circulant_graph(n: int, offsets=(1, 2)) -> Graph:
    edges = set()
    for i in range(n):
        for k in offsets:
            j = (i + k) % n
            edges.add((min(i, j), max(i, j)))
    return build_graph(sorted(edges), num_nodes=n)


def random_connected_graph(seed: int, n_min: int = 8, n_max: int = 64) -> Graph:
    """Random tree plus extra edges: connected, no isolated nodes."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    edges = set()
    order = rng.permutation(n)
    for i in range(1, n):
        parent = order[int(rng.integers(0, i))]
        edges.add((min(order[i], parent), max(order[i], parent)))
    for _ in range(n):
        u, v = rng.integers(0, n, 2)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return build_graph(sorted((int(u), int(v)) for u, v in edges), num_nodes=n)


def random_features(g: Graph, seed: int, cols: int = 4) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal((g.num_nodes, cols))
