import numpy as np
import pytest

from graphfilters import (
    DimensionMismatch,
    Scheme,
    apply,
    build_graph,
    build_operator,
    identity_operator,
)
from helpers import dense_operator, random_connected_graph, random_features

ALL_SCHEMES = list(Scheme)


def test_k3_hand_values(k3):
    # 2-regular triangle: every normalization has one closed-form entry
    entries = {
        Scheme.ADJ_RW: 0.5,
        Scheme.ADJ_SYM: 0.5,
        Scheme.ADJ_RENORM: 1.0 / 3.0,
        Scheme.ADJ_RW_SELF_LOOP: 1.0 / 3.0,
    }
    for scheme, value in entries.items():
        M = build_operator(k3, scheme).to_dense()
        off_diag = ~np.eye(3, dtype=bool)
        assert np.allclose(M[off_diag], value, atol=1e-15), scheme
    renorm = build_operator(k3, Scheme.ADJ_RENORM).to_dense()
    assert np.allclose(np.diag(renorm), 1.0 / 3.0, atol=1e-15)
    lap = build_operator(k3, Scheme.LAP_UNNORM).to_dense()
    assert np.allclose(np.diag(lap), 2.0)
    assert np.allclose(lap[~np.eye(3, dtype=bool)], -1.0)


@pytest.mark.parametrize("scheme", ALL_SCHEMES)
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_matches_dense_reference(scheme, seed):
    g = random_connected_graph(seed, 5, 30)
    M = build_operator(g, scheme).to_dense()
    assert np.allclose(M, dense_operator(g, scheme), atol=1e-14), scheme


def test_weighted_graph_matches_dense_reference():
    g = build_graph([(0, 1, 0.5), (1, 2, 2.0), (0, 2, 3.0), (2, 3, 1.5)])
    for scheme in ALL_SCHEMES:
        M = build_operator(g, scheme).to_dense()
        assert np.allclose(M, dense_operator(g, scheme), atol=1e-14), scheme


def test_isolated_node_rows():
    g = build_graph([(0, 1), (1, 2)], num_nodes=4)
    rw = build_operator(g, Scheme.ADJ_RW).to_dense()
    assert np.all(rw[3] == 0.0)
    lap_sym = build_operator(g, Scheme.LAP_SYM).to_dense()
    assert lap_sym[3, 3] == 1.0
    assert np.all(lap_sym[3, :3] == 0.0)


def test_laplacian_shares_adjacency_arithmetic():
    # entrywise: lap_sym off-diagonals must be exact negations of adj_sym
    g = random_connected_graph(3, 5, 20)
    adj = build_operator(g, Scheme.ADJ_SYM).to_dense()
    lap = build_operator(g, Scheme.LAP_SYM).to_dense()
    off = ~np.eye(g.num_nodes, dtype=bool)
    assert np.array_equal(lap[off], -adj[off])
    assert np.all(np.diag(lap) == 1.0)


def test_row_stochastic_schemes():
    g = random_connected_graph(4, 5, 20)
    for scheme in (Scheme.ADJ_RW, Scheme.ADJ_RW_SELF_LOOP):
        M = build_operator(g, scheme).to_dense()
        assert np.allclose(M.sum(axis=1), 1.0, atol=1e-14)
    lap_rows = build_operator(g, Scheme.LAP_UNNORM).to_dense().sum(axis=1)
    assert np.allclose(lap_rows, 0.0, atol=1e-12)


def test_symmetry_flags():
    g = build_graph([(0, 1), (1, 2)])  # path: not regular
    symmetric = {
        Scheme.ADJ_RAW: True,
        Scheme.ADJ_RW: False,
        Scheme.ADJ_SYM: True,
        Scheme.ADJ_RENORM: True,
        Scheme.ADJ_RW_SELF_LOOP: False,
        Scheme.LAP_UNNORM: True,
        Scheme.LAP_SYM: True,
        Scheme.LAP_RW: False,
        Scheme.IDENTITY: True,
    }
    for scheme, expected in symmetric.items():
        assert build_operator(g, scheme).symmetric is expected, scheme


def test_identity_operator():
    op = identity_operator(4)
    assert np.array_equal(op.to_dense(), np.eye(4))
    assert op.nnz == 4


def test_apply_matches_dense_matmul():
    g = random_connected_graph(5, 5, 30)
    X = random_features(g, 9, cols=3)
    for scheme in ALL_SCHEMES:
        op = build_operator(g, scheme)
        assert np.allclose(apply(op, X), dense_operator(g, scheme) @ X, atol=1e-13)


def test_apply_promotes_vectors_and_checks_shape(k3):
    op = build_operator(k3, Scheme.ADJ_RW)
    z = apply(op, np.ones(3))
    assert z.shape == (3, 1)
    with pytest.raises(DimensionMismatch):
        apply(op, np.ones((4, 2)))
    with pytest.raises(DimensionMismatch):
        apply(op, np.ones((3, 2, 2)))


def test_matmul_operator_shorthand(k3):
    op = build_operator(k3, Scheme.ADJ_SYM)
    X = random_features(k3, 0)
    assert np.array_equal(op @ X, apply(op, X))


def test_operator_arrays_are_write_locked(k3):
    op = build_operator(k3, Scheme.ADJ_SYM)
    with pytest.raises(ValueError):
        op.values[0] = 99.0
