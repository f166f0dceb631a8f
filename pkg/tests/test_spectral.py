import numpy as np
import pytest

from graphfilters import (
    InvalidParam,
    NotSymmetric,
    PoleInDomain,
    ResponseCurve,
    Scheme,
    TooLarge,
    build_graph,
    build_operator,
    check_equivalence,
    eigendecompose,
    frequency_response,
    linear_filter,
    make_preset,
    polynomial_filter,
    rational_filter,
    spectral_apply,
)
from helpers import dense_operator, random_connected_graph, random_features

SYMMETRIC_SCHEMES = [
    Scheme.ADJ_RAW,
    Scheme.ADJ_SYM,
    Scheme.ADJ_RENORM,
    Scheme.LAP_UNNORM,
    Scheme.LAP_SYM,
]


@pytest.mark.parametrize("scheme", SYMMETRIC_SCHEMES)
@pytest.mark.parametrize("seed", [0, 7])
def test_eigendecompose_against_lapack(scheme, seed):
    # numpy.linalg.eigh is the independent oracle for the Jacobi sweep
    g = random_connected_graph(seed, 5, 40)
    op = build_operator(g, scheme)
    dec = eigendecompose(op)
    lam_ref = np.linalg.eigvalsh(dense_operator(g, scheme))
    assert np.allclose(dec.eigenvalues, lam_ref, atol=1e-10)
    assert np.all(np.diff(dec.eigenvalues) >= -1e-12)  # ascending
    U = dec.eigenvectors
    assert np.allclose(U.T @ U, np.eye(g.num_nodes), atol=1e-10)
    M = (U * dec.eigenvalues) @ U.T
    assert np.allclose(M, op.to_dense(), atol=1e-9)


def test_eigendecompose_single_node():
    g = build_graph([], num_nodes=1)
    dec = eigendecompose(build_operator(g, Scheme.LAP_SYM))
    assert dec.eigenvalues.tolist() == [1.0]  # isolated-node convention
    assert dec.eigenvectors.tolist() == [[1.0]]


def test_eigendecompose_rejects_nonsymmetric():
    g = build_graph([(0, 1), (1, 2)])  # path: random-walk operator asymmetric
    with pytest.raises(NotSymmetric):
        eigendecompose(build_operator(g, Scheme.ADJ_RW))


def test_eigendecompose_dense_cap():
    edges = [(i, i + 1) for i in range(2100)]
    g = build_graph(edges)
    with pytest.raises(TooLarge):
        eigendecompose(build_operator(g, Scheme.LAP_SYM))


def test_frequency_response_gcn_axis():
    grid = np.linspace(0.0, 2.0, 31)
    curve = frequency_response(make_preset("gcn"), grid)
    assert curve.axis == "laplacian"
    assert np.allclose(curve.values, 1.0 - grid, atol=1e-15)
    assert curve.values[0] == 1.0


def test_frequency_response_laplacian_basis():
    f = polynomial_filter([0.0, 1.0], Scheme.LAP_SYM)
    grid = np.linspace(0.0, 2.0, 11)
    curve = frequency_response(f, grid)
    assert np.allclose(curve.values, grid)


def test_frequency_response_raw_axis():
    f = linear_filter(1.5, 1.0, Scheme.ADJ_RAW)
    grid = np.linspace(-2.0, 2.0, 9)
    curve = frequency_response(f, grid)
    assert curve.axis == "raw"
    assert np.allclose(curve.values, 1.5 + grid)


def test_frequency_response_pole_detection():
    f = rational_filter([1.0], [-1.0], Scheme.ADJ_RW)  # pole at a=1, lambda=0
    with pytest.raises(PoleInDomain):
        frequency_response(f, np.linspace(0.0, 2.0, 11))


def test_response_curve_validation():
    with pytest.raises(InvalidParam):
        ResponseCurve(np.array([0.0, 0.0, 1.0]), np.zeros(3))  # not increasing
    with pytest.raises(InvalidParam):
        ResponseCurve(np.array([0.0, 1.0]), np.zeros(3))  # length mismatch


def test_spectral_apply_forms_agree(k3):
    # decompose lap_sym so the eigenvalues live on the same axis as the curve;
    # K3 has lambda in {0, 1.5}, both exact nodes of a 257-point [0, 2] grid
    dec = eigendecompose(build_operator(k3, Scheme.LAP_SYM))
    X = random_features(k3, 3)
    f = make_preset("sgc", K=2)
    curve = frequency_response(f, np.linspace(0.0, 2.0, 257))
    via_callable = spectral_apply(lambda lam: (1.0 - lam) ** 2, dec, X)
    via_gains = spectral_apply((1.0 - dec.eigenvalues) ** 2, dec, X)
    via_curve = spectral_apply(curve, dec, X)
    assert np.allclose(via_callable, via_gains, atol=1e-12)
    assert np.allclose(via_curve, via_gains, atol=1e-10)  # exact grid nodes
    # against the spatial route: g(L) = (I - L)^2 = Msym^2
    Msym = dense_operator(k3, Scheme.ADJ_SYM)
    assert np.allclose(via_gains, Msym @ (Msym @ X), atol=1e-12)


@pytest.mark.parametrize(
    "name,params",
    [("gcn", {}), ("dcnn", {"psi": [0.5, 0.5]}), ("ppnp", {"alpha": 0.3})],
)
def test_check_equivalence_presets(name, params):
    g = random_connected_graph(13, 8, 32)
    X = random_features(g, 17)
    report = check_equivalence(make_preset(name, **params), g, X)
    assert report.passed
    assert report.max_rel_error <= 1e-8
    assert report.method == "spectral"


def test_check_equivalence_isolated_node_falls_back_to_dense():
    # random-walk basis with a zero-degree node: D^(1/2) is singular
    g = build_graph([(0, 1), (1, 2)], num_nodes=4)
    X = random_features(g, 23)
    report = check_equivalence(make_preset("dcnn", psi=[0.5, 0.5]), g, X)
    assert report.method == "dense_spatial"
    assert report.passed
    # the renormalized basis keeps positive degrees, so it stays spectral
    report2 = check_equivalence(make_preset("gcn"), g, X)
    assert report2.method == "spectral"
    assert report2.passed


def test_check_equivalence_cache_is_reused(k3):
    X = random_features(k3, 29)
    cache = {}
    check_equivalence(make_preset("gcn"), k3, X, cache=cache)
    assert len(cache) == 1
    check_equivalence(make_preset("sgc", K=3), k3, X, cache=cache)
    assert len(cache) == 1  # same (graph, scheme) decomposition reused
    check_equivalence(make_preset("dcnn", psi=[1.0]), k3, X, cache=cache)
    assert len(cache) == 2  # adj_rw conjugates through adj_sym
