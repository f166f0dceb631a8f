"""Acceptance gate: nine end-to-end criteria.

Each test function covers one numbered criterion at its stated tolerance
and prints a single "criterion N: PASS/FAIL (...)" line; under `pytest -v`
the per-test PASSED/FAILED status mirrors the same verdict. Tolerances and
budgets here are contractual: do not loosen them to make a run green.
"""

import time

import numpy as np
import pytest
from numpy.polynomial import chebyshev

from graphfilters import (
    Scheme,
    SolverOptions,
    StepTarget,
    WalkConfig,
    apply_filter,
    apply_rational,
    bench_filter,
    build_operator,
    check_equivalence,
    compose,
    convergence_study,
    deepwalk_operator,
    fit_rational,
    frequency_response,
    loglog_slope,
    make_preset,
    monte_carlo_walk_check,
    node2vec_operator,
    oversmoothing_profile,
)
from graphfilters.cli import main
from helpers import (
    circulant_graph,
    dense_operator,
    random_connected_graph,
    random_features,
)

# the twelve preset configurations under test everywhere below
PRESET_CONFIGS = (
    ("gcn", {}),
    ("sage", {}),
    ("gin", {}),
    ("chebnet", {"theta": [0.4, 0.3, 0.2, 0.1]}),
    ("dcnn", {"psi": [0.5, 0.3, 0.2]}),
    ("sgc", {"K": 2}),
    ("sgc", {"K": 5}),
    ("ar_lp", {"alpha": 0.5}),
    ("ppnp", {"alpha": 0.1}),
    ("ppnp", {"alpha": 0.5}),
    ("ppnp", {"alpha": 0.9}),
    ("arma", {"a": 0.4, "b": 0.6}),
)

RATIONAL_CONFIGS = tuple(
    (name, params) for name, params in PRESET_CONFIGS
    if name in ("ar_lp", "ppnp", "arma")
)

NUM_GRAPHS = 20


def _suite_graphs():
    for i in range(NUM_GRAPHS):
        g = random_connected_graph(100 + i, 8, 64)
        yield g, random_features(g, 200 + i, cols=4)


def _report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    assert ok, line


def test_criterion_1_spatial_spectral_equivalence():
    start = time.perf_counter()
    cache = {}
    worst = 0.0
    for g, X in _suite_graphs():
        for name, params in PRESET_CONFIGS:
            rep = check_equivalence(make_preset(name, **params), g, X, tol=1e-8, cache=cache)
            worst = max(worst, rep.max_rel_error)
    elapsed = time.perf_counter() - start
    _report(
        1,
        worst <= 1e-8 and elapsed < 30.0,
        f"12 presets x {NUM_GRAPHS} graphs, worst rel err {worst:.2e}, {elapsed:.1f}s",
    )


def test_criterion_2_closed_form_responses():
    lam = np.linspace(0.0, 2.0, 256)
    a = 1.0 - lam
    closed_forms = {
        "gcn": (make_preset("gcn"), a),
        "sage": (make_preset("sage"), a),
        "gin": (make_preset("gin"), 1.0 + lam),  # raw axis: (1+eps) + a, eps=0
        "chebnet": (
            make_preset("chebnet", theta=[0.4, 0.3, 0.2, 0.1]),
            chebyshev.chebval(lam - 1.0, [0.4, 0.3, 0.2, 0.1]),
        ),
        "dcnn": (
            make_preset("dcnn", psi=[0.5, 0.3, 0.2]),
            0.5 * a + 0.3 * a**2 + 0.2 * a**3,
        ),
        "sgc": (make_preset("sgc", K=2), a**2),
        "ar_lp": (make_preset("ar_lp", alpha=0.5), 1.0 / (1.0 + 0.5 * lam)),
        "ppnp": (make_preset("ppnp", alpha=0.1), 0.1 / (1.0 - 0.9 * a)),
        "arma": (make_preset("arma", a=0.4, b=0.6), 0.6 / (1.0 - 0.4 * a)),
    }
    worst = 0.0
    for name, (spec, expected) in closed_forms.items():
        values = frequency_response(spec, lam).values
        worst = max(worst, float(np.max(np.abs(values - expected))))
    _report(2, worst <= 1e-12, f"9 closed forms on 256 points, worst dev {worst:.2e}")


def test_criterion_3_reduction_identities():
    g = random_connected_graph(300, 16, 48)
    X = random_features(g, 301, cols=4)
    n = g.num_nodes

    gcn = make_preset("gcn")
    stacked = gcn
    for _ in range(4):
        stacked = compose(stacked, gcn)
    sgc5 = make_preset("sgc", K=5)
    d_sgc = np.max(np.abs(apply_filter(stacked, g, X) - apply_filter(sgc5, g, X)))

    arma = make_preset("arma", a=0.4, b=0.6)
    ppnp = make_preset("ppnp", alpha=0.6)
    d_arma = np.max(np.abs(apply_filter(arma, g, X) - apply_filter(ppnp, g, X)))

    M = dense_operator(g, Scheme.ADJ_RW)
    d_n2v = np.max(np.abs(node2vec_operator(g, 1.0, 1.0) - (np.eye(n) + M @ M)))

    dw = deepwalk_operator(g, 3)
    row_sums = apply_filter(dw, g, np.ones(n))
    d_rows = np.max(np.abs(row_sums - 1.0))

    ok = d_sgc <= 1e-10 and d_arma <= 1e-10 and d_n2v <= 1e-12 and d_rows <= 1e-10
    _report(
        3,
        ok,
        f"sgc-stack {d_sgc:.2e}, arma-ppnp {d_arma:.2e}, "
        f"node2vec {d_n2v:.2e}, walk rows {d_rows:.2e}",
    )


def test_criterion_4_expressivity_hierarchy():
    start = time.perf_counter()
    target = StepTarget()
    study = convergence_study(target, "polynomial", [4, 8, 16, 32, 64])
    rational = fit_rational(target, 4, 4)
    elapsed = time.perf_counter() - start

    slope_ok = -1.5 <= study.slope <= -0.5
    p8 = study.max_errors[1]
    p64 = study.max_errors[-1]
    ratio_ok = rational.max_error * 10.0 <= p8
    beats_p64 = rational.max_error < p64
    ok = slope_ok and ratio_ok and beats_p64 and elapsed < 60.0
    _report(
        4,
        ok,
        f"poly slope {study.slope:.3f}, rational(4,4) {rational.max_error:.4f} "
        f"vs poly(8) {p8:.4f} and poly(64) {p64:.4f}, {elapsed:.1f}s",
    )


def test_criterion_5_rational_solver_contract():
    worst_resid = 0.0
    worst_agree = 0.0
    for g, X in _suite_graphs():
        n = g.num_nodes
        for name, params in RATIONAL_CONFIGS:
            f = make_preset(name, **params)
            Z = apply_rational(f, g, X)
            # independent residual check through dense operators
            M = dense_operator(g, f.basis)
            Q = np.eye(n)
            P = np.eye(n)
            for c in f.den_coeffs:
                P = P @ M
                Q = Q + c * P
            B = sum(
                c * np.linalg.matrix_power(M, j) for j, c in enumerate(f.num_coeffs)
            ) @ X
            resid = np.linalg.norm(Q @ Z - B) / np.linalg.norm(B)
            worst_resid = max(worst_resid, float(resid))
        ppnp = make_preset("ppnp", alpha=0.5)
        z_fp = apply_rational(
            ppnp, g, X, opts=SolverOptions(method="fixed_point", max_iterations=5000)
        )
        z_dd = apply_rational(ppnp, g, X, opts=SolverOptions(method="dense_direct"))
        scale = np.max(np.abs(z_dd))
        worst_agree = max(worst_agree, float(np.max(np.abs(z_fp - z_dd)) / scale))
    ok = worst_resid <= 1e-10 and worst_agree <= 1e-8
    _report(
        5,
        ok,
        f"worst residual {worst_resid:.2e}, fixed-point vs direct {worst_agree:.2e}",
    )


def _walk_devs(g, t, seed):
    d1 = monte_carlo_walk_check(g, WalkConfig(t=t, num_walks=50000, rng_seed=seed))
    d2 = monte_carlo_walk_check(g, WalkConfig(t=t, num_walks=100000, rng_seed=seed))
    return d1.max_abs_dev, d2.max_abs_dev


def test_criterion_6_monte_carlo_walks(k3):
    g16 = random_connected_graph(600, 16, 16)
    details = []
    ok = True
    for g, label in ((k3, "K3"), (g16, "N16")):
        for t in (1, 2):
            dev, dev_doubled = _walk_devs(g, t, seed=20)
            if not (dev <= 0.01 and dev_doubled <= dev):
                # the contract allows one reseed retry for the doubling check
                dev, dev_doubled = _walk_devs(g, t, seed=21)
            this_ok = dev <= 0.01 and dev_doubled <= dev
            ok = ok and this_ok
            details.append(f"{label} t={t}: {dev:.4f}->{dev_doubled:.4f}")
    _report(6, ok, "; ".join(details))


def test_criterion_7_oversmoothing(c16):
    X = random_features(c16, 700, cols=4)
    sgc = oversmoothing_profile(c16, X, "sgc", [0, 200])
    ppnp = oversmoothing_profile(c16, X, "ppnp", [0, 200], alpha=0.2)
    sgc_ratio = sgc.energy[1] / sgc.energy[0]
    ppnp_ratio = ppnp.energy[1] / ppnp.energy[0]
    ok = sgc.connected and sgc_ratio <= 1e-6 and ppnp_ratio >= 0.01
    _report(
        7,
        ok,
        f"sgc depth-200 energy ratio {sgc_ratio:.2e}, ppnp(0.2) ratio {ppnp_ratio:.4f}",
    )


def test_criterion_8_benchmark_scaling():
    # F=32 keeps the smallest size's working set cache-resident, so the
    # medians measure the O(K nnz F) kernel instead of a cache-size cliff
    sizes = [1000, 2000, 4000, 8000]
    table = bench_filter(make_preset("sgc", K=2), sizes, F=32, repetitions=9, seed=0)
    slope_n = loglog_slope(table.sizes, table.times)

    degrees = [4, 8, 16, 32, 64]
    times_k = []
    for K in degrees:
        t = bench_filter(make_preset("sgc", K=K), [4000], F=32, repetitions=9, seed=0)
        times_k.append(t.times[0])
    slope_k = loglog_slope(degrees, times_k)

    ok = abs(slope_n - 1.0) <= 0.3 and abs(slope_k - 1.0) <= 0.3
    _report(8, ok, f"time~N slope {slope_n:.2f}, time~K slope {slope_k:.2f}")


def test_criterion_9_determinism(tmp_path, capsys):
    g = random_connected_graph(900, 32, 32)
    graph_path = tmp_path / "g.txt"
    graph_path.write_text(
        "".join(f"{u} {v}\n" for u, v, _ in g.edges if u < v)
    )

    def run_all(tag):
        outputs = []
        for idx, (name, params) in enumerate(PRESET_CONFIGS):
            out = tmp_path / f"{tag}_{idx}.csv"
            argv = [
                "filter", "--graph", str(graph_path), "--filter", name,
                "--seed", "42", "--out", str(out),
            ]
            for key, value in params.items():
                if isinstance(value, list):
                    rendered = ",".join(repr(v) for v in value)
                else:
                    rendered = repr(value)
                argv += ["--param", f"{key}={rendered}"]
            assert main(argv) == 0
            outputs.append(out.read_bytes())
        return outputs

    first = run_all("a")
    second = run_all("b")
    capsys.readouterr()
    identical = sum(x == y for x, y in zip(first, second))
    ok = identical == len(PRESET_CONFIGS)
    _report(9, ok, f"{identical}/{len(PRESET_CONFIGS)} preset CSVs byte-identical")
