"""Command-line front end.

One binary, subcommand style. Flags may also come from a JSON config file
via --config; explicit flags win. Results are printed as key=value lines
for scripting, tables go to --out as CSV, and every failure prints exactly
one `error=<Code> ...` line on stderr. Exit codes: 0 success or check
passed, 1 check failed, 2 usage or input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from .analysis import (
    WalkConfig,
    bench_filter,
    loglog_slope,
    monte_carlo_walk_check,
    oversmoothing_profile,
)
from .errors import GraphFilterError, InvalidConfig, UnsupportedScheme
from .filters import FilterSpec, SolverOptions, apply_filter
from .fitting import ResponseTarget, StepTarget, convergence_study, fit_polynomial, fit_rational
from .graph import Graph
from .io import (
    format_float,
    parse_edge_list,
    parse_features,
    read_filter_spec,
    write_matrix_csv,
    write_table_csv,
)
from .operators import Scheme, build_operator
from .presets import PRESET_NAMES, make_preset
from .spectral import check_equivalence, eigendecompose, frequency_response

DEFAULT_RESPONSE_GRID = 256
DEFAULT_FEATURE_DIM = 4

_COMMANDS = (
    ("filter", "apply a filter to features and write the result as CSV"),
    ("spectrum", "eigenvalues of a chosen operator as CSV"),
    ("response", "closed-form frequency response curve as CSV"),
    ("equivalence", "compare spatial and spectral evaluation of a filter"),
    ("fit", "fit one polynomial or rational filter to a target response"),
    ("converge", "error-versus-degree study for a target response"),
    ("oversmooth", "Dirichlet energy and spread across stacking depth"),
    ("walkcheck", "Monte-Carlo check of the walk co-occurrence operator"),
    ("bench", "filter application timing across graph sizes"),
)


@dataclass
class RunConfig:
    """Everything one subcommand invocation needs."""

    command: str
    graph_path: str | None = None
    features_path: str | None = None
    filter_id: str | None = None
    params: dict = field(default_factory=dict)
    output_path: str | None = None
    tolerance: float | None = None
    seed: int = 0
    grid_size: int | None = None


class _Parser(argparse.ArgumentParser):
    # replace argparse's multi-line usage dump with the one error line
    def error(self, message):
        sys.stderr.write(f"error=InvalidConfig {message}\n")
        raise SystemExit(2)


def _parse_value(text: str):
    if "," in text:
        try:
            return [float(tok) for tok in text.split(",") if tok]
        except ValueError:
            raise InvalidConfig(f"bad list value {text!r}")
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _parse_params(entries) -> dict:
    params = {}
    for entry in entries:
        if "=" not in entry:
            raise InvalidConfig(f"--param needs key=value, got {entry!r}")
        key, value = entry.split("=", 1)
        params[key.strip()] = _parse_value(value.strip())
    return params


_CONFIG_KEYS = {"graph", "features", "filter", "out", "tol", "seed", "grid", "param"}


def _load_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise InvalidConfig(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"config {path} is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        raise InvalidConfig("config file must hold a JSON object")
    unknown = sorted(set(cfg) - _CONFIG_KEYS)
    if unknown:
        raise InvalidConfig(f"unknown config keys: {', '.join(unknown)}")
    if "param" in cfg and not isinstance(cfg["param"], dict):
        raise InvalidConfig("config key 'param' must be an object")
    return cfg


def build_parser() -> _Parser:
    parser = _Parser(prog="graphfilters", description="graph filter toolkit")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, help_text in _COMMANDS:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--graph", help="edge-list file: one 'u v [w]' per line")
        p.add_argument("--features", help="feature CSV, one node per row")
        p.add_argument("--filter", help="preset name or filter JSON file")
        p.add_argument(
            "--param",
            action="append",
            nargs="+",
            default=[],
            metavar="K=V",
            help="filter or command parameters, repeatable",
        )
        p.add_argument("--out", help="output CSV path")
        p.add_argument("--tol", type=float, help="tolerance for checks and solvers")
        p.add_argument("--seed", type=int, help="seed for generated features and walks")
        p.add_argument("--grid", type=int, help="number of grid points")
        p.add_argument("--config", help="JSON file of flag defaults")
    return parser


def config_from_argv(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    file_cfg = _load_config_file(args.config) if args.config else {}

    def pick(flag_value, key, default=None):
        return flag_value if flag_value is not None else file_cfg.get(key, default)

    params = dict(file_cfg.get("param", {}))
    params.update(_parse_params(entry for group in args.param for entry in group))
    tolerance = pick(args.tol, "tol")
    if tolerance is not None and tolerance <= 0:
        raise InvalidConfig("tolerance must be positive")
    grid = pick(args.grid, "grid")
    return RunConfig(
        command=args.command,
        graph_path=pick(args.graph, "graph"),
        features_path=pick(args.features, "features"),
        filter_id=pick(args.filter, "filter"),
        params=params,
        output_path=pick(args.out, "out"),
        tolerance=tolerance,
        seed=int(pick(args.seed, "seed", 0)),
        grid_size=int(grid) if grid is not None else None,
    )


def _emit(key: str, value) -> None:
    if isinstance(value, bool):
        text = "true" if value else "false"
    elif isinstance(value, float):
        text = format_float(value)
    else:
        text = str(value)
    print(f"{key}={text}")


def _read_text(path: str, what: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidConfig(f"cannot read {what} {path}: {exc}")


def _load_graph(cfg: RunConfig) -> Graph:
    if not cfg.graph_path:
        raise InvalidConfig(f"{cfg.command} needs --graph")
    return parse_edge_list(_read_text(cfg.graph_path, "graph"))


def _load_features(cfg: RunConfig, g: Graph, dim: int = DEFAULT_FEATURE_DIM) -> np.ndarray:
    if cfg.features_path:
        return parse_features(_read_text(cfg.features_path, "features"))
    rng = np.random.default_rng(cfg.seed)
    return rng.standard_normal((g.num_nodes, dim))


def _split(params: dict, keys) -> tuple:
    """Pop command knobs out of params; the rest belongs to the filter."""
    knobs = {k: params.pop(k) for k in tuple(keys) if k in params}
    return knobs, params


def _resolve_filter(cfg: RunConfig, params: dict) -> FilterSpec:
    if not cfg.filter_id:
        raise InvalidConfig(f"{cfg.command} needs --filter")
    if cfg.filter_id in PRESET_NAMES:
        return make_preset(cfg.filter_id, **params)
    if os.path.exists(cfg.filter_id):
        if params:
            raise InvalidConfig("filter files do not take --param values")
        return read_filter_spec(cfg.filter_id)
    raise InvalidConfig(
        f"--filter {cfg.filter_id!r} is neither a preset ({', '.join(PRESET_NAMES)}) "
        "nor a readable file"
    )


def _scheme(value, default: Scheme) -> Scheme:
    if value is None:
        return default
    try:
        return Scheme(str(value))
    except ValueError:
        choices = ", ".join(s.value for s in Scheme)
        raise UnsupportedScheme(f"unknown scheme {value!r}; choose from {choices}")


def _int_knob(knobs: dict, key: str, default):
    value = knobs.get(key, default)
    if value is None:
        return None
    if float(value) != int(value):
        raise InvalidConfig(f"{key} must be an integer")
    return int(value)


def _cmd_filter(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    knobs, rest = _split(cfg.params, ("features_dim",))
    f = _resolve_filter(cfg, rest)
    X = _load_features(cfg, g, dim=_int_knob(knobs, "features_dim", DEFAULT_FEATURE_DIM))
    opts = SolverOptions(tolerance=cfg.tolerance) if cfg.tolerance else None
    Z = apply_filter(f, g, X, opts=opts)
    _emit("filter", f.name)
    _emit("family", f.family.value)
    _emit("basis", f.basis.value)
    _emit("rows", Z.shape[0])
    _emit("cols", Z.shape[1])
    if cfg.output_path:
        write_matrix_csv(cfg.output_path, Z)
        _emit("out", cfg.output_path)
    return 0


def _cmd_spectrum(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    knobs, rest = _split(cfg.params, ("scheme",))
    if rest:
        raise InvalidConfig(f"unknown parameters: {', '.join(sorted(rest))}")
    scheme = _scheme(knobs.get("scheme"), Scheme.LAP_SYM)
    dec = eigendecompose(build_operator(g, scheme))
    lam = dec.eigenvalues
    _emit("scheme", scheme.value)
    _emit("n", len(lam))
    _emit("lambda_min", float(lam[0]))
    _emit("lambda_max", float(lam[-1]))
    if cfg.output_path:
        write_table_csv(
            cfg.output_path, ("index", "lambda"), list(enumerate(lam.tolist()))
        )
        _emit("out", cfg.output_path)
    return 0


def _cmd_response(cfg: RunConfig) -> int:
    knobs, rest = _split(cfg.params, ("lo", "hi"))
    f = _resolve_filter(cfg, rest)
    lo = float(knobs.get("lo", 0.0))
    hi = float(knobs.get("hi", 2.0))
    if not lo < hi:
        raise InvalidConfig("response range needs lo < hi")
    grid = np.linspace(lo, hi, cfg.grid_size or DEFAULT_RESPONSE_GRID)
    curve = frequency_response(f, grid)
    _emit("filter", f.name)
    _emit("axis", curve.axis)
    _emit("points", len(grid))
    _emit("g_at_lo", float(curve.values[0]))
    _emit("g_at_hi", float(curve.values[-1]))
    if cfg.output_path:
        write_table_csv(
            cfg.output_path, ("lambda", "g"), list(zip(curve.grid, curve.values))
        )
        _emit("out", cfg.output_path)
    return 0


def _cmd_equivalence(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    knobs, rest = _split(cfg.params, ("features_dim",))
    f = _resolve_filter(cfg, rest)
    X = _load_features(cfg, g, dim=_int_knob(knobs, "features_dim", DEFAULT_FEATURE_DIM))
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-8
    report = check_equivalence(f, g, X, tol=tol)
    _emit("filter", f.name)
    _emit("method", report.method)
    _emit("max_rel_error", report.max_rel_error)
    _emit("tolerance", tol)
    _emit("passed", report.passed)
    return 0 if report.passed else 1


_TARGET_KNOBS = ("target", "threshold", "transition", "family", "degree",
                 "num_degree", "den_degree", "degrees")


def _build_target(cfg: RunConfig, knobs: dict, filter_params: dict):
    kind = knobs.get("target", "filter" if cfg.filter_id else "step")
    if kind == "filter":
        return ResponseTarget(_resolve_filter(cfg, filter_params))
    if kind != "step":
        raise InvalidConfig(f"unknown target {kind!r}; use 'step' or 'filter'")
    if filter_params:
        raise InvalidConfig(f"unknown parameters: {', '.join(sorted(filter_params))}")
    step_args = {}
    if "threshold" in knobs:
        step_args["threshold"] = float(knobs["threshold"])
    if "transition" in knobs:
        step_args["transition"] = float(knobs["transition"])
    return StepTarget(**step_args)


def _grid_kwargs(cfg: RunConfig) -> dict:
    # fit grid default lives in the fitting module; forward only when set
    return {"grid_size": cfg.grid_size} if cfg.grid_size else {}


def _cmd_fit(cfg: RunConfig) -> int:
    knobs, rest = _split(cfg.params, _TARGET_KNOBS)
    target = _build_target(cfg, knobs, rest)
    family = knobs.get("family", "polynomial")
    if family == "polynomial":
        degree = _int_knob(knobs, "degree", 8)
        result = fit_polynomial(target, degree, **_grid_kwargs(cfg))
        _emit("family", family)
        _emit("degree", degree)
    elif family == "rational":
        num_degree = _int_knob(knobs, "num_degree", _int_knob(knobs, "degree", 8) // 2)
        den_degree = _int_knob(knobs, "den_degree", num_degree)
        result = fit_rational(target, num_degree, den_degree, **_grid_kwargs(cfg))
        _emit("family", family)
        _emit("num_degree", num_degree)
        _emit("den_degree", den_degree)
    else:
        raise InvalidConfig("family must be 'polynomial' or 'rational'")
    _emit("max_error", result.max_error)
    _emit("rms_error", result.rms_error)
    _emit("iterations", result.iterations_used)
    if cfg.output_path:
        lo, hi = result.domain
        lam = np.linspace(lo, hi, cfg.grid_size or DEFAULT_RESPONSE_GRID)
        rows = list(zip(lam, target.evaluate(lam), result.evaluate(lam)))
        write_table_csv(cfg.output_path, ("lambda", "target", "fitted"), rows)
        _emit("out", cfg.output_path)
    return 0


_STUDY_DEGREES = {"polynomial": (4, 8, 16, 32, 64), "rational": (2, 4, 6, 8, 10)}


def _cmd_converge(cfg: RunConfig) -> int:
    knobs, rest = _split(cfg.params, _TARGET_KNOBS)
    target = _build_target(cfg, knobs, rest)
    family = knobs.get("family", "polynomial")
    if family not in _STUDY_DEGREES:
        raise InvalidConfig("family must be 'polynomial' or 'rational'")
    degrees = knobs.get("degrees", _STUDY_DEGREES[family])
    if isinstance(degrees, (int, float)):
        degrees = [degrees]
    study = convergence_study(target, family, degrees, **_grid_kwargs(cfg))
    _emit("family", study.family)
    _emit("slope", study.slope)
    _emit("summary", study.descriptor)
    if cfg.output_path:
        rows = list(zip(study.degrees, study.max_errors, study.rms_errors))
        write_table_csv(cfg.output_path, ("degree", "max_error", "rms_error"), rows)
        _emit("out", cfg.output_path)
    return 0


def _cmd_oversmooth(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    knobs, rest = _split(cfg.params, ("model", "depths", "alpha", "features_dim"))
    if rest:
        raise InvalidConfig(f"unknown parameters: {', '.join(sorted(rest))}")
    X = _load_features(cfg, g, dim=_int_knob(knobs, "features_dim", DEFAULT_FEATURE_DIM))
    depths = knobs.get("depths", [0, 1, 2, 4, 8, 16, 32, 64, 128, 200])
    if isinstance(depths, (int, float)):
        depths = [depths]
    profile = oversmoothing_profile(
        g, X, str(knobs.get("model", "sgc")), depths, alpha=float(knobs.get("alpha", 0.2))
    )
    _emit("model", str(knobs.get("model", "sgc")))
    _emit("connected", profile.connected)
    _emit("energy_first", profile.energy[0])
    _emit("energy_last", profile.energy[-1])
    ratio = profile.energy[-1] / profile.energy[0] if profile.energy[0] > 0 else float("nan")
    _emit("energy_ratio", ratio)
    if cfg.output_path:
        rows = list(zip(profile.depths, profile.energy, profile.pairwise_spread))
        write_table_csv(cfg.output_path, ("depth", "energy", "pairwise_spread"), rows)
        _emit("out", cfg.output_path)
    return 0


def _cmd_walkcheck(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    knobs, rest = _split(cfg.params, ("t", "num_walks", "walk_length"))
    if rest:
        raise InvalidConfig(f"unknown parameters: {', '.join(sorted(rest))}")
    walk_cfg = WalkConfig(
        t=_int_knob(knobs, "t", 2),
        num_walks=_int_knob(knobs, "num_walks", 1000),
        walk_length=_int_knob(knobs, "walk_length", None),
        rng_seed=cfg.seed,
    )
    tol = cfg.tolerance if cfg.tolerance is not None else 0.01
    report = monte_carlo_walk_check(g, walk_cfg)
    _emit("t", walk_cfg.t)
    _emit("num_walks", walk_cfg.num_walks)
    _emit("max_abs_dev", report.max_abs_dev)
    _emit("tolerance", tol)
    passed = report.max_abs_dev <= tol
    _emit("passed", passed)
    if cfg.output_path:
        write_matrix_csv(cfg.output_path, report.empirical)
        _emit("out", cfg.output_path)
    return 0 if passed else 1


def _cmd_bench(cfg: RunConfig) -> int:
    knobs, rest = _split(cfg.params, ("sizes", "features_dim", "reps", "graph_degree"))
    f = _resolve_filter(cfg, rest)
    sizes = knobs.get("sizes", [1000, 2000, 4000, 8000])
    if isinstance(sizes, (int, float)):
        sizes = [sizes]
    table = bench_filter(
        f,
        sizes,
        F=_int_knob(knobs, "features_dim", 32),
        repetitions=_int_knob(knobs, "reps", 9),
        seed=cfg.seed,
        degree=_int_knob(knobs, "graph_degree", 16),
    )
    _emit("filter", f.name)
    _emit("filter_degree", table.filter_degree)
    _emit("feature_dim", table.feature_dim)
    if len(table.sizes) >= 2:
        _emit("slope_vs_n", loglog_slope(table.sizes, table.times))
    if cfg.output_path:
        rows = [
            (n, nnz, table.filter_degree, t)
            for n, nnz, t in zip(table.sizes, table.nnz, table.times)
        ]
        write_table_csv(
            cfg.output_path, ("size", "nnz", "filter_degree", "median_seconds"), rows
        )
        _emit("out", cfg.output_path)
    return 0


_HANDLERS = {
    "filter": _cmd_filter,
    "spectrum": _cmd_spectrum,
    "response": _cmd_response,
    "equivalence": _cmd_equivalence,
    "fit": _cmd_fit,
    "converge": _cmd_converge,
    "oversmooth": _cmd_oversmooth,
    "walkcheck": _cmd_walkcheck,
    "bench": _cmd_bench,
}


def run_command(cfg: RunConfig) -> int:
    handler = _HANDLERS.get(cfg.command)
    if handler is None:
        raise InvalidConfig(f"unknown command {cfg.command!r}")
    return handler(cfg)


def main(argv=None) -> int:
    try:
        return run_command(config_from_argv(argv))
    except GraphFilterError as exc:
        message = re.sub(r"\s+", " ", str(exc)).strip()
        line = f"error={exc.code} {message}" if message else f"error={exc.code}"
        sys.stderr.write(line + "\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
