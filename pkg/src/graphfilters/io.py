"""Text formats: edge lists, feature matrices, filter files, CSV emission.

Edge lists are `u v [w]` per line with `#` comments. Feature matrices are
delimiter-separated reals, one node per row, no header (so a written
feature matrix reads back through parse_features). Filter files are JSON.
All floats are written with 17 significant digits, which round-trips
64-bit values exactly and keeps repeated runs byte-identical.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import InvalidConfig, ParseError, RaggedRows
from .filters import (
    Family,
    FilterSpec,
    linear_filter,
    polynomial_filter,
    rational_filter,
)
from .graph import Graph, build_graph
from .operators import Scheme

_ADJACENCY_SCHEMES = (
    Scheme.ADJ_RAW,
    Scheme.ADJ_RW,
    Scheme.ADJ_SYM,
    Scheme.ADJ_RENORM,
    Scheme.ADJ_RW_SELF_LOOP,
)


def _basis_kind(scheme: Scheme) -> str:
    if scheme in _ADJACENCY_SCHEMES:
        return "adjacency"
    if scheme is Scheme.IDENTITY:
        return "identity"
    return "laplacian"


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_edge_list(text: str, num_nodes: int | None = None) -> Graph:
    """Parse `u v [w]` lines into a Graph; 1-based line numbers on failure."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise ParseError(
                f"expected 'u v' or 'u v w', got {len(tokens)} fields", line=lineno
            )
        try:
            u, v = int(tokens[0]), int(tokens[1])
            w = float(tokens[2]) if len(tokens) == 3 else 1.0
        except ValueError:
            raise ParseError(f"non-numeric edge entry {line!r}", line=lineno)
        entries.append((u, v, w))
    return build_graph(entries, num_nodes=num_nodes)


def parse_features(text: str) -> np.ndarray:
    """Parse comma- or whitespace-separated reals into an N x F matrix."""
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = line.replace(",", " ").split()
        try:
            row = [float(tok) for tok in tokens]
        except ValueError:
            raise ParseError(f"non-numeric feature entry {line!r}", line=lineno)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise RaggedRows(
                f"row has {len(row)} values, expected {width}", line=lineno
            )
        rows.append(row)
    if not rows:
        raise ParseError("feature matrix is empty", line=1)
    return np.asarray(rows, dtype=np.float64)


def filter_spec_to_dict(f: FilterSpec) -> dict:
    d = {
        "family": f.family.value,
        "basis": _basis_kind(f.basis),
        "scheme": f.basis.value,
        "name": f.name,
    }
    if f.family is Family.LINEAR:
        d["phi"] = f.phi
        d["psi"] = f.psi
    elif f.family is Family.POLYNOMIAL:
        d["coeffs"] = list(f.coeffs)
    else:
        d["num_coeffs"] = list(f.num_coeffs)
        d["den_coeffs"] = list(f.den_coeffs)
    return d


def filter_spec_from_dict(d: dict) -> FilterSpec:
    try:
        family = Family(d["family"])
        scheme = Scheme(d["scheme"])
    except (KeyError, ValueError) as exc:
        raise InvalidConfig(f"bad filter file: {exc}")
    kind = d.get("basis")
    if kind is not None and kind != _basis_kind(scheme):
        raise InvalidConfig(
            f"filter file basis {kind!r} does not match scheme {scheme.value!r}"
        )
    name = d.get("name", "custom")
    if family is Family.LINEAR:
        return linear_filter(d.get("phi", 0.0), d.get("psi", 0.0), scheme, name=name)
    if family is Family.POLYNOMIAL:
        return polynomial_filter(d.get("coeffs", ()), scheme, name=name)
    return rational_filter(
        d.get("num_coeffs", ()), d.get("den_coeffs", ()), scheme, name=name
    )


def write_filter_spec(path: str, f: FilterSpec) -> None:
    with open(path, "w") as fh:
        json.dump(filter_spec_to_dict(f), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_filter_spec(path: str) -> FilterSpec:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad filter file JSON: {exc}", line=exc.lineno)
    return filter_spec_from_dict(d)


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def _format_cell(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format_float(x)


def write_matrix_csv(path: str, M) -> None:
    """Feature-matrix output: comma-separated, no header."""
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    with open(path, "w") as fh:
        for row in M:
            fh.write(",".join(format_float(x) for x in row))
            fh.write("\n")


def write_table_csv(path: str, header, rows) -> None:
    """Report output: header line, then mixed int/float rows."""
    with open(path, "w") as fh:
        fh.write(",".join(header))
        fh.write("\n")
        for row in rows:
            fh.write(",".join(_format_cell(x) for x in row))
            fh.write("\n")
