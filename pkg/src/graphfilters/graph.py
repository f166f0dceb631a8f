"""Immutable undirected weighted graphs.

The graph stores both orientations of every undirected edge explicitly, so
downstream sparse operators can be assembled row by row without symmetry
bookkeeping. Self-loops are rejected at construction; normalization schemes
that need them (renormalized adjacency) add their own.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicateEdge, IndexOutOfRange, SelfLoopInInput


@dataclass(frozen=True)
class Graph:
    """Undirected graph with nonnegative edge weights.

    Attributes
    ----------
    num_nodes : int
        Number of nodes; indices run 0..num_nodes-1.
    edges : tuple of (u, v, w)
        Directed realization of the undirected edge set: (u, v, w) is
        present iff (v, u, w) is present.
    """

    num_nodes: int
    edges: tuple = field(default=())

    @property
    def num_edges(self) -> int:
        """Number of undirected edges."""
        return len(self.edges) // 2

    def edge_arrays(self):
        """Return (rows, cols, weights) as numpy arrays over both orientations."""
        if not self.edges:
            empty = np.empty(0)
            return empty.astype(np.int64), empty.astype(np.int64), empty
        e = np.asarray(self.edges, dtype=np.float64)
        return e[:, 0].astype(np.int64), e[:, 1].astype(np.int64), e[:, 2]


def build_graph(edge_list: Iterable[Sequence], num_nodes: int | None = None) -> Graph:
    """Build an undirected graph from (u, v) or (u, v, w) entries.

    Applies the symmetric closure, rejects duplicates (in either
    orientation) and self-loops, and defaults num_nodes to max index + 1.
    """
    seen = set()
    directed = []
    max_index = -1
    for entry in edge_list:
        if len(entry) == 2:
            u, v = entry
            w = 1.0
        elif len(entry) == 3:
            u, v, w = entry
        else:
            raise IndexOutOfRange(f"edge entry {entry!r} is not (u, v) or (u, v, w)")
        u, v, w = int(u), int(v), float(w)
        if u < 0 or v < 0:
            raise IndexOutOfRange(f"negative node index in edge ({u}, {v})")
        if u == v:
            raise SelfLoopInInput(f"self-loop at node {u}")
        if w < 0:
            raise IndexOutOfRange(f"negative weight {w} on edge ({u}, {v})")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdge(f"duplicate edge ({u}, {v})")
        seen.add(key)
        directed.append((u, v, w))
        directed.append((v, u, w))
        max_index = max(max_index, u, v)

    if num_nodes is None:
        num_nodes = max_index + 1 if max_index >= 0 else 0
    if num_nodes <= 0:
        raise IndexOutOfRange("graph must have at least one node")
    if max_index >= num_nodes:
        raise IndexOutOfRange(
            f"node index {max_index} out of range for num_nodes={num_nodes}"
        )
    directed.sort()
    return Graph(num_nodes=num_nodes, edges=tuple(directed))


def degree_vector(g: Graph) -> np.ndarray:
    """Weighted degree of every node: sum of incident edge weights."""
    deg = np.zeros(g.num_nodes)
    rows, _, weights = g.edge_arrays()
    np.add.at(deg, rows, weights)
    return deg
