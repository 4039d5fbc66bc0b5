"""Weighted undirected graphs, edge-list I/O and global topological properties."""

from __future__ import annotations

import logging
import math
import re
from dataclasses import asdict, dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from spine import _kernels

logger = logging.getLogger(__name__)

_SPLIT = re.compile(r"\s*,\s*|\s+")


class GraphError(ValueError):
    """Base class for graph construction and validation problems."""


class ParseError(GraphError):
    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ValidationError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected weighted simple graph with dense ids ``0..V-1``.

    Edges are stored canonically (``src < dst``, sorted lexicographically)
    in three parallel read-only arrays. Build instances with
    :meth:`from_edges`; the constructor assumes canonical input.
    """

    labels: tuple
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray

    @classmethod
    def from_edges(cls, labels: Sequence, edges: Iterable[tuple]) -> "Graph":
        """Canonicalize ``(u, v, w)`` triples over node ids into a Graph.

        Self-loops are dropped and parallel edges merged by summing weights.
        """
        labels = tuple(str(x) for x in labels)
        n = len(labels)
        merged: dict[tuple[int, int], float] = {}
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) references a missing node")
            if not (w > 0 and math.isfinite(w)):
                raise ValidationError(f"edge ({u}, {v}) has non-positive or non-finite weight {w}")
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            merged[key] = merged.get(key, 0.0) + w
        keys = sorted(merged)
        src = np.array([k[0] for k in keys], dtype=np.int64)
        dst = np.array([k[1] for k in keys], dtype=np.int64)
        weight = np.array([merged[k] for k in keys], dtype=np.float64)
        return cls._trusted(labels, src, dst, weight)

    @classmethod
    def _trusted(cls, labels, src, dst, weight) -> "Graph":
        for a in (src, dst, weight):
            a.setflags(write=False)
        return cls(tuple(labels), src, dst, weight)

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return int(self.src.shape[0])

    @cached_property
    def total_weight(self) -> float:
        return float(math.fsum(self.weight.tolist()))

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.bincount(self.src, minlength=self.n_nodes) + np.bincount(self.dst, minlength=self.n_nodes)
        return deg.astype(np.int64)

    @cached_property
    def strengths(self) -> np.ndarray:
        s = np.bincount(self.src, weights=self.weight, minlength=self.n_nodes)
        s += np.bincount(self.dst, weights=self.weight, minlength=self.n_nodes)
        return s

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, indices, weights) of the symmetric adjacency, neighbours sorted by id."""
        n = self.n_nodes
        rows = np.concatenate([self.src, self.dst])
        cols = np.concatenate([self.dst, self.src])
        w = np.concatenate([self.weight, self.weight])
        order = np.lexsort((cols, rows))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return indptr, np.ascontiguousarray(cols[order]), np.ascontiguousarray(w[order])

    def edges(self):
        """Iterate ``(u, v, w)`` in canonical order."""
        return zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist())

    def edge_key(self, i: int) -> tuple[str, str]:
        a, b = self.labels[self.src[i]], self.labels[self.dst[i]]
        return (a, b) if a <= b else (b, a)

    def edge_keys(self) -> list[tuple[str, str]]:
        return [self.edge_key(i) for i in range(self.n_edges)]

    def edge_subgraph(self, edge_ids, prune: bool = True) -> "Graph":
        """Subgraph on the given edge indices, keeping parent labels and order.

        With ``prune`` only endpoints of kept edges survive; otherwise every
        node is kept.
        """
        ids = np.unique(np.asarray(edge_ids, dtype=np.int64))
        src, dst, w = self.src[ids], self.dst[ids], self.weight[ids]
        if not prune:
            return Graph._trusted(self.labels, src.copy(), dst.copy(), w.copy())
        keep = np.unique(np.concatenate([src, dst]))
        remap = np.full(self.n_nodes, -1, dtype=np.int64)
        remap[keep] = np.arange(keep.shape[0])
        labels = tuple(self.labels[i] for i in keep.tolist())
        return Graph._trusted(labels, remap[src], remap[dst], w.copy())

    def induced_subgraph(self, nodes) -> "Graph":
        """Subgraph induced on ``nodes`` (isolated nodes kept), parent order preserved."""
        keep = np.unique(np.asarray(nodes, dtype=np.int64))
        mask = np.zeros(self.n_nodes, dtype=bool)
        mask[keep] = True
        sel = mask[self.src] & mask[self.dst]
        remap = np.full(self.n_nodes, -1, dtype=np.int64)
        remap[keep] = np.arange(keep.shape[0])
        labels = tuple(self.labels[i] for i in keep.tolist())
        return Graph._trusted(labels, remap[self.src[sel]], remap[self.dst[sel]], self.weight[sel].copy())

    def connected_components(self) -> list[np.ndarray]:
        """Node-id arrays of the connected components, ordered by smallest member."""
        parent = list(range(self.n_nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in zip(self.src.tolist(), self.dst.tolist()):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups: dict[int, list[int]] = {}
        for x in range(self.n_nodes):
            groups.setdefault(find(x), []).append(x)
        return [np.array(groups[r], dtype=np.int64) for r in sorted(groups)]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.labels == other.labels
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
        )

    __hash__ = None

    def __repr__(self):
        return f"Graph(V={self.n_nodes}, E={self.n_edges}, W={self.total_weight:g})"


@dataclass
class LoadSummary:
    lines: int = 0
    self_loops: int = 0
    merged: int = 0
    isolated_dropped: int = 0


def parse_edge_list(lines: Iterable[str], summary: Optional[LoadSummary] = None) -> Graph:
    """Parse edge-list text. Labels get dense ids in first-appearance order."""
    summary = summary if summary is not None else LoadSummary()
    ids: dict[str, int] = {}
    raw: list[tuple[str, str, float]] = []
    loop_only: set[str] = set()
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        summary.lines += 1
        parts = _SPLIT.split(line)
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'u v [w]', got {line!r}", lineno)
        a, b = parts[0], parts[1]
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(f"weight {parts[2]!r} is not a number", lineno) from None
        else:
            w = 1.0
        if not (w > 0 and math.isfinite(w)):
            raise ValidationError(f"line {lineno}: weight must be positive and finite, got {parts[2]}")
        if a == b:
            summary.self_loops += 1
            if a not in ids:
                loop_only.add(a)
            continue
        for x in (a, b):
            if x not in ids:
                ids[x] = len(ids)
                loop_only.discard(x)
        raw.append((a, b, w))

    seen: set[tuple[str, str]] = set()
    for a, b, _ in raw:
        key = (a, b) if ids[a] < ids[b] else (b, a)
        if key in seen:
            summary.merged += 1
        seen.add(key)
    if loop_only:
        summary.isolated_dropped = len(loop_only)
        logger.warning("dropped %d node(s) that only appear in self-loops", len(loop_only))
    labels = sorted(ids, key=ids.get)
    return Graph.from_edges(labels, ((ids[a], ids[b], w) for a, b, w in raw))


def load_edge_list(path, summary: Optional[LoadSummary] = None, write_nodes: bool = False) -> Graph:
    """Read a weighted edge list (``u v [w]`` per line, ``#`` comments).

    Fields may be separated by whitespace or a single comma. Missing weights
    default to 1. If ``write_nodes`` is set, the id/label mapping is saved
    next to the file as ``<name>.nodes.tsv``.
    """
    path = Path(path)
    summary = summary if summary is not None else LoadSummary()
    with path.open(encoding="utf-8") as fh:
        g = parse_edge_list(fh, summary)
    if summary.self_loops or summary.merged:
        logger.info("%s: %d self-loop(s) dropped, %d parallel edge(s) merged", path, summary.self_loops, summary.merged)
    if write_nodes:
        write_node_map(g, path.with_name(path.stem + ".nodes.tsv"))
    return g


def format_weight(w: float) -> str:
    s = repr(float(w))
    return s[:-2] if s.endswith(".0") else s


def write_edge_list(g: Graph, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for u, v, w in g.edges():
            fh.write(f"{g.labels[u]} {g.labels[v]} {format_weight(w)}\n")


def write_node_map(g: Graph, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\tlabel\n")
        for i, label in enumerate(g.labels):
            fh.write(f"{i}\t{label}\n")


def degree_and_weight_sequences(g: Graph) -> tuple[list[int], list[float]]:
    """Degree sequence (length V) and weight sequence (length E), both ascending."""
    return sorted(g.degrees.tolist()), sorted(g.weight.tolist())


def prune_isolated(g: Graph) -> Graph:
    """Drop nodes of degree zero; surviving nodes keep their labels."""
    if g.n_nodes == 0 or bool((g.degrees > 0).all()):
        return g
    return g.induced_subgraph(np.flatnonzero(g.degrees > 0))


@dataclass
class GlobalProperties:
    """Topological summary of a graph. ``None`` marks an undefined value."""

    node_count: int
    edge_count: int
    density: float
    diameter: Optional[int]
    avg_shortest_path: Optional[float]
    avg_degree: float
    avg_weighted_degree: float
    max_degree: int
    assortativity: Optional[float]
    avg_clustering: float
    transitivity: float
    global_efficiency: float
    total_weight: float
    component_count: int
    path_length_estimate: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def hop_distance_counts(g: Graph) -> np.ndarray:
    """Number of ordered node pairs at each hop distance (index 0 counts self pairs)."""
    if g.n_nodes == 0:
        return np.zeros(1, dtype=np.int64)
    indptr, indices, _ = g.csr
    return _kernels.bfs_shells(indptr, indices).sum(axis=0)


def degree_assortativity(g: Graph) -> Optional[float]:
    """Pearson correlation of degrees at either end of an edge; None if undefined."""
    if g.n_edges == 0:
        return None
    deg = g.degrees.astype(np.float64)
    a = np.concatenate([deg[g.src], deg[g.dst]])
    b = np.concatenate([deg[g.dst], deg[g.src]])
    mean = a.mean()
    var = float(((a - mean) ** 2).mean())
    if var <= 1e-12 * max(1.0, mean * mean):
        return None
    return float(((a - mean) * (b - mean)).mean() / var)


def _triangles_per_node(g: Graph) -> np.ndarray:
    indptr, indices, _ = g.csr
    nbrs = [set(indices[indptr[i]: indptr[i + 1]].tolist()) for i in range(g.n_nodes)]
    tri = np.zeros(g.n_nodes, dtype=np.int64)
    for u, v in zip(g.src.tolist(), g.dst.tolist()):
        common = nbrs[u] & nbrs[v]
        for x in common:
            tri[x] += 1
    # each triangle at x is seen from its opposite edge exactly once
    return tri


def clustering(g: Graph) -> tuple[float, float]:
    """(mean local clustering, transitivity); nodes with degree < 2 count as 0."""
    if g.n_nodes == 0:
        return 0.0, 0.0
    tri = _triangles_per_node(g).astype(np.float64)
    deg = g.degrees.astype(np.float64)
    pairs = deg * (deg - 1) / 2
    local = np.divide(tri, pairs, out=np.zeros_like(tri), where=pairs > 0)
    total_pairs = pairs.sum()
    trans = float(tri.sum() / total_pairs) if total_pairs > 0 else 0.0
    return float(local.mean()), trans


def global_properties(g: Graph) -> GlobalProperties:
    """Compute the hop-based global properties of ``g``.

    Path quantities are taken over reachable pairs only, so disconnected
    graphs are fine; ``component_count`` records how many pieces there are.
    """
    V, E = g.n_nodes, g.n_edges
    if V == 0:
        raise GraphError("global properties need at least one node")
    W = g.total_weight
    density = 2.0 * E / (V * (V - 1)) if V > 1 else 0.0
    avg_degree = 2.0 * E / V
    counts = hop_distance_counts(g)
    reachable = counts[1:]
    n_pairs = int(reachable.sum())
    if n_pairs:
        hops = np.arange(1, counts.shape[0])
        diameter = int(counts.shape[0] - 1)
        avg_sp = float((hops * reachable).sum() / n_pairs)
        efficiency = float((reachable / hops).sum() / (V * (V - 1)))
    else:
        diameter, avg_sp, efficiency = None, None, 0.0
    estimate = None
    if V > 1 and avg_degree > 1:
        estimate = math.log(V) / math.log(avg_degree)
    avg_c, trans = clustering(g)
    return GlobalProperties(
        node_count=V,
        edge_count=E,
        density=density,
        diameter=diameter,
        avg_shortest_path=avg_sp,
        avg_degree=avg_degree,
        avg_weighted_degree=2.0 * W / V,
        max_degree=int(g.degrees.max()) if V else 0,
        assortativity=degree_assortativity(g),
        avg_clustering=avg_c,
        transitivity=trans,
        global_efficiency=efficiency,
        total_weight=W,
        component_count=len(g.connected_components()),
        path_length_estimate=estimate,
    )
