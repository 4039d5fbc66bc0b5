"""Louvain community detection and mesoscopic partition metrics."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Union

import numpy as np

from spine import _kernels
from spine.graph import Graph, GraphError

logger = logging.getLogger(__name__)

DEFAULT_SEED_COUNT = 10


@dataclass(frozen=True, eq=False)
class Partition:
    """Dense community assignment, ``assignment[node] in 0..community_count-1``."""

    assignment: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)
        if a.size and (a.min() < 0 or np.unique(a).size != a.max() + 1):
            raise ValueError("community ids must be dense integers starting at 0")

    @classmethod
    def from_labels(cls, labels: Iterable, seed: Optional[int] = None) -> "Partition":
        """Relabel arbitrary community tags densely in order of first appearance."""
        ids: dict = {}
        out = [ids.setdefault(x, len(ids)) for x in labels]
        return cls(np.array(out, dtype=np.int64), seed)

    @property
    def community_count(self) -> int:
        return int(self.assignment.max()) + 1 if self.assignment.size else 0

    def communities(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.assignment == c) for c in range(self.community_count)]

    def __len__(self):
        return int(self.assignment.shape[0])

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.assignment, other.assignment)

    __hash__ = None


def _check_cover(g: Graph, p: Partition) -> None:
    if len(p) != g.n_nodes:
        raise GraphError(f"partition covers {len(p)} nodes but graph has {g.n_nodes}")


def modularity(g: Graph, p: Partition) -> float:
    """Weighted Newman modularity of ``p`` on ``g`` (resolution 1)."""
    _check_cover(g, p)
    m = g.total_weight
    if m <= 0:
        raise GraphError("modularity is undefined for a graph without weight")
    c = p.assignment
    inside = float(g.weight[c[g.src] == c[g.dst]].sum())
    tot = np.bincount(c, weights=g.strengths, minlength=p.community_count)
    return inside / m - float((tot * tot).sum()) / (4.0 * m * m)


class _Level:
    """Weighted graph used inside Louvain; may carry self-loops after aggregation."""

    def __init__(self, indptr, indices, weights, self_w):
        self.indptr, self.indices, self.weights, self.self_w = indptr, indices, weights, self_w
        self.n = indptr.shape[0] - 1
        rows = np.repeat(np.arange(self.n), np.diff(indptr))
        row_sum = np.bincount(rows, weights=weights, minlength=self.n).astype(np.float64)
        self.strength = np.ascontiguousarray(row_sum + 2.0 * self_w)

    @classmethod
    def from_graph(cls, g: Graph) -> "_Level":
        indptr, indices, weights = g.csr
        return cls(indptr, indices, weights, np.zeros(g.n_nodes))

    def aggregate(self, comm: np.ndarray) -> "_Level":
        k = int(comm.max()) + 1
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        cu, cv = comm[rows], comm[self.indices]
        self_w = np.bincount(comm, weights=self.self_w, minlength=k)
        same = cu == cv
        # each internal edge appears twice in the symmetric adjacency
        self_w += np.bincount(cu[same], weights=self.weights[same], minlength=k) / 2.0
        cu, cv, w = cu[~same], cv[~same], self.weights[~same]
        key = cu * k + cv
        uniq, inv = np.unique(key, return_inverse=True)
        wsum = np.bincount(inv, weights=w, minlength=uniq.shape[0])
        r, c = uniq // k, uniq % k
        indptr = np.zeros(k + 1, dtype=np.int64)
        np.cumsum(np.bincount(r, minlength=k), out=indptr[1:])
        return _Level(indptr, np.ascontiguousarray(c, dtype=np.int64), np.ascontiguousarray(wsum, dtype=np.float64), self_w)


def _dense(comm: np.ndarray) -> np.ndarray:
    _, first = np.unique(comm, return_index=True)
    order = np.argsort(first, kind="stable")
    remap = np.empty(comm.max() + 1, dtype=np.int64)
    remap[np.unique(comm)[order]] = np.arange(order.shape[0])
    return remap[comm]


def louvain(
    g: Graph,
    seed: int = 0,
    on_level: Optional[Callable[[int, Partition, float], None]] = None,
    backend: Optional[str] = None,
) -> Partition:
    """Weighted Louvain (local moving plus aggregation, resolution 1).

    ``seed`` drives the node visiting order at every level, so results are
    reproducible for a fixed seed. ``on_level(level, partition, Q)`` is
    called after each aggregation pass with the partition of the original
    nodes reached so far.
    """
    if g.n_nodes == 0:
        raise GraphError("louvain needs at least one node")
    if g.n_edges == 0:
        logger.warning("graph has no edges; returning singleton partition")
        return Partition(np.arange(g.n_nodes), seed)
    kern = _kernels.get_backend(backend)
    rng = np.random.default_rng(seed)
    level = _Level.from_graph(g)
    m2 = 2.0 * g.total_weight
    membership = np.arange(g.n_nodes, dtype=np.int64)
    depth = 0
    while True:
        comm = np.arange(level.n, dtype=np.int64)
        tot = level.strength.copy()
        order = rng.permutation(level.n).astype(np.int64)
        moves = kern.move_nodes(level.indptr, level.indices, level.weights, level.strength, comm, tot, order, m2)
        if moves == 0:
            break
        comm = _dense(comm)
        membership = comm[membership]
        depth += 1
        if on_level is not None:
            part = Partition(membership.copy(), seed)
            on_level(depth, part, modularity(g, part))
        if int(comm.max()) + 1 == level.n:
            break
        level = level.aggregate(comm)
    return Partition(_dense(membership), seed)


def best_louvain(g: Graph, seeds: Union[int, Iterable[int]] = DEFAULT_SEED_COUNT) -> Partition:
    """Best-modularity Louvain partition over several seeds (ties: lowest seed).

    An integer ``seeds`` means ``range(seeds)``.
    """
    if isinstance(seeds, int):
        seeds = range(seeds)
    best, best_q = None, -math.inf
    for s in sorted(seeds):
        p = louvain(g, s)
        q = modularity(g, p) if g.n_edges else 0.0
        if q > best_q:
            best, best_q = p, q
    if best is None:
        raise ValueError("no seeds given")
    return best


def detect(g: Graph, seed: Union[int, str, None] = "auto") -> Partition:
    """Louvain with an explicit seed, or best-of-10 when ``seed`` is ``"auto"``/None."""
    if seed is None or seed == "auto":
        return best_louvain(g)
    return louvain(g, int(seed))


def participation_coefficients(g: Graph, p: Partition) -> np.ndarray:
    """Per-node participation coefficient ``1 - sum_c (k_ic / k_i)^2`` (unweighted).

    Isolated nodes get 0.
    """
    _check_cover(g, p)
    n, C = g.n_nodes, max(p.community_count, 1)
    c = p.assignment
    kic = np.zeros((n, C), dtype=np.float64)
    np.add.at(kic, (g.src, c[g.dst]), 1.0)
    np.add.at(kic, (g.dst, c[g.src]), 1.0)
    k = g.degrees.astype(np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = kic / k[:, None]
    out = 1.0 - np.nansum(frac * frac, axis=1)
    out[k == 0] = 0.0
    return out


def community_connectivity(g: Graph, p: Partition) -> tuple[float, float]:
    """(inter, intra): total weight on edges crossing / staying inside communities."""
    _check_cover(g, p)
    c = p.assignment
    same = c[g.src] == c[g.dst]
    intra = math.fsum(g.weight[same].tolist())
    inter = math.fsum(g.weight[~same].tolist())
    return inter, intra


def restrict_partition(p: Partition, parent: Graph, child: Graph) -> Partition:
    """Carry a partition of ``parent`` over to ``child`` by node label.

    Community ids are kept as in the parent then compacted.
    """
    index = {label: i for i, label in enumerate(parent.labels)}
    try:
        tags = [int(p.assignment[index[label]]) for label in child.labels]
    except KeyError as exc:
        raise GraphError(f"node {exc.args[0]!r} is not in the parent graph") from None
    uniq = sorted(set(tags))
    remap = {t: i for i, t in enumerate(uniq)}
    return Partition(np.array([remap[t] for t in tags], dtype=np.int64), p.seed)


def write_partition(g: Graph, p: Partition, path) -> None:
    _check_cover(g, p)
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for label, c in zip(g.labels, p.assignment.tolist()):
            fh.write(f"{label}\t{c}\n")


def read_partition(g: Graph, path) -> Partition:
    index = {label: i for i, label in enumerate(g.labels)}
    tags = [None] * g.n_nodes
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            label, _, c = line.partition("\t")
            if label not in index:
                raise GraphError(f"line {lineno}: unknown node {label!r}")
            tags[index[label]] = int(c)
    if any(t is None for t in tags):
        raise GraphError("partition file does not cover every node")
    return Partition.from_labels(tags)
