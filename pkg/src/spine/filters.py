"""Edge filters: global weight threshold and the disparity filter.

Both filters rank edges and keep a budget of them. Ranking ties are broken
by weight (descending), then by endpoint ids (ascending); this order is part
of the public contract, so selections are reproducible and nested across
fractions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from spine.graph import Graph

TIEBREAK_VERSION = "weight-desc/u-asc/v-asc/v1"


@dataclass(frozen=True)
class EdgeScore:
    u: int
    v: int
    score: float
    weight: float


@dataclass(frozen=True)
class Backbone:
    """Retained subgraph (isolated nodes pruned) plus how it was obtained."""

    graph: Graph
    provenance: dict = field(default_factory=dict)

    @property
    def n_edges(self) -> int:
        return self.graph.n_edges

    @property
    def n_nodes(self) -> int:
        return self.graph.n_nodes


def edge_budget(edge_count: int, fraction: float) -> int:
    """Number of edges to keep: ``fraction * edge_count`` rounded half to even.

    The fraction goes through its decimal repr so 0.3 * 1255 is exactly
    376.5 (and rounds to 376) rather than a binary approximation.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must be in [0, 1], got {fraction}")
    return round(Fraction(repr(float(fraction))) * int(edge_count))


def _tiebreak_order(g: Graph, primary: Optional[np.ndarray] = None) -> np.ndarray:
    # lexsort sorts by the last key first
    keys = [g.dst, g.src, -g.weight]
    if primary is not None:
        keys.append(primary)
    return np.lexsort(keys)


def threshold_ranking(g: Graph) -> np.ndarray:
    """Edge indices from heaviest to lightest, ties by (u, v)."""
    return _tiebreak_order(g)


def global_threshold_edges(g: Graph, fraction: float) -> np.ndarray:
    """Indices of the ``edge_budget`` heaviest edges, in canonical edge order."""
    budget = edge_budget(g.n_edges, fraction)
    return np.sort(threshold_ranking(g)[:budget])


def global_threshold(g: Graph, fraction: float) -> Backbone:
    ids = global_threshold_edges(g, fraction)
    return Backbone(g.edge_subgraph(ids), {"method": "global_threshold", "fraction": fraction})


def side_scores(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Disparity significance of every edge seen from its ``src`` and from its ``dst`` end.

    ``alpha = (1 - w / s) ** (k - 1)`` with ``s`` the strength and ``k`` the
    degree of that endpoint; degree-one endpoints give 1.
    """
    k = g.degrees
    s = g.strengths

    def side(node):
        kk = k[node]
        p = g.weight / s[node]
        out = np.power(1.0 - p, (kk - 1).astype(np.float64))
        return np.where(kk > 1, out, 1.0)

    return side(g.src), side(g.dst)


def disparity_score_array(g: Graph) -> np.ndarray:
    a, b = side_scores(g)
    return np.minimum(a, b)


def disparity_scores(g: Graph) -> list[EdgeScore]:
    """One :class:`EdgeScore` per edge (lower score = more significant)."""
    scores = disparity_score_array(g)
    return [
        EdgeScore(u, v, float(sc), w)
        for (u, v, w), sc in zip(g.edges(), scores.tolist())
    ]


def disparity_ranking(g: Graph) -> np.ndarray:
    """Edge indices from most to least significant."""
    return _tiebreak_order(g, disparity_score_array(g))


def disparity_edges(g: Graph, fraction: Optional[float] = None, alpha: Optional[float] = None) -> np.ndarray:
    if (fraction is None) == (alpha is None):
        raise ValueError("give exactly one of fraction or alpha")
    if alpha is not None:
        return np.flatnonzero(disparity_score_array(g) < alpha)
    budget = edge_budget(g.n_edges, fraction)
    return np.sort(disparity_ranking(g)[:budget])


def disparity_filter(g: Graph, fraction: Optional[float] = None, alpha: Optional[float] = None) -> Backbone:
    """Disparity-filter backbone, keeping a fraction of edges or those with score < alpha."""
    ids = disparity_edges(g, fraction=fraction, alpha=alpha)
    prov = {"method": "disparity"}
    prov.update({"fraction": fraction} if alpha is None else {"alpha": alpha})
    return Backbone(g.edge_subgraph(ids), prov)


FILTERS = {
    "global_threshold": global_threshold_edges,
    "disparity": lambda g, fraction: disparity_edges(g, fraction=fraction),
}
ALIASES = {"gt": "global_threshold", "df": "disparity", "global_threshold": "global_threshold", "disparity": "disparity"}


def select_edges(g: Graph, kind: str, fraction: float) -> np.ndarray:
    """Run the filter called ``kind`` in fraction mode and return kept edge indices."""
    try:
        fn = FILTERS[ALIASES[kind]]
    except KeyError:
        raise ValueError(f"unknown filter {kind!r}; choose from {sorted(ALIASES)}") from None
    return fn(g, fraction)
