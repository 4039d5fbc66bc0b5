"""Split a graph into local (intra-community) and global (inter-community) components."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from spine.community import Partition, _check_cover
from spine.graph import Graph


@dataclass(frozen=True)
class Component:
    """One piece of the decomposition.

    ``edge_ids`` index the parent graph's edges; ``graph`` is the pruned
    subgraph on exactly those edges, so ``graph`` edge ``i`` is parent edge
    ``edge_ids[i]``.
    """

    kind: str  # "local" or "global"
    index: int
    graph: Graph
    edge_ids: np.ndarray
    community: Optional[int] = None


@dataclass(frozen=True)
class ComponentStructure:
    locals: list
    globals: list
    partition: Partition
    seed: Optional[int] = None
    parent_edges: int = field(default=0)

    @property
    def components(self) -> list:
        return list(self.locals) + list(self.globals)


def extract_component_structure(g: Graph, p: Partition) -> ComponentStructure:
    """Decompose ``g`` under ``p``.

    Locals: one per community that keeps at least one internal edge.
    Globals: connected components of the subgraph made of inter-community
    edges, ordered by their smallest node id. Every edge of ``g`` lands in
    exactly one component.
    """
    _check_cover(g, p)
    c = p.assignment
    cu, cv = c[g.src], c[g.dst]
    intra = cu == cv

    locals_ = []
    for comm in range(p.community_count):
        ids = np.flatnonzero(intra & (cu == comm))
        if ids.size == 0:
            continue
        locals_.append(Component("local", len(locals_), g.edge_subgraph(ids), ids, comm))

    globals_ = []
    inter_ids = np.flatnonzero(~intra)
    if inter_ids.size:
        inter = g.edge_subgraph(inter_ids, prune=False)
        node_comp = np.full(g.n_nodes, -1, dtype=np.int64)
        pieces = [nodes for nodes in inter.connected_components() if inter.degrees[nodes[0]] > 0]
        for k, nodes in enumerate(pieces):
            node_comp[nodes] = k
        edge_comp = node_comp[g.src[inter_ids]]
        for k in range(len(pieces)):
            ids = inter_ids[edge_comp == k]
            globals_.append(Component("global", k, g.edge_subgraph(ids), ids))

    return ComponentStructure(locals_, globals_, p, p.seed, g.n_edges)
